#include "entropic/calculus.hpp"

namespace entropic {

ScalarField gamma(const Space& space, const ScalarField& f, const ScalarField& g) {
    if (f.size() != space.size() || g.size() != space.size())
        throw Error("invalid-input", "field length mismatch");
    ScalarField out = ScalarField::Zero(space.size());
    for (const Edge& e : space.edges()) {
        const double v = e.conductance * (f[e.j] - f[e.i]) * (g[e.j] - g[e.i]);
        out[e.i] += v;
        out[e.j] += v;
    }
    out.array() /= 2.0 * space.measure().array();
    return out;
}

ScalarField gamma2(const Space& space, const ScalarField& f) {
    ScalarField gff = gamma(space, f, f);
    ScalarField lf = space.apply_laplacian(f);
    return 0.5 * space.apply_laplacian(gff) - gamma(space, f, lf);
}

Eigen::VectorXd HessianField::quadratic_form(const VectorField& v) const {
    const int n = static_cast<int>(entries.rows());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < dims; ++a)
        for (int b = 0; b < dims; ++b)
            out.array() += entries.col(a * dims + b).array() * v.components.col(a).array() *
                           v.components.col(b).array();
    return out;
}

VectorField HessianField::apply(const VectorField& v) const {
    VectorField out;
    out.dims = dims;
    out.components = Eigen::MatrixXd::Zero(entries.rows(), dims);
    for (int a = 0; a < dims; ++a)
        for (int b = 0; b < dims; ++b)
            out.components.col(a).array() +=
                entries.col(a * dims + b).array() * v.components.col(b).array();
    return out;
}

VectorField gradient_grid(const Space& space, const ScalarField& f) {
    const GridInfo& grid = space.grid();
    const int n = space.size();
    VectorField out;
    out.dims = grid.dims;
    out.components.resize(n, grid.dims);
    for (int idx = 0; idx < n; ++idx) {
        auto c = grid.coords(idx);
        for (int a = 0; a < grid.dims; ++a) {
            auto cp = c, cm = c;
            cp[a] = c[a] + 1;
            cm[a] = c[a] - 1;
            out.components(idx, a) =
                (f[grid.index(cp)] - f[grid.index(cm)]) / (2.0 * grid.spacing[a]);
        }
    }
    return out;
}

HessianField hessian_grid(const Space& space, const ScalarField& f) {
    const GridInfo& grid = space.grid();
    const int n = space.size();
    HessianField out;
    out.dims = grid.dims;
    out.entries.resize(n, grid.dims * grid.dims);
    for (int idx = 0; idx < n; ++idx) {
        auto c = grid.coords(idx);
        for (int a = 0; a < grid.dims; ++a) {
            const double ha = grid.spacing[a];
            auto cp = c, cm = c;
            cp[a] = c[a] + 1;
            cm[a] = c[a] - 1;
            out.entries(idx, a * grid.dims + a) =
                (f[grid.index(cp)] - 2.0 * f[idx] + f[grid.index(cm)]) / (ha * ha);
            for (int b = a + 1; b < grid.dims; ++b) {
                const double hb = grid.spacing[b];
                auto cpp = c, cpm = c, cmp = c, cmm = c;
                cpp[a] = cpm[a] = c[a] + 1;
                cmp[a] = cmm[a] = c[a] - 1;
                cpp[b] = cmp[b] = c[b] + 1;
                cpm[b] = cmm[b] = c[b] - 1;
                const double mixed = (f[grid.index(cpp)] - f[grid.index(cpm)] -
                                      f[grid.index(cmp)] + f[grid.index(cmm)]) /
                                     (4.0 * ha * hb);
                out.entries(idx, a * grid.dims + b) = mixed;
                out.entries(idx, b * grid.dims + a) = mixed;
            }
        }
    }
    return out;
}

ScalarField divergence_grid(const Space& space, const VectorField& v) {
    const GridInfo& grid = space.grid();
    if (v.dims != grid.dims) throw Error("invalid-input", "vector field dimension mismatch");
    const int n = space.size();
    ScalarField out = ScalarField::Zero(n);
    for (int idx = 0; idx < n; ++idx) {
        auto c = grid.coords(idx);
        for (int a = 0; a < grid.dims; ++a) {
            auto cp = c, cm = c;
            cp[a] = c[a] + 1;
            cm[a] = c[a] - 1;
            out[idx] += (v.components(grid.index(cp), a) - v.components(grid.index(cm), a)) /
                        (2.0 * grid.spacing[a]);
        }
    }
    return out;
}

}  // namespace entropic
