#include "entropic/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include <Eigen/Eigenvalues>

namespace entropic {

const GridInfo& Space::grid() const {
    if (!grid_) throw Error("backend-unsupported", "operation requires a torus-grid backend");
    return *grid_;
}

ScalarField Space::apply_laplacian(const ScalarField& f) const {
    if (f.size() != measure_.size())
        throw Error("invalid-input", "field length does not match node count");
    ScalarField out = ScalarField::Zero(f.size());
    for (const Edge& e : edges_) {
        const double d = f[e.j] - f[e.i];
        out[e.i] += e.conductance * d;
        out[e.j] -= e.conductance * d;
    }
    out.array() /= measure_.array();
    return out;
}

const SpectralDecomposition& Space::spectrum() const {
    std::call_once(spectral_->once, [this] {
        const int n = size();
        // Symmetrize under the sqrt(m) similarity: S_ij = w_ij / sqrt(m_i m_j).
        Eigen::VectorXd sqm = measure_.array().sqrt();
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
        for (const Edge& e : edges_) {
            const double v = e.conductance / (sqm[e.i] * sqm[e.j]);
            s(e.i, e.j) += v;
            s(e.j, e.i) += v;
            s(e.i, e.i) -= e.conductance / measure_[e.i];
            s(e.j, e.j) -= e.conductance / measure_[e.j];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(-s);
        if (solver.info() != Eigen::Success)
            throw Error("decomposition-failed", "symmetric eigensolver did not converge");

        auto dec = std::make_unique<SpectralDecomposition>();
        dec->eigenvalues = solver.eigenvalues().cwiseMax(0.0);
        dec->eigenfields = solver.eigenvectors();
        // Undo the similarity: columns become m-orthonormal.
        for (int k = 0; k < n; ++k) dec->eigenfields.col(k).array() /= sqm.array();
        // The kernel is known in closed form; pin it so constants and total
        // mass are preserved to the last bit.
        dec->eigenvalues[0] = 0.0;
        dec->eigenfields.col(0).setOnes();
        spectral_->value = std::move(dec);
    });
    return *spectral_->value;
}

Space Space::from_parts(Eigen::VectorXd measure, std::vector<Edge> edges,
                        Eigen::MatrixXd distance, Backend backend,
                        std::optional<GridInfo> grid, CurvatureParams curvature) {
    Space s;
    s.measure_ = std::move(measure);
    s.edges_ = std::move(edges);
    s.distance_ = std::move(distance);
    s.diameter_ = s.distance_.size() > 0 ? s.distance_.maxCoeff() : 0.0;
    s.backend_ = backend;
    s.grid_ = std::move(grid);
    s.curvature_ = curvature;
    return s;
}

Density make_density(const Space& space, ScalarField values, bool renormalize) {
    if (values.size() != space.size())
        throw Error("invalid-input", "density length does not match node count");
    if (values.minCoeff() < 0.0)
        throw Error("invalid-input", "density has a negative entry");
    double mass = space.integrate(values);
    if (mass <= 0.0) throw Error("invalid-input", "density has zero total mass");
    if (!renormalize && std::abs(mass - 1.0) > 1e-10)
        throw Error("invalid-input", "density mass differs from 1 beyond tolerance");
    return Density{values / mass};
}

Space build_torus_grid(int dims, int resolution, const std::vector<double>& side_lengths,
                       int max_nodes) {
    if (dims < 1 || dims > 3) throw Error("invalid-input", "dims must be 1, 2 or 3");
    if (resolution < 4) throw Error("invalid-resolution", "resolution must be at least 4 per axis");
    if (static_cast<int>(side_lengths.size()) != dims)
        throw Error("invalid-input", "need one side length per axis");
    for (double s : side_lengths)
        if (!(s > 0.0)) throw Error("invalid-input", "side lengths must be positive");

    GridInfo grid;
    grid.dims = dims;
    for (int a = 0; a < dims; ++a) {
        grid.resolution[a] = resolution;
        grid.side[a] = side_lengths[a];
        grid.spacing[a] = side_lengths[a] / resolution;
    }
    const int n = grid.node_count();
    if (n > max_nodes) throw Error("problem-too-large", "grid exceeds the configured node limit");

    Eigen::VectorXd measure = Eigen::VectorXd::Constant(n, 1.0 / n);

    // Neighbor conductance w = m / h^2 reproduces the second-difference stencil.
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * dims);
    for (int idx = 0; idx < n; ++idx) {
        auto c = grid.coords(idx);
        for (int a = 0; a < dims; ++a) {
            auto cn = c;
            cn[a] = c[a] + 1;
            int jdx = grid.index(cn);
            double h = grid.spacing[a];
            edges.push_back(Edge{idx, jdx, 1.0 / (n * h * h), h});
        }
    }

    // Flat-torus distance: per-axis wraparound, Euclidean combination.
    Eigen::MatrixXd dist(n, n);
    for (int i = 0; i < n; ++i) {
        auto ci = grid.coords(i);
        for (int j = i; j < n; ++j) {
            auto cj = grid.coords(j);
            double d2 = 0.0;
            double d1 = 0.0;
            for (int a = 0; a < dims; ++a) {
                int k = std::abs(ci[a] - cj[a]);
                k = std::min(k, grid.resolution[a] - k);
                double da = k * grid.spacing[a];
                d1 = da;
                d2 += da * da;
            }
            double d = dims == 1 ? d1 : std::sqrt(d2);
            dist(i, j) = d;
            dist(j, i) = d;
        }
    }

    return Space::from_parts(std::move(measure), std::move(edges), std::move(dist),
                             Backend::torus_grid, grid,
                             CurvatureParams{0.0, static_cast<double>(dims)});
}

Space build_weighted_graph(int nodes, const std::vector<Edge>& edges,
                           Eigen::VectorXd measure, int max_nodes) {
    if (nodes < 1) throw Error("invalid-input", "need at least one node");
    if (nodes > max_nodes) throw Error("problem-too-large", "graph exceeds the configured node limit");
    if (measure.size() != nodes) throw Error("invalid-input", "measure length does not match node count");
    if (measure.minCoeff() <= 0.0) throw Error("invalid-input", "measure must be positive");

    for (const Edge& e : edges) {
        if (e.i < 0 || e.i >= nodes || e.j < 0 || e.j >= nodes || e.i == e.j)
            throw Error("invalid-input", "edge endpoints out of range");
        if (!(e.conductance > 0.0)) throw Error("invalid-weight", "edge conductance must be positive");
        if (!(e.length > 0.0)) throw Error("invalid-weight", "edge length must be positive");
    }

    // Connectivity over the edge set.
    {
        std::vector<std::vector<int>> adj(nodes);
        for (const Edge& e : edges) {
            adj[e.i].push_back(e.j);
            adj[e.j].push_back(e.i);
        }
        std::vector<char> seen(nodes, 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int count = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++count;
                    q.push(v);
                }
        }
        if (count != nodes) throw Error("disconnected-space", "graph is not connected");
    }

    double mass = measure.sum();
    if (std::abs(mass - 1.0) > 0.01)
        throw Error("invalid-input", "measure mass differs from 1 by more than 1%");
    measure /= mass;

    // All-pairs shortest paths over edge lengths (dense Floyd-Warshall).
    const double inf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(nodes, nodes, inf);
    for (int i = 0; i < nodes; ++i) dist(i, i) = 0.0;
    for (const Edge& e : edges) {
        dist(e.i, e.j) = std::min(dist(e.i, e.j), e.length);
        dist(e.j, e.i) = dist(e.i, e.j);
    }
    for (int k = 0; k < nodes; ++k)
        for (int i = 0; i < nodes; ++i) {
            const double dik = dist(i, k);
            if (dik == inf) continue;
            for (int j = 0; j < nodes; ++j) {
                const double via = dik + dist(k, j);
                if (via < dist(i, j)) {
                    dist(i, j) = via;
                    dist(j, i) = via;
                }
            }
        }

    return Space::from_parts(std::move(measure), edges, std::move(dist),
                             Backend::weighted_graph, std::nullopt, CurvatureParams{0.0, 1.0});
}

SpaceDiagnostics validate_space(const Space& space, std::uint64_t seed) {
    SpaceDiagnostics diag;
    const int n = space.size();
    const auto& m = space.measure();
    const auto& d = space.distance();

    auto push = [&diag](const std::string& name, double residual, double tol) {
        diag.checks.push_back(SpaceCheck{name, residual <= tol, residual});
    };

    push("measure-normalization", std::abs(m.sum() - 1.0), 1e-12);
    diag.checks.push_back(
        SpaceCheck{"measure-positivity", m.minCoeff() > 0.0, std::max(0.0, -m.minCoeff())});

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss;
    auto random_field = [&] {
        ScalarField f(n);
        for (int i = 0; i < n; ++i) f[i] = gauss(rng);
        return f;
    };

    double adj_res = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
        ScalarField f = random_field(), g = random_field();
        double lhs = space.inner(g, space.apply_laplacian(f));
        double rhs = space.inner(f, space.apply_laplacian(g));
        adj_res = std::max(adj_res, std::abs(lhs - rhs));
    }
    push("laplacian-self-adjointness", adj_res, 1e-12);

    push("laplacian-kills-constants",
         space.apply_laplacian(ScalarField::Ones(n)).cwiseAbs().maxCoeff(), 0.0);

    double mass_res = 0.0;
    for (int trial = 0; trial < 4; ++trial)
        mass_res = std::max(mass_res, std::abs(space.integrate(space.apply_laplacian(random_field()))));
    push("laplacian-zero-mean", mass_res, 1e-12);

    push("distance-symmetry", (d - d.transpose()).cwiseAbs().maxCoeff(), 0.0);
    push("distance-diagonal", d.diagonal().cwiseAbs().maxCoeff(), 0.0);

    // Allow a few ulp of slack for the additions in the triangle check;
    // exhaustive up to 512 nodes, randomly sampled triples beyond that.
    double tri_res = 0.0;
    if (n <= 512) {
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    tri_res = std::max(tri_res, d(i, j) - (d(i, k) + d(k, j)));
    } else {
        std::uniform_int_distribution<int> node(0, n - 1);
        for (long trial = 0; trial < 2000000; ++trial) {
            const int i = node(rng), j = node(rng), k = node(rng);
            tri_res = std::max(tri_res, d(i, j) - (d(i, k) + d(k, j)));
        }
    }
    push("distance-triangle-inequality", std::max(tri_res, 0.0),
         8.0 * std::numeric_limits<double>::epsilon() * std::max(space.diameter(), 1.0));

    return diag;
}

}  // namespace entropic
