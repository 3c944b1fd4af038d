#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entropic/error.hpp"

namespace entropic {

/// One real value per node.
using ScalarField = Eigen::VectorXd;

enum class Backend { torus_grid, weighted_graph };

/// Undirected edge with a conductance (enters the Laplacian) and a length
/// (enters shortest-path distances). The two are independent inputs on
/// graphs; on torus grids both derive from the spacing.
struct Edge {
    int i = 0;
    int j = 0;
    double conductance = 0.0;
    double length = 0.0;
};

/// Periodic grid bookkeeping: row-major node layout, wraparound indexing.
struct GridInfo {
    int dims = 1;
    std::array<int, 3> resolution{{1, 1, 1}};
    std::array<double, 3> side{{1.0, 1.0, 1.0}};
    std::array<double, 3> spacing{{1.0, 1.0, 1.0}};

    int node_count() const {
        int n = 1;
        for (int a = 0; a < dims; ++a) n *= resolution[a];
        return n;
    }
    /// Flat index of (possibly out-of-range) axis coordinates, wrapped.
    int index(std::array<int, 3> c) const {
        int idx = 0;
        for (int a = 0; a < dims; ++a) {
            int r = resolution[a];
            int v = ((c[a] % r) + r) % r;
            idx = idx * r + v;
        }
        return idx;
    }
    std::array<int, 3> coords(int idx) const {
        std::array<int, 3> c{{0, 0, 0}};
        for (int a = dims - 1; a >= 0; --a) {
            c[a] = idx % resolution[a];
            idx /= resolution[a];
        }
        return c;
    }
};

/// Eigendecomposition of -Laplacian in the measure-weighted inner product:
/// eigenvalues ascending with eigenvalues[0] == 0 and eigenfields.col(0)
/// constant; columns satisfy sum_i m_i e_j(i) e_k(i) = delta_jk.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenfields;
};

/// Nominal lower Ricci bound and dimension used when evaluating curvature
/// bound formulas; (0, dims) for flat torus grids.
struct CurvatureParams {
    double k = 0.0;
    double n = 1.0;
};

/// Discrete metric measure space: probability measure, self-adjoint edge
/// Laplacian, geodesic distance table. Immutable after construction and
/// safe to share across threads.
class Space {
public:
    int size() const { return static_cast<int>(measure_.size()); }
    Backend backend() const { return backend_; }
    const Eigen::VectorXd& measure() const { return measure_; }
    const Eigen::MatrixXd& distance() const { return distance_; }
    double diameter() const { return diameter_; }
    CurvatureParams curvature() const { return curvature_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Grid bookkeeping; throws backend-unsupported on graph backends.
    const GridInfo& grid() const;

    /// (Delta f)(i) = (1/m_i) sum_j w_ij (f_j - f_i). Exact zero on constants.
    ScalarField apply_laplacian(const ScalarField& f) const;

    double integrate(const ScalarField& f) const { return measure_.dot(f); }
    double inner(const ScalarField& f, const ScalarField& g) const {
        return (measure_.array() * f.array() * g.array()).sum();
    }

    /// Cached full eigendecomposition of -Delta; computed once, thread-safe.
    const SpectralDecomposition& spectrum() const;

    /// Assemble a space from raw parts without validation (used by the
    /// CSV ingestion path and by diagnostics tests).
    static Space from_parts(Eigen::VectorXd measure, std::vector<Edge> edges,
                            Eigen::MatrixXd distance, Backend backend,
                            std::optional<GridInfo> grid, CurvatureParams curvature);

private:
    Space() = default;

    Eigen::VectorXd measure_;
    std::vector<Edge> edges_;
    Eigen::MatrixXd distance_;
    double diameter_ = 0.0;
    Backend backend_ = Backend::weighted_graph;
    std::optional<GridInfo> grid_;
    CurvatureParams curvature_;

    struct SpectralCache {
        std::once_flag once;
        std::unique_ptr<SpectralDecomposition> value;
    };
    std::shared_ptr<SpectralCache> spectral_ = std::make_shared<SpectralCache>();
};

/// Nonnegative field with unit integral against the space measure.
struct Density {
    ScalarField values;
};

/// Validates nonnegativity and normalizes to unit mass (rejecting inputs
/// whose mass is off by more than 1% unless renormalize is set).
Density make_density(const Space& space, ScalarField values, bool renormalize = true);

/// Kernels are stored densely, so node counts are capped by configuration.
inline constexpr int kDefaultMaxNodes = 4096;

/// Flat periodic grid: uniform measure 1/n, second-difference Laplacian,
/// wraparound distances combined Euclidean across axes.
Space build_torus_grid(int dims, int resolution, const std::vector<double>& side_lengths,
                       int max_nodes = kDefaultMaxNodes);

/// General backend from an edge list; distances via shortest paths over
/// edge lengths, measure renormalized to a probability.
Space build_weighted_graph(int nodes, const std::vector<Edge>& edges,
                           Eigen::VectorXd measure, int max_nodes = kDefaultMaxNodes);

struct SpaceCheck {
    std::string name;
    bool pass = false;
    double residual = 0.0;
};

struct SpaceDiagnostics {
    std::vector<SpaceCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Measures every Space invariant (measure normalization/positivity,
/// self-adjointness on random fields, kernel of the Laplacian, distance
/// symmetry/triangle inequality) and reports residuals. Never throws.
SpaceDiagnostics validate_space(const Space& space, std::uint64_t seed = 0);

}  // namespace entropic
