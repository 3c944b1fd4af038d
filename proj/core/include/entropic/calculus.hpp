#pragma once

#include "entropic/space.hpp"

namespace entropic {

/// Carre du champ Gamma(f,g) = (Delta(fg) - f Delta g - g Delta f)/2,
/// evaluated in edge form (1/2m_i) sum_j w_ij (f_j - f_i)(g_j - g_i) so that
/// Gamma(f,f) >= 0 holds exactly on every backend.
ScalarField gamma(const Space& space, const ScalarField& f, const ScalarField& g);

/// Iterated carre du champ Gamma2(f) = Delta Gamma(f,f)/2 - Gamma(f, Delta f).
ScalarField gamma2(const Space& space, const ScalarField& f);

/// Per-node d-tuple; grid backend only.
struct VectorField {
    int dims = 0;
    Eigen::MatrixXd components;  // n x dims

    Eigen::VectorXd squared_norm() const { return components.rowwise().squaredNorm(); }
};

/// Per-node symmetric d x d array; entry (a,b) lives in column a*dims+b and
/// is assigned together with (b,a), so symmetry is exact by construction.
struct HessianField {
    int dims = 0;
    Eigen::MatrixXd entries;  // n x dims*dims

    double at(int node, int a, int b) const { return entries(node, a * dims + b); }
    /// H(V,V) per node.
    Eigen::VectorXd quadratic_form(const VectorField& v) const;
    /// |H|_HS^2 per node.
    Eigen::VectorXd hs_norm_squared() const { return entries.rowwise().squaredNorm(); }
    /// (H V)_a per node, for the Leibniz-rule checks.
    VectorField apply(const VectorField& v) const;
};

/// Central differences per axis with periodic wraparound.
VectorField gradient_grid(const Space& space, const ScalarField& f);

/// Second central differences on the diagonal, symmetric mixed central
/// differences off it.
HessianField hessian_grid(const Space& space, const ScalarField& f);

/// Central-difference divergence, the exact negative adjoint of
/// gradient_grid under the uniform grid measure.
ScalarField divergence_grid(const Space& space, const VectorField& v);

}  // namespace entropic
