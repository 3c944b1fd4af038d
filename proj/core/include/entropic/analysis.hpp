#pragma once

#include <vector>

#include "entropic/calculus.hpp"
#include "entropic/ot.hpp"
#include "entropic/schrodinger.hpp"
#include "entropic/space.hpp"

namespace entropic {

/// One epsilon of a sweep: the solved system plus its sampled interpolation.
/// Sweep-level reports require every member to share the time grid.
struct SweepMember {
    SchrodingerSolution solution;
    InterpolationPath path;
};

/// Sup-norm residuals of the forward/backward Hamilton-Jacobi-Bellman
/// equations d phi/dt = Gamma(phi)/2 + (eps/2) Delta phi and
/// -d psi/dt = Gamma(psi)/2 + (eps/2) Delta psi, centered time differences.
struct HjbResiduals {
    std::vector<double> times;  // interior grid points
    std::vector<double> phi;
    std::vector<double> psi;
};
HjbResiduals hjb_residuals(const Space& space, const InterpolationPath& path);

/// Weak continuity-equation residual max_e |D_t int e rho dm -
/// int Gamma(e, theta) rho dm| over the first nonconstant eigenfields,
/// plus the spatially exact evolution residual
/// ||D_t rho - (eps/2)(Delta f g - f Delta g)||_inf.
struct ContinuityResiduals {
    std::vector<double> times;
    std::vector<double> weak;
    std::vector<double> evolution;
};
ContinuityResiduals continuity_residual(const Space& space, const InterpolationPath& path,
                                        int test_basis_size);

/// Entropy H(t) = int rho log rho dm along the path with both closed forms
/// of H' and H'' and a centered finite-difference oracle for H''.
///   d1_a = int Gamma(log rho, theta) rho dm
///   d1_b = (1/2eps) int (Gamma(psi) - Gamma(phi)) rho dm
///   d2_a = int (Gamma2(theta) + eps^2/4 Gamma2(log rho)) rho dm
///   d2_b = 1/2 int (Gamma2(phi) + Gamma2(psi)) rho dm
struct EntropyProfile {
    std::vector<double> times;
    std::vector<double> h;
    std::vector<double> d1_a, d1_b;
    std::vector<double> d2_a, d2_b, d2_fd;
};
EntropyProfile entropy_profile(const Space& space, const InterpolationPath& path);

/// Acceleration a_t = -(eps^2/8)(2 Delta log rho + Gamma(log rho)) on the
/// window [delta, 1-delta], the residual of the perturbed Hamilton-Jacobi
/// equation for theta on the full interior grid, and the four vanishing
/// integrals (eps^2 times time-space integrals of rho |Delta log rho|,
/// rho Gamma(log rho), their product with |grad log rho|, and the cube).
struct AccelerationReport {
    std::vector<double> times;           // full interior grid
    std::vector<double> theta_residual;  // aligned with times
    std::vector<double> window_times;
    std::vector<ScalarField> acceleration;  // aligned with window_times
    double v1 = 0.0, v2 = 0.0, v3 = 0.0, v4 = 0.0;
};
AccelerationReport acceleration_and_vanishing(const Space& space, const InterpolationPath& path,
                                              double delta);

/// Per-epsilon trackers of the quantities that stay bounded along a sweep.
struct BoundsRow {
    double epsilon = 0.0;
    double density_sup = 0.0;  // sup_t ||rho_t||_inf
    double lip_phi = 0.0;      // sup_{t in [delta,1]} || Gamma(phi)^(1/2) ||_inf
    double lip_psi = 0.0;      // sup_{t in [0,1-delta]}
    double lap_floor = 0.0;    // min_{t in [delta,1]} min_x Delta phi
    double kinetic = 0.0;      // int int (Gamma(theta) + eps^2 Gamma(log rho)) rho
    double lap_energy = 0.0;   // int_window int (|Delta theta|^2 + eps^2 |Delta log rho|^2) rho
    double hess_energy = 0.0;  // grid analogue with Hessians; NaN on graphs
};
std::vector<BoundsRow> bounds_report(const Space& space, const std::vector<SweepMember>& sweep,
                                     double delta);

/// Heat-flow gradient estimates for a fixed positive datum: the Hamilton
/// bound t Gamma(log u_t) <= log(max u0 / u_t) pointwise, the Bakry-Emery
/// comparison Gamma(h_t u0) <= h_t Gamma(u0) at K = 0, and per-epsilon
/// slowed-down trackers eps ||Gamma(log h_{eps t} u0)^(1/2)||_inf and the
/// Li-Yau floor eps min_x Delta log h_{eps t} u0 over t >= delta.
struct GradientEstimateRow {
    double epsilon = 0.0;
    double hamilton_sup = 0.0;
    double liyau_floor = 0.0;
};
struct GradientEstimatesReport {
    double hamilton_margin = 0.0;
    double bakry_emery_margin = 0.0;
    std::vector<GradientEstimateRow> sweep;
};
GradientEstimatesReport gradient_estimates_check(const Space& space, const ScalarField& u0,
                                                 const std::vector<double>& times,
                                                 const std::vector<double>& epsilons,
                                                 double delta = 0.05);

/// Small-epsilon limit trackers against the exact transport oracle.
struct LimitRow {
    double epsilon = 0.0;
    double hopflax_defect = 0.0;     // sup |(-phi_1) - Q_{1-delta}(-phi_delta)|
    double cconcavity_defect = 0.0;  // double c-transform defect of -(1-delta) psi_delta
    double duality_defect = 0.0;     // intermediate-cost identity vs LP between mu_delta, mu_1
    double eps_cost_gap = 0.0;       // |eps I_eps - W2^2/2|
};
std::vector<LimitRow> limit_checks(const Space& space, const std::vector<SweepMember>& sweep,
                                   const OtSolution& lp, double delta);

/// Second-order decomposition of I(t) = int h rho_t dm on a grid:
/// centered-difference I'' against the Hessian term
/// T_H = int Hess h(grad theta, grad theta) rho dm and the acceleration term
/// T_A = int Gamma(h, a_t) rho dm.
struct SecondOrderRow {
    double epsilon = 0.0;
    double accel_l1 = 0.0;        // int_window |T_A| dt
    double defect_sup_rel = 0.0;  // sup |I''_fd - T_H - T_A| / (1 + |I''_fd|)
    double hess_gap_l1 = 0.0;     // int_window |I''_fd - T_H| dt
};
std::vector<SecondOrderRow> second_order_check(const Space& space,
                                               const std::vector<SweepMember>& sweep,
                                               const ScalarField& h, double delta);

/// Everything the per-path report file needs, on the interior grid.
struct PathDiagnostics {
    std::vector<double> times;
    std::vector<double> entropy;
    std::vector<double> entropy_d1_a, entropy_d1_b;
    std::vector<double> entropy_d2_a, entropy_d2_b, entropy_d2_fd;
    std::vector<double> hjb_phi, hjb_psi, continuity_weak, theta_residual;
    std::vector<double> window_times;
    std::vector<ScalarField> acceleration;
    double v1 = 0.0, v2 = 0.0, v3 = 0.0, v4 = 0.0;
    double density_sup = 0.0, lip_phi = 0.0, lip_psi = 0.0, lap_floor = 0.0;
};
PathDiagnostics diagnose_path(const Space& space, const InterpolationPath& path, double delta,
                              int test_basis_size);

}  // namespace entropic
