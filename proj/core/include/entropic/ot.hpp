#pragma once

#include "entropic/schrodinger.hpp"
#include "entropic/space.hpp"

namespace entropic {

/// Exact quadratic optimal transport with the d^2/2 cost convention, so
/// dual values compare directly with W2^2/2 and with Schrodinger potentials.
struct OtSolution {
    double w2_squared = 0.0;      // 2 * primal cost
    TransportPlan plan;
    ScalarField dual_phi;         // c-concave Kantorovich potential
    ScalarField dual_phi_c;       // its c-transform, recomputed exactly
    double duality_gap = 0.0;     // |primal - dual|
};

inline constexpr int kDefaultLpLimit = 512;

/// Dense transportation problem solved by network simplex with a final
/// complementary-slackness and duality audit.
OtSolution solve_w2_exact(const Space& space, const Density& rho0, const Density& rho1,
                          int node_limit = kDefaultLpLimit);

/// phi^c(x) = min_y d^2(x,y)/2 - phi(y). -inf entries of phi drop out of the
/// minimization; ties resolve to the smallest node index.
ScalarField c_transform(const Space& space, const ScalarField& phi);

/// Hopf-Lax semigroup Q_t f(x) = min_y d^2(x,y)/(2t) + f(y).
ScalarField hopf_lax(const Space& space, const ScalarField& f, double t);

/// sup |(phi^c)^c - phi| over nodes where phi is finite; zero exactly on
/// c-concave functions.
double c_concavity_defect(const Space& space, const ScalarField& phi);

/// Kantorovich-potential acceptance test: phi passes when it agrees with its
/// double c-transform on supp(rho0) within tol and the dual value
/// int phi rho0 dm + int phi^c rho1 dm sits within tol of w2_squared / 2.
struct PotentialAudit {
    double cc_defect = 0.0;
    double dual_gap = 0.0;
    bool accepted = false;
};
PotentialAudit audit_kantorovich_potential(const Space& space, const ScalarField& phi,
                                           const Density& rho0, const Density& rho1,
                                           double w2_squared, double tol);

}  // namespace entropic
