#pragma once

#include <vector>

#include "entropic/space.hpp"

namespace entropic {

/// Solution of the Schrodinger system rho0 = f h_{eps/2} g, rho1 = g h_{eps/2} f,
/// normalized so that the integral of log(h_{eps/2} f) against rho1 vanishes.
/// f and g are exactly zero off the supports of rho0 and rho1.
struct SchrodingerSolution {
    double epsilon = 0.0;
    ScalarField f;
    ScalarField g;
    int iterations = 0;
    double tol = 0.0;                     // requested sup-residual
    double marginal_residual = 0.0;       // sup norm over both constraints
    double normalization_residual = 0.0;  // |int log(h_{eps/2} f) rho1 dm|
    bool log_domain = false;
    std::vector<double> residual_history;
};

enum class IpfpMode { automatic, plain, log_domain };

struct IpfpOptions {
    double tol = 1e-10;
    int max_iter = 100000;
    IpfpMode mode = IpfpMode::automatic;
};

/// Iterative proportional fitting against the heat-kernel reference at time
/// eps/2; switches to log-domain kernel applications (log-sum-exp) below
/// eps = 0.1 * diameter^2 where kernel entries start to underflow.
SchrodingerSolution solve_schrodinger_system(const Space& space, const Density& rho0,
                                             const Density& rho1, double epsilon,
                                             const IpfpOptions& options = {});

/// Entropic interpolation sampled on a time grid: f_t = h_{t eps/2} f,
/// g_t = h_{(1-t) eps/2} g, rho_t = f_t g_t, phi = eps log f_t,
/// psi = eps log g_t, theta = (psi - phi)/2. Endpoint potentials off the
/// marginal supports are -inf sentinels unless log_floor is set, in which
/// case values are floored at the smallest positive normal before the log.
struct InterpolationPath {
    double epsilon = 0.0;
    std::vector<double> times;
    std::vector<ScalarField> f, g, rho, phi, psi, theta;

    int steps() const { return static_cast<int>(times.size()) - 1; }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

InterpolationPath interpolate(const Space& space, const SchrodingerSolution& solution,
                              const std::vector<double>& time_grid, bool log_floor = false);

std::vector<double> uniform_time_grid(int steps);

/// Coupling gamma_xy = f(x) g(y) r_{eps/2}[x](y) m_x m_y; sums to one, with
/// row and column marginals rho0 m and rho1 m.
struct TransportPlan {
    Eigen::MatrixXd weights;

    Eigen::VectorXd row_marginals() const { return weights.rowwise().sum(); }
    Eigen::VectorXd col_marginals() const { return weights.colwise().sum(); }
};

TransportPlan entropic_plan(const Space& space, const SchrodingerSolution& solution);

/// Boltzmann-Shannon entropy sum p log(p/q) with the 0 log 0 = 0 convention;
/// returns +infinity when p charges a q-null atom.
double relative_entropy(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Entropic cost I_eps = (1/eps)(int phi_0 rho0 dm + int psi_1 rho1 dm),
/// cross-checked internally against the entrywise relative entropy of the
/// plan with respect to the heat-kernel reference.
double entropic_cost(const Space& space, const SchrodingerSolution& solution);

}  // namespace entropic
