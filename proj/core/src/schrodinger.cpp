#include "entropic/schrodinger.hpp"

#include <cmath>
#include <limits>

#include "entropic/heat.hpp"

namespace entropic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kFloor = std::numeric_limits<double>::min();

// Row-wise log-sum-exp of (logkernel + shift^T), skipping -inf entries.
Eigen::VectorXd lse_apply(const Eigen::MatrixXd& log_kernel, const Eigen::VectorXd& shift) {
    const int n = static_cast<int>(log_kernel.rows());
    Eigen::VectorXd out(n);
    for (int x = 0; x < n; ++x) {
        double hi = kNegInf;
        for (int y = 0; y < n; ++y) {
            const double v = log_kernel(x, y) + shift[y];
            if (v > hi) hi = v;
        }
        if (hi == kNegInf) {
            out[x] = kNegInf;
            continue;
        }
        double acc = 0.0;
        for (int y = 0; y < n; ++y) {
            const double v = log_kernel(x, y) + shift[y];
            if (v != kNegInf) acc += std::exp(v - hi);
        }
        out[x] = hi + std::log(acc);
    }
    return out;
}

Eigen::VectorXd guarded_log(const Eigen::VectorXd& v) {
    Eigen::VectorXd out(v.size());
    for (int i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? std::log(v[i]) : kNegInf;
    return out;
}

}  // namespace

SchrodingerSolution solve_schrodinger_system(const Space& space, const Density& rho0,
                                             const Density& rho1, double epsilon,
                                             const IpfpOptions& options) {
    if (!(epsilon > 0.0)) throw Error("invalid-epsilon", "epsilon must be positive");
    const int n = space.size();
    const auto& m = space.measure();
    const Eigen::VectorXd& r0 = rho0.values;
    const Eigen::VectorXd& r1 = rho1.values;

    const double d = space.diameter();
    bool use_log = options.mode == IpfpMode::log_domain ||
                   (options.mode == IpfpMode::automatic && epsilon < 0.1 * d * d);

    // h_{eps/2} u = A u with A = r_{eps/2} diag(m).
    Eigen::MatrixXd kernel = heat_kernel(space, epsilon / 2.0);
    Eigen::MatrixXd a = kernel * m.asDiagonal();

    SchrodingerSolution sol;
    sol.epsilon = epsilon;
    sol.tol = options.tol;
    sol.log_domain = use_log;

    auto divide_on_support = [](const Eigen::VectorXd& num, const Eigen::VectorXd& den) {
        Eigen::VectorXd out(num.size());
        for (int i = 0; i < num.size(); ++i) out[i] = num[i] > 0.0 ? num[i] / den[i] : 0.0;
        return out;
    };

    ScalarField f = ScalarField::Zero(n), g = ScalarField::Ones(n);
    double residual = std::numeric_limits<double>::infinity();
    int iter = 0;

    if (!use_log) {
        ScalarField hg = a * g;
        for (iter = 1; iter <= options.max_iter; ++iter) {
            f = divide_on_support(r0, hg);
            ScalarField hf = a * f;
            g = divide_on_support(r1, hf);
            hg = a * g;
            residual = std::max((f.cwiseProduct(hg) - r0).cwiseAbs().maxCoeff(),
                                (g.cwiseProduct(hf) - r1).cwiseAbs().maxCoeff());
            sol.residual_history.push_back(residual);
            if (residual < options.tol) break;
        }
    } else {
        Eigen::MatrixXd log_a = kernel.array().log().matrix();
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) log_a(x, y) += std::log(m[y]);
        Eigen::VectorXd log_r0 = guarded_log(r0), log_r1 = guarded_log(r1);
        Eigen::VectorXd u = Eigen::VectorXd::Constant(n, kNegInf);
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        auto residual_of = [&](const Eigen::VectorXd& pot, const Eigen::VectorXd& lse,
                               const Eigen::VectorXd& target) {
            double worst = 0.0;
            for (int i = 0; i < n; ++i) {
                const double s = pot[i] + lse[i];
                const double val = s == kNegInf ? 0.0 : std::exp(s);
                worst = std::max(worst, std::abs(val - target[i]));
            }
            return worst;
        };
        Eigen::VectorXd lse_g = lse_apply(log_a, v);
        for (iter = 1; iter <= options.max_iter; ++iter) {
            for (int i = 0; i < n; ++i) u[i] = r0[i] > 0.0 ? log_r0[i] - lse_g[i] : kNegInf;
            Eigen::VectorXd lse_f = lse_apply(log_a, u);
            for (int i = 0; i < n; ++i) v[i] = r1[i] > 0.0 ? log_r1[i] - lse_f[i] : kNegInf;
            lse_g = lse_apply(log_a, v);
            residual = std::max(residual_of(u, lse_g, r0), residual_of(v, lse_f, r1));
            sol.residual_history.push_back(residual);
            if (residual < options.tol) break;
        }
        for (int i = 0; i < n; ++i) {
            f[i] = u[i] == kNegInf ? 0.0 : std::exp(u[i]);
            g[i] = v[i] == kNegInf ? 0.0 : std::exp(v[i]);
        }
    }

    if (residual >= options.tol)
        throw NoConvergence("iterative proportional fitting hit the iteration budget", residual);

    // Gauge fixing: (f, g) -> (cf, g/c) so that int log(h_{eps/2} f) rho1 dm = 0.
    {
        ScalarField hf = a * f;
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            if (r1[i] > 0.0) s += std::log(hf[i]) * r1[i] * m[i];
        const double c = std::exp(-s);
        f *= c;
        g /= c;
    }
    {
        ScalarField hf = a * f;
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            if (r1[i] > 0.0) s += std::log(hf[i]) * r1[i] * m[i];
        sol.normalization_residual = std::abs(s);
    }

    sol.f = std::move(f);
    sol.g = std::move(g);
    sol.iterations = iter;
    sol.marginal_residual = residual;
    return sol;
}

std::vector<double> uniform_time_grid(int steps) {
    if (steps < 1) throw Error("invalid-grid", "need at least one time step");
    std::vector<double> t(steps + 1);
    for (int k = 0; k <= steps; ++k) t[k] = static_cast<double>(k) / steps;
    return t;
}

InterpolationPath interpolate(const Space& space, const SchrodingerSolution& solution,
                              const std::vector<double>& time_grid, bool log_floor) {
    if (time_grid.empty()) throw Error("invalid-grid", "empty time grid");
    for (std::size_t k = 0; k < time_grid.size(); ++k) {
        if (time_grid[k] < 0.0 || time_grid[k] > 1.0)
            throw Error("invalid-grid", "time grid must lie in [0,1]");
        if (k > 0 && time_grid[k] <= time_grid[k - 1])
            throw Error("invalid-grid", "time grid must be strictly increasing");
    }
    const double eps = solution.epsilon;
    const bool f_has_zeros = solution.f.minCoeff() <= 0.0;
    const bool g_has_zeros = solution.g.minCoeff() <= 0.0;

    InterpolationPath path;
    path.epsilon = eps;
    path.times = time_grid;
    const std::size_t nt = time_grid.size();
    path.f.resize(nt);
    path.g.resize(nt);
    path.rho.resize(nt);
    path.phi.resize(nt);
    path.psi.resize(nt);
    path.theta.resize(nt);

    auto log_field = [&](const ScalarField& v, bool endpoint) {
        ScalarField out(v.size());
        for (int i = 0; i < v.size(); ++i) {
            if (endpoint && v[i] <= 0.0)
                out[i] = kNegInf;  // off-support sentinel
            else
                out[i] = eps * std::log(std::max(v[i], kFloor));
        }
        return out;
    };

    for (std::size_t k = 0; k < nt; ++k) {
        const double t = time_grid[k];
        const bool at_start = t == 0.0;
        const bool at_end = t == 1.0;
        if (at_start && f_has_zeros && !log_floor)
            throw Error("zero-density-at-endpoint", "rho0 vanishes somewhere and t=0 is on the grid");
        if (at_end && g_has_zeros && !log_floor)
            throw Error("zero-density-at-endpoint", "rho1 vanishes somewhere and t=1 is on the grid");

        path.f[k] = heat_apply(space, t * eps / 2.0, solution.f);
        path.g[k] = heat_apply(space, (1.0 - t) * eps / 2.0, solution.g);
        path.rho[k] = path.f[k].cwiseProduct(path.g[k]);
        path.phi[k] = log_field(path.f[k], at_start && f_has_zeros);
        path.psi[k] = log_field(path.g[k], at_end && g_has_zeros);
        path.theta[k] = 0.5 * (path.psi[k] - path.phi[k]);
    }
    return path;
}

TransportPlan entropic_plan(const Space& space, const SchrodingerSolution& solution) {
    const int n = space.size();
    const auto& m = space.measure();
    Eigen::MatrixXd kernel = heat_kernel(space, solution.epsilon / 2.0);
    TransportPlan plan;
    plan.weights.resize(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            plan.weights(x, y) = solution.f[x] * solution.g[y] * kernel(x, y) * m[x] * m[y];
    return plan;
}

double relative_entropy(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    if (p.size() != q.size()) throw Error("invalid-input", "weight vectors differ in length");
    double h = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0 || q[i] < 0.0) throw Error("invalid-input", "weights must be nonnegative");
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
        h += p[i] * std::log(p[i] / q[i]);
    }
    return h;
}

double entropic_cost(const Space& space, const SchrodingerSolution& solution) {
    const int n = space.size();
    const auto& m = space.measure();
    Eigen::MatrixXd kernel = heat_kernel(space, solution.epsilon / 2.0);
    Eigen::VectorXd hg = kernel * m.asDiagonal() * solution.g;
    Eigen::VectorXd hf = kernel * m.asDiagonal() * solution.f;
    Eigen::VectorXd r0 = solution.f.cwiseProduct(hg);
    Eigen::VectorXd r1 = solution.g.cwiseProduct(hf);

    // Potential formula: I = int log f rho0 dm + int log g rho1 dm.
    double cost = 0.0;
    for (int i = 0; i < n; ++i) {
        if (r0[i] > 0.0) cost += std::log(solution.f[i]) * r0[i] * m[i];
        if (r1[i] > 0.0) cost += std::log(solution.g[i]) * r1[i] * m[i];
    }

    // Entrywise H(plan | reference) must reproduce it.
    double entrywise = 0.0;
    for (int x = 0; x < n; ++x) {
        if (solution.f[x] == 0.0) continue;
        for (int y = 0; y < n; ++y) {
            if (solution.g[y] == 0.0) continue;
            const double w = solution.f[x] * solution.g[y] * kernel(x, y) * m[x] * m[y];
            if (w > 0.0) entrywise += w * std::log(solution.f[x] * solution.g[y]);
        }
    }
    if (std::abs(entrywise - cost) > 1e-8 * (1.0 + std::abs(cost)))
        throw Error("internal-check-failed",
                    "potential-formula cost and entrywise relative entropy disagree");
    return cost;
}

}  // namespace entropic
