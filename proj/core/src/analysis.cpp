#include "entropic/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entropic/heat.hpp"

namespace entropic {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double uniform_dt(const InterpolationPath& path) {
    const auto& t = path.times;
    if (t.size() < 5) throw Error("invalid-grid", "need at least three interior times");
    const double dt = t[1] - t[0];
    for (std::size_t k = 1; k < t.size(); ++k)
        if (std::abs(t[k] - t[k - 1] - dt) > 1e-12)
            throw Error("invalid-grid", "time grid is not uniform");
    return dt;
}

ScalarField log_density(const ScalarField& rho) {
    ScalarField out(rho.size());
    for (int i = 0; i < rho.size(); ++i) {
        if (!(rho[i] > 0.0)) throw Error("positivity-violated", "density not positive at an interior node");
        out[i] = std::log(rho[i]);
    }
    return out;
}

ScalarField acceleration_field(const Space& space, const ScalarField& log_rho, double eps) {
    return -(eps * eps / 8.0) *
           (2.0 * space.apply_laplacian(log_rho) + gamma(space, log_rho, log_rho));
}

// Trapezoid rule over a contiguous slice of a uniform grid.
double trapezoid(const std::vector<double>& values, double dt) {
    if (values.size() < 2) return 0.0;
    double acc = 0.5 * (values.front() + values.back());
    for (std::size_t k = 1; k + 1 < values.size(); ++k) acc += values[k];
    return acc * dt;
}

std::vector<int> window_indices(const std::vector<double>& times, double delta) {
    std::vector<int> idx;
    for (std::size_t k = 1; k + 1 < times.size(); ++k)
        if (times[k] >= delta - 1e-12 && times[k] <= 1.0 - delta + 1e-12)
            idx.push_back(static_cast<int>(k));
    if (idx.empty()) throw Error("invalid-grid", "window [delta, 1-delta] contains no grid point");
    return idx;
}

int nearest_index(const std::vector<double>& times, double t) {
    int best = 0;
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = static_cast<int>(k);
    return best;
}

void require_shared_grid(const std::vector<SweepMember>& sweep) {
    if (sweep.empty()) throw Error("invalid-sweep", "empty sweep");
    for (const auto& member : sweep)
        if (member.path.times != sweep.front().path.times)
            throw Error("invalid-sweep", "sweep members use different time grids");
}

}  // namespace

HjbResiduals hjb_residuals(const Space& space, const InterpolationPath& path) {
    const double dt = uniform_dt(path);
    const double eps = path.epsilon;
    HjbResiduals out;
    for (std::size_t k = 1; k + 1 < path.times.size(); ++k) {
        out.times.push_back(path.times[k]);
        ScalarField dphi = (path.phi[k + 1] - path.phi[k - 1]) / (2.0 * dt);
        ScalarField rphi = dphi - 0.5 * gamma(space, path.phi[k], path.phi[k]) -
                           (eps / 2.0) * space.apply_laplacian(path.phi[k]);
        out.phi.push_back(rphi.cwiseAbs().maxCoeff());

        ScalarField dpsi = (path.psi[k + 1] - path.psi[k - 1]) / (2.0 * dt);
        ScalarField rpsi = -dpsi - 0.5 * gamma(space, path.psi[k], path.psi[k]) -
                           (eps / 2.0) * space.apply_laplacian(path.psi[k]);
        out.psi.push_back(rpsi.cwiseAbs().maxCoeff());
    }
    return out;
}

ContinuityResiduals continuity_residual(const Space& space, const InterpolationPath& path,
                                        int test_basis_size) {
    const double dt = uniform_dt(path);
    const double eps = path.epsilon;
    const auto& dec = space.spectrum();
    const int basis = std::min(test_basis_size, space.size() - 1);
    if (basis < 1) throw Error("invalid-input", "test basis must contain at least one eigenfield");

    // Moments int e rho dm for every time, eigenfields e_1..e_basis.
    const std::size_t nt = path.times.size();
    Eigen::MatrixXd moments(nt, basis);
    for (std::size_t k = 0; k < nt; ++k)
        for (int b = 0; b < basis; ++b)
            moments(k, b) = space.inner(dec.eigenfields.col(b + 1), path.rho[k]);

    ContinuityResiduals out;
    for (std::size_t k = 1; k + 1 < nt; ++k) {
        out.times.push_back(path.times[k]);
        double worst = 0.0;
        for (int b = 0; b < basis; ++b) {
            const double lhs = (moments(k + 1, b) - moments(k - 1, b)) / (2.0 * dt);
            const double rhs =
                space.integrate(gamma(space, dec.eigenfields.col(b + 1), path.theta[k])
                                    .cwiseProduct(path.rho[k]));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        out.weak.push_back(worst);

        ScalarField drho = (path.rho[k + 1] - path.rho[k - 1]) / (2.0 * dt);
        ScalarField rhs = (eps / 2.0) * (space.apply_laplacian(path.f[k]).cwiseProduct(path.g[k]) -
                                         path.f[k].cwiseProduct(space.apply_laplacian(path.g[k])));
        out.evolution.push_back((drho - rhs).cwiseAbs().maxCoeff());
    }
    return out;
}

EntropyProfile entropy_profile(const Space& space, const InterpolationPath& path) {
    const double dt = uniform_dt(path);
    const double eps = path.epsilon;
    const std::size_t nt = path.times.size();

    // H at every grid point (0 log 0 = 0 keeps endpoints with zeros finite).
    std::vector<double> h_all(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        double acc = 0.0;
        for (int i = 0; i < space.size(); ++i) {
            const double r = path.rho[k][i];
            if (r > 0.0) acc += r * std::log(r) * space.measure()[i];
        }
        h_all[k] = acc;
    }

    EntropyProfile out;
    for (std::size_t k = 1; k + 1 < nt; ++k) {
        out.times.push_back(path.times[k]);
        out.h.push_back(h_all[k]);

        ScalarField lr = log_density(path.rho[k]);
        const ScalarField& rho = path.rho[k];

        out.d1_a.push_back(space.integrate(gamma(space, lr, path.theta[k]).cwiseProduct(rho)));
        out.d1_b.push_back(
            (0.5 / eps) *
            space.integrate((gamma(space, path.psi[k], path.psi[k]) -
                             gamma(space, path.phi[k], path.phi[k]))
                                .cwiseProduct(rho)));

        out.d2_a.push_back(space.integrate(
            (gamma2(space, path.theta[k]) + (eps * eps / 4.0) * gamma2(space, lr))
                .cwiseProduct(rho)));
        out.d2_b.push_back(0.5 *
                           space.integrate((gamma2(space, path.phi[k]) +
                                            gamma2(space, path.psi[k]))
                                               .cwiseProduct(rho)));
        out.d2_fd.push_back((h_all[k + 1] - 2.0 * h_all[k] + h_all[k - 1]) / (dt * dt));
    }
    return out;
}

AccelerationReport acceleration_and_vanishing(const Space& space, const InterpolationPath& path,
                                              double delta) {
    const double dt = uniform_dt(path);
    const double eps = path.epsilon;
    AccelerationReport out;

    std::vector<double> b1, b2, b3, b4;  // integrands on the window

    for (std::size_t k = 1; k + 1 < path.times.size(); ++k) {
        ScalarField lr = log_density(path.rho[k]);
        ScalarField a = acceleration_field(space, lr, eps);

        out.times.push_back(path.times[k]);
        ScalarField dtheta = (path.theta[k + 1] - path.theta[k - 1]) / (2.0 * dt);
        ScalarField res = dtheta + 0.5 * gamma(space, path.theta[k], path.theta[k]) - a;
        out.theta_residual.push_back(res.cwiseAbs().maxCoeff());

        if (path.times[k] >= delta - 1e-12 && path.times[k] <= 1.0 - delta + 1e-12) {
            out.window_times.push_back(path.times[k]);
            out.acceleration.push_back(a);

            ScalarField lap = space.apply_laplacian(lr);
            ScalarField grad2 = gamma(space, lr, lr);
            ScalarField grad = grad2.cwiseSqrt();
            const auto& rho = path.rho[k];
            b1.push_back(space.integrate(rho.cwiseProduct(lap.cwiseAbs())));
            b2.push_back(space.integrate(rho.cwiseProduct(grad2)));
            b3.push_back(space.integrate(rho.cwiseProduct(lap.cwiseAbs().cwiseProduct(grad))));
            b4.push_back(space.integrate(rho.cwiseProduct(grad2.cwiseProduct(grad))));
        }
    }
    if (b1.empty()) throw Error("invalid-grid", "window [delta, 1-delta] contains no grid point");
    const double e2 = eps * eps;
    out.v1 = e2 * trapezoid(b1, dt);
    out.v2 = e2 * trapezoid(b2, dt);
    out.v3 = e2 * trapezoid(b3, dt);
    out.v4 = e2 * trapezoid(b4, dt);
    return out;
}

std::vector<BoundsRow> bounds_report(const Space& space, const std::vector<SweepMember>& sweep,
                                     double delta) {
    require_shared_grid(sweep);
    const bool on_grid = space.backend() == Backend::torus_grid;

    std::vector<BoundsRow> rows;
    for (const auto& member : sweep) {
        const auto& path = member.path;
        const double dt = uniform_dt(path);
        const double eps = path.epsilon;
        BoundsRow row;
        row.epsilon = eps;
        row.lip_phi = 0.0;
        row.lip_psi = 0.0;
        row.lap_floor = std::numeric_limits<double>::infinity();

        std::vector<double> kinetic, lap_energy, hess_energy;
        for (std::size_t k = 0; k < path.times.size(); ++k) {
            const double t = path.times[k];
            row.density_sup = std::max(row.density_sup, path.rho[k].maxCoeff());
            if (t >= delta - 1e-12) {
                row.lip_phi = std::max(
                    row.lip_phi,
                    std::sqrt(gamma(space, path.phi[k], path.phi[k]).maxCoeff()));
                row.lap_floor =
                    std::min(row.lap_floor, space.apply_laplacian(path.phi[k]).minCoeff());
            }
            if (t <= 1.0 - delta + 1e-12)
                row.lip_psi = std::max(
                    row.lip_psi,
                    std::sqrt(gamma(space, path.psi[k], path.psi[k]).maxCoeff()));

            const bool interior = k > 0 && k + 1 < path.times.size();
            if (interior) {
                ScalarField lr = log_density(path.rho[k]);
                const auto& rho = path.rho[k];
                kinetic.push_back(space.integrate(
                    (gamma(space, path.theta[k], path.theta[k]) +
                     eps * eps * gamma(space, lr, lr))
                        .cwiseProduct(rho)));
                if (t >= delta - 1e-12 && t <= 1.0 - delta + 1e-12) {
                    ScalarField lap_theta = space.apply_laplacian(path.theta[k]);
                    ScalarField lap_lr = space.apply_laplacian(lr);
                    lap_energy.push_back(space.integrate(
                        (lap_theta.cwiseAbs2() + eps * eps * lap_lr.cwiseAbs2())
                            .cwiseProduct(rho)));
                    if (on_grid) {
                        ScalarField hess_theta =
                            hessian_grid(space, path.theta[k]).hs_norm_squared();
                        ScalarField hess_lr = hessian_grid(space, lr).hs_norm_squared();
                        hess_energy.push_back(space.integrate(
                            (hess_theta + eps * eps * hess_lr).cwiseProduct(rho)));
                    }
                }
            }
        }
        row.kinetic = trapezoid(kinetic, dt);
        row.lap_energy = trapezoid(lap_energy, dt);
        row.hess_energy = on_grid ? trapezoid(hess_energy, dt) : kNan;
        rows.push_back(row);
    }
    return rows;
}

GradientEstimatesReport gradient_estimates_check(const Space& space, const ScalarField& u0,
                                                 const std::vector<double>& times,
                                                 const std::vector<double>& epsilons,
                                                 double delta) {
    if (space.backend() != Backend::torus_grid)
        throw Error("backend-unsupported", "gradient estimates assume the flat-torus backend");
    if (u0.size() != space.size() || u0.minCoeff() <= 0.0)
        throw Error("invalid-input", "datum must be strictly positive");

    GradientEstimatesReport report;
    const double sup_u0 = u0.maxCoeff();
    ScalarField gamma_u0 = gamma(space, u0, u0);

    report.hamilton_margin = -std::numeric_limits<double>::infinity();
    report.bakry_emery_margin = -std::numeric_limits<double>::infinity();
    for (double t : times) {
        if (!(t > 0.0)) throw Error("invalid-time", "times must be positive");
        ScalarField ut = heat_apply(space, t, u0);
        ScalarField log_ut = ut.array().log();
        ScalarField lhs = t * gamma(space, log_ut, log_ut);
        for (int i = 0; i < space.size(); ++i)
            report.hamilton_margin =
                std::max(report.hamilton_margin, lhs[i] - std::log(sup_u0 / ut[i]));
        ScalarField be = gamma(space, ut, ut) - heat_apply(space, t, gamma_u0);
        report.bakry_emery_margin = std::max(report.bakry_emery_margin, be.maxCoeff());
    }

    for (double eps : epsilons) {
        GradientEstimateRow row;
        row.epsilon = eps;
        row.hamilton_sup = 0.0;
        row.liyau_floor = std::numeric_limits<double>::infinity();
        for (double t : times) {
            if (t < delta - 1e-12) continue;
            ScalarField w = heat_apply(space, eps * t, u0);
            ScalarField log_w = w.array().log();
            row.hamilton_sup = std::max(
                row.hamilton_sup, eps * std::sqrt(gamma(space, log_w, log_w).maxCoeff()));
            row.liyau_floor =
                std::min(row.liyau_floor, eps * space.apply_laplacian(log_w).minCoeff());
        }
        report.sweep.push_back(row);
    }
    return report;
}

std::vector<LimitRow> limit_checks(const Space& space, const std::vector<SweepMember>& sweep,
                                   const OtSolution& lp, double delta) {
    require_shared_grid(sweep);
    const auto& times = sweep.front().path.times;
    const int k0 = nearest_index(times, delta);
    const int k1 = nearest_index(times, 1.0);
    const double t0 = times[k0], t1 = times[k1];
    if (!(t1 > t0)) throw Error("invalid-grid", "window endpoints coincide");

    // The oracle has to describe the same marginals as the sweep.
    {
        Eigen::VectorXd plan_rho0 = lp.plan.row_marginals().cwiseQuotient(space.measure());
        const ScalarField& path_rho0 = sweep.front().path.rho.front();
        if ((plan_rho0 - path_rho0).cwiseAbs().maxCoeff() > 1e-6)
            throw Error("invalid-pairing", "transport oracle solves different marginals");
    }

    std::vector<LimitRow> rows;
    for (const auto& member : sweep) {
        const auto& path = member.path;
        LimitRow row;
        row.epsilon = path.epsilon;

        ScalarField q = hopf_lax(space, -path.phi[k0], t1 - t0);
        row.hopflax_defect = (q - (-path.phi[k1])).cwiseAbs().maxCoeff();

        row.cconcavity_defect = c_concavity_defect(space, -(1.0 - t0) * path.psi[k0]);

        Density mu_t0{path.rho[k0]};
        Density mu_t1{path.rho[k1]};
        OtSolution intermediate = solve_w2_exact(space, mu_t0, mu_t1);
        const double lhs = (t1 - t0) * (space.inner(path.phi[k0], path.rho[k0]) -
                                        space.inner(path.phi[k1], path.rho[k1]));
        row.duality_defect = std::abs(lhs - 0.5 * intermediate.w2_squared);

        row.eps_cost_gap = std::abs(path.epsilon * entropic_cost(space, member.solution) -
                                    0.5 * lp.w2_squared);
        rows.push_back(row);
    }
    return rows;
}

std::vector<SecondOrderRow> second_order_check(const Space& space,
                                               const std::vector<SweepMember>& sweep,
                                               const ScalarField& h, double delta) {
    if (space.backend() != Backend::torus_grid)
        throw Error("backend-unsupported", "second-order check needs grid gradients");
    require_shared_grid(sweep);
    HessianField hess_h = hessian_grid(space, h);

    std::vector<SecondOrderRow> rows;
    for (const auto& member : sweep) {
        const auto& path = member.path;
        const double dt = uniform_dt(path);
        const double eps = path.epsilon;
        const auto window = window_indices(path.times, delta);

        std::vector<double> moments(path.times.size());
        for (std::size_t k = 0; k < path.times.size(); ++k)
            moments[k] = space.inner(h, path.rho[k]);

        SecondOrderRow row;
        row.epsilon = eps;
        std::vector<double> abs_ta, abs_gap;
        for (int k : window) {
            const double i2fd =
                (moments[k + 1] - 2.0 * moments[k] + moments[k - 1]) / (dt * dt);
            ScalarField lr = log_density(path.rho[k]);
            ScalarField a = acceleration_field(space, lr, eps);
            VectorField grad_theta = gradient_grid(space, path.theta[k]);
            const double th =
                space.integrate(hess_h.quadratic_form(grad_theta).cwiseProduct(path.rho[k]));
            const double ta = space.integrate(gamma(space, h, a).cwiseProduct(path.rho[k]));

            abs_ta.push_back(std::abs(ta));
            abs_gap.push_back(std::abs(i2fd - th));
            row.defect_sup_rel = std::max(
                row.defect_sup_rel, std::abs(i2fd - th - ta) / (1.0 + std::abs(i2fd)));
        }
        row.accel_l1 = trapezoid(abs_ta, dt);
        row.hess_gap_l1 = trapezoid(abs_gap, dt);
        rows.push_back(row);
    }
    return rows;
}

PathDiagnostics diagnose_path(const Space& space, const InterpolationPath& path, double delta,
                              int test_basis_size) {
    PathDiagnostics diag;
    HjbResiduals hjb = hjb_residuals(space, path);
    ContinuityResiduals cont = continuity_residual(space, path, test_basis_size);
    EntropyProfile entropy = entropy_profile(space, path);
    AccelerationReport accel = acceleration_and_vanishing(space, path, delta);

    diag.times = hjb.times;
    diag.hjb_phi = hjb.phi;
    diag.hjb_psi = hjb.psi;
    diag.continuity_weak = cont.weak;
    diag.theta_residual = accel.theta_residual;
    diag.entropy = entropy.h;
    diag.entropy_d1_a = entropy.d1_a;
    diag.entropy_d1_b = entropy.d1_b;
    diag.entropy_d2_a = entropy.d2_a;
    diag.entropy_d2_b = entropy.d2_b;
    diag.entropy_d2_fd = entropy.d2_fd;
    diag.window_times = accel.window_times;
    diag.acceleration = accel.acceleration;
    diag.v1 = accel.v1;
    diag.v2 = accel.v2;
    diag.v3 = accel.v3;
    diag.v4 = accel.v4;

    std::vector<SweepMember> single;
    single.push_back(SweepMember{SchrodingerSolution{}, path});
    BoundsRow row = bounds_report(space, single, delta).front();
    diag.density_sup = row.density_sup;
    diag.lip_phi = row.lip_phi;
    diag.lip_psi = row.lip_psi;
    diag.lap_floor = row.lap_floor;
    return diag;
}

}  // namespace entropic
