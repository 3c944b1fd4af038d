// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier configurations than the unit tests; a full run stays in
// the seconds-to-minutes range.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "entropic/analysis.hpp"
#include "entropic/experiment.hpp"
#include "entropic/heat.hpp"
#include "helpers.hpp"

using namespace entropic;

namespace {

int g_failures = 0;

void criterion(int id, const std::string& title, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, title.c_str(),
                detail.empty() ? "" : "  -- ", detail.c_str());
    if (!pass) ++g_failures;
}

constexpr double kEpsilons[] = {0.4, 0.2, 0.1, 0.05, 0.02};

struct SolvedSweep {
    testhelp::ReferenceProblem problem;
    std::vector<SweepMember> members;
    std::vector<double> solve_seconds;
};

SolvedSweep solve_reference_sweep(int n, int time_steps) {
    SolvedSweep out{testhelp::reference_problem(n), {}, {}};
    for (double eps : kEpsilons) {
        const auto tic = std::chrono::steady_clock::now();
        SweepMember m;
        m.solution = solve_schrodinger_system(out.problem.space, out.problem.rho0,
                                              out.problem.rho1, eps);
        m.path = interpolate(out.problem.space, m.solution, uniform_time_grid(time_steps));
        const auto toc = std::chrono::steady_clock::now();
        out.solve_seconds.push_back(std::chrono::duration<double>(toc - tic).count());
        out.members.push_back(std::move(m));
    }
    return out;
}

bool strictly_decreasing(const std::vector<double>& v, std::string& why, const char* name) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (!(v[k] < v[k - 1])) {
            std::ostringstream os;
            os << name << " not strictly decreasing at step " << k << " (" << v[k - 1] << " -> "
               << v[k] << ")";
            why = os.str();
            return false;
        }
    return true;
}

bool two_x_stable(const std::vector<double>& v, std::string& why, const char* name) {
    for (std::size_t k = 1; k < v.size(); ++k) {
        const double a = std::abs(v[k - 1]), b = std::abs(v[k]);
        if (a < 1e-14 && b < 1e-14) continue;
        if (b >= 2.0 * a || a >= 2.0 * b) {
            std::ostringstream os;
            os << name << " moved by 2x between consecutive epsilons (" << v[k - 1] << " -> "
               << v[k] << ")";
            why = os.str();
            return false;
        }
    }
    return true;
}

double window_sup(const std::vector<double>& times, const std::vector<double>& vals, double lo,
                  double hi) {
    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] >= lo - 1e-12 && times[k] <= hi + 1e-12) worst = std::max(worst, vals[k]);
    return worst;
}

}  // namespace

int main() {
    // Shared heavy artifacts.
    SolvedSweep sweep = solve_reference_sweep(64, 200);
    const Space& space = sweep.problem.space;
    OtSolution lp = solve_w2_exact(space, sweep.problem.rho0, sweep.problem.rho1);

    criterion(1, "Schrodinger system converges to 1e-10 on the reference sweep", [&](std::string& why) {
        double total = 0.0;
        for (std::size_t k = 0; k < sweep.members.size(); ++k) {
            const auto& sol = sweep.members[k].solution;
            total += sweep.solve_seconds[k];
            if (!(sol.marginal_residual < 1e-10)) {
                why = "marginal residual " + std::to_string(sol.marginal_residual);
                return false;
            }
            if (!(sol.normalization_residual < 1e-10)) {
                why = "normalization residual " + std::to_string(sol.normalization_residual);
                return false;
            }
        }
        if (total > 60.0) {
            why = "sweep took " + std::to_string(total) + " s";
            return false;
        }
        return true;
    });

    criterion(2, "uniform marginals are the exact fixed point", [&](std::string& why) {
        Density uniform = make_density(space, ScalarField::Ones(space.size()));
        for (double eps : kEpsilons) {
            SchrodingerSolution sol = solve_schrodinger_system(space, uniform, uniform, eps);
            if ((sol.f.array() - 1.0).abs().maxCoeff() > 1e-12 ||
                (sol.g.array() - 1.0).abs().maxCoeff() > 1e-12) {
                why = "potentials depart from 1";
                return false;
            }
            InterpolationPath path = interpolate(space, sol, uniform_time_grid(50));
            for (const auto& rho : path.rho)
                if ((rho.array() - 1.0).abs().maxCoeff() > 1e-12) {
                    why = "interpolated density departs from 1";
                    return false;
                }
        }
        return true;
    });

    criterion(3, "time reversal reproduces the interpolation to 1e-9", [&](std::string& why) {
        for (std::size_t k = 0; k < sweep.members.size(); ++k) {
            const double eps = kEpsilons[k];
            SchrodingerSolution swapped =
                solve_schrodinger_system(space, sweep.problem.rho1, sweep.problem.rho0, eps);
            InterpolationPath back =
                interpolate(space, swapped, sweep.members[k].path.times);
            const InterpolationPath& fwd = sweep.members[k].path;
            const std::size_t nt = fwd.times.size();
            double worst = 0.0;
            for (std::size_t j = 0; j < nt; ++j)
                worst = std::max(worst,
                                 (back.rho[j] - fwd.rho[nt - 1 - j]).cwiseAbs().maxCoeff());
            if (worst > 1e-9) {
                why = "sup deviation " + std::to_string(worst) + " at eps " + std::to_string(eps);
                return false;
            }
        }
        return true;
    });

    criterion(4, "evolution-equation residuals refine at O(dt^2)", [&](std::string& why) {
        testhelp::ReferenceProblem fine = testhelp::reference_problem(256);
        SchrodingerSolution sol =
            solve_schrodinger_system(fine.space, fine.rho0, fine.rho1, 0.4);
        InterpolationPath coarse = interpolate(fine.space, sol, uniform_time_grid(40));
        InterpolationPath halved = interpolate(fine.space, sol, uniform_time_grid(80));

        auto ratio_of = [&](auto&& eval) {
            auto rc = eval(coarse);
            auto rf = eval(halved);
            return window_sup(rc.first, rc.second, 0.25, 0.75) /
                   window_sup(rf.first, rf.second, 0.25, 0.75);
        };
        const double r_phi = ratio_of([&](const InterpolationPath& p) {
            HjbResiduals r = hjb_residuals(fine.space, p);
            return std::make_pair(r.times, r.phi);
        });
        const double r_psi = ratio_of([&](const InterpolationPath& p) {
            HjbResiduals r = hjb_residuals(fine.space, p);
            return std::make_pair(r.times, r.psi);
        });
        const double r_cont = ratio_of([&](const InterpolationPath& p) {
            ContinuityResiduals r = continuity_residual(fine.space, p, 8);
            return std::make_pair(r.times, r.weak);
        });
        const double r_theta = ratio_of([&](const InterpolationPath& p) {
            AccelerationReport r = acceleration_and_vanishing(fine.space, p, 0.05);
            return std::make_pair(r.times, r.theta_residual);
        });
        std::ostringstream os;
        os << "ratios phi=" << r_phi << " psi=" << r_psi << " cont=" << r_cont
           << " theta=" << r_theta;
        why = os.str();
        auto ok = [](double r) { return r >= 3.5 && r <= 4.5; };
        return ok(r_phi) && ok(r_psi) && ok(r_cont) && ok(r_theta);
    });

    criterion(5, "entropy derivative formulas agree and stay convex", [&](std::string& why) {
        testhelp::ReferenceProblem fine = testhelp::soft_problem(256);
        SchrodingerSolution sol =
            solve_schrodinger_system(fine.space, fine.rho0, fine.rho1, 0.2);
        InterpolationPath path = interpolate(fine.space, sol, uniform_time_grid(200));
        EntropyProfile ent = entropy_profile(fine.space, path);
        for (std::size_t k = 0; k < ent.times.size(); ++k) {
            if (std::abs(ent.d1_a[k] - ent.d1_b[k]) > 1e-9) {
                why = "H' forms disagree: " + std::to_string(std::abs(ent.d1_a[k] - ent.d1_b[k]));
                return false;
            }
            if (std::abs(ent.d2_a[k] - ent.d2_b[k]) > 1e-9) {
                why = "H'' forms disagree: " + std::to_string(std::abs(ent.d2_a[k] - ent.d2_b[k]));
                return false;
            }
            // derivative-window convention: the FD oracle is compared on [delta, 1-delta]
            const bool in_window = ent.times[k] >= 0.05 - 1e-12 && ent.times[k] <= 0.95 + 1e-12;
            if (in_window &&
                std::abs(ent.d2_a[k] - ent.d2_fd[k]) > 1e-3 * (1.0 + std::abs(ent.d2_fd[k]))) {
                why = "H'' formula vs FD: " + std::to_string(std::abs(ent.d2_a[k] - ent.d2_fd[k]));
                return false;
            }
        }

        auto convexity_violation = [&](int n) {
            testhelp::ReferenceProblem p = testhelp::soft_problem(n);
            SchrodingerSolution s2 = solve_schrodinger_system(p.space, p.rho0, p.rho1, 0.2);
            EntropyProfile e2 =
                entropy_profile(p.space, interpolate(p.space, s2, uniform_time_grid(100)));
            double v = 0.0;
            for (double x : e2.d2_a) v = std::max(v, -x);
            return v;
        };
        const double v64 = convexity_violation(64);
        const double v128 = convexity_violation(128);
        if (!(v128 <= v64 / 3.5 + 1e-12)) {
            why = "convexity violation did not quarter: " + std::to_string(v64) + " -> " +
                  std::to_string(v128);
            return false;
        }
        return true;
    });

    criterion(6, "bounded quantities stay within 2x along the sweep", [&](std::string& why) {
        std::vector<BoundsRow> rows = bounds_report(space, sweep.members, 0.05);
        std::vector<double> dens, lphi, lpsi, lfloor, kin, lap;
        for (const auto& r : rows) {
            dens.push_back(r.density_sup);
            lphi.push_back(r.lip_phi);
            lpsi.push_back(r.lip_psi);
            lfloor.push_back(std::abs(r.lap_floor));
            kin.push_back(r.kinetic);
            lap.push_back(r.lap_energy);
        }
        return two_x_stable(dens, why, "density sup") && two_x_stable(lphi, why, "lip(phi)") &&
               two_x_stable(lpsi, why, "lip(psi)") && two_x_stable(lfloor, why, "Laplacian floor") &&
               two_x_stable(kin, why, "kinetic energy") && two_x_stable(lap, why, "Laplacian energy");
    });

    criterion(7, "vanishing quantities decrease, V2 by 4x over the sweep", [&](std::string& why) {
        std::vector<double> v1, v2, v3, v4;
        for (const auto& m : sweep.members) {
            AccelerationReport r = acceleration_and_vanishing(space, m.path, 0.05);
            v1.push_back(r.v1);
            v2.push_back(r.v2);
            v3.push_back(r.v3);
            v4.push_back(r.v4);
        }
        if (!strictly_decreasing(v1, why, "V1") || !strictly_decreasing(v2, why, "V2") ||
            !strictly_decreasing(v3, why, "V3") || !strictly_decreasing(v4, why, "V4"))
            return false;
        if (!(v2.back() < 0.25 * v2.front())) {
            why = "V2(0.02) = " + std::to_string(v2.back()) + " vs V2(0.4) = " +
                  std::to_string(v2.front());
            return false;
        }
        return true;
    });

    criterion(8, "entropic cost and potentials reach their transport limits", [&](std::string& why) {
        std::vector<LimitRow> rows = limit_checks(space, sweep.members, lp, 0.05);
        std::vector<double> gap, hl, cc;
        for (const auto& r : rows) {
            gap.push_back(r.eps_cost_gap);
            hl.push_back(r.hopflax_defect);
            cc.push_back(r.cconcavity_defect);
        }
        if (!strictly_decreasing(gap, why, "eps-cost gap") ||
            !strictly_decreasing(hl, why, "Hopf-Lax defect") ||
            !strictly_decreasing(cc, why, "c-concavity defect"))
            return false;
        const double rel = gap.back() / (0.5 * lp.w2_squared);
        if (!(rel < 0.10)) {
            std::ostringstream os;
            os << "relative cost gap at eps=0.02 is " << rel << " (W2^2/2 = "
               << 0.5 * lp.w2_squared << ")";
            why = os.str();
            return false;
        }
        return true;
    });

    criterion(9, "second-order decomposition closes as eps vanishes", [&](std::string& why) {
        ScalarField h = observable_field(space);
        std::vector<SecondOrderRow> rows = second_order_check(space, sweep.members, h, 0.05);
        std::vector<double> accel, gaps;
        for (const auto& r : rows) {
            accel.push_back(r.accel_l1);
            gaps.push_back(r.hess_gap_l1);
        }
        if (!strictly_decreasing(accel, why, "acceleration term")) return false;
        if (!(accel.back() < 0.25 * accel.front())) {
            why = "accel(0.02) = " + std::to_string(accel.back()) + " vs accel(0.4) = " +
                  std::to_string(accel.front());
            return false;
        }
        for (const auto& r : rows)
            if (!(r.defect_sup_rel < 1e-2)) {
                why = "decomposition defect " + std::to_string(r.defect_sup_rel) + " at eps " +
                      std::to_string(r.epsilon);
                return false;
            }
        if (!(gaps.back() <= 0.25 * gaps.front())) {
            why = "Hessian-term gap shrank only from " + std::to_string(gaps.front()) + " to " +
                  std::to_string(gaps.back());
            return false;
        }
        return true;
    });

    criterion(10, "heat-flow gradient estimates hold uniformly", [&](std::string& why) {
        std::vector<double> times = {0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
        std::vector<double> eps_list(std::begin(kEpsilons), std::end(kEpsilons));
        auto datum = [](const Space& s) {
            return testhelp::gaussian_bump(s, 0.5, 0.1, 0.05).values;
        };
        Space s64 = testhelp::circle(64);
        Space s128 = testhelp::circle(128);
        GradientEstimatesReport r64 =
            gradient_estimates_check(s64, datum(s64), times, eps_list, 0.5);
        GradientEstimatesReport r128 =
            gradient_estimates_check(s128, datum(s128), times, eps_list, 0.5);

        const double tau64 = std::max(0.0, r64.hamilton_margin);
        const double tau128 = std::max(0.0, r128.hamilton_margin);
        if (!(tau128 <= tau64 / 3.5 + 1e-12)) {
            why = "Hamilton allowance did not quarter: " + std::to_string(tau64) + " -> " +
                  std::to_string(tau128);
            return false;
        }

        // One constant serves the whole sweep. For the slowed-down gradient,
        // the Hamilton bound at K=0 gives eps ||grad log u_{eps t}||_inf <=
        // sqrt(eps/t log(max u0 / u)) <= sqrt(log(max u0/min u0)/delta) for
        // eps <= 1; for the Laplacian floor, the sharp K=0 Li-Yau inequality
        // gives eps min Delta log u_{eps t} >= -N/(2t) >= -N/(2 delta).
        ScalarField u64 = datum(s64);
        const double c_ham = std::sqrt(std::log(u64.maxCoeff() / u64.minCoeff()) / 0.5);
        const double c_liyau = s64.curvature().n / (2.0 * 0.5);
        for (const auto& row : r64.sweep) {
            if (row.hamilton_sup > c_ham * 1.05) {
                why = "gradient tracker " + std::to_string(row.hamilton_sup) +
                      " exceeded the Hamilton constant " + std::to_string(c_ham);
                return false;
            }
            if (row.liyau_floor < -c_liyau * 1.05) {
                why = "Li-Yau floor " + std::to_string(row.liyau_floor) +
                      " fell below the sweep constant " + std::to_string(-c_liyau);
                return false;
            }
        }
        return true;
    });

    criterion(11, "semigroup, duality and two-node oracles", [&](std::string& why) {
        Space circle = testhelp::circle(64);
        std::mt19937_64 rng(123);
        std::uniform_real_distribution<double> pick(1e-3, 2.0);
        for (int trial = 0; trial < 4; ++trial) {
            ScalarField f = testhelp::random_field(64, 500 + trial);
            const double a = pick(rng), b = pick(rng);
            const double ck =
                (heat_apply(circle, a, heat_apply(circle, b, f)) - heat_apply(circle, a + b, f))
                    .cwiseAbs()
                    .maxCoeff();
            if (!(ck < 1e-11)) {
                why = "Chapman-Kolmogorov defect " + std::to_string(ck);
                return false;
            }
        }
        if (!(lp.duality_gap < 1e-8 * (1.0 + 0.5 * lp.w2_squared))) {
            why = "LP duality gap " + std::to_string(lp.duality_gap);
            return false;
        }

        Space two = testhelp::two_node_space();
        ScalarField f2(2);
        f2 << 2.0, 0.0;
        ScalarField ht = heat_apply(two, 0.7, f2);
        if (std::abs(ht[0] - (1.0 + std::exp(-0.7))) > 1e-12 ||
            std::abs(ht[1] - (1.0 - std::exp(-0.7))) > 1e-12) {
            why = "two-node heat flow off";
            return false;
        }
        ScalarField pot(2);
        pot << 0.0, 0.3;
        ScalarField potc = c_transform(two, pot);
        if (potc[0] != 0.0 || potc[1] != -0.3) {
            why = "two-node c-transform off";
            return false;
        }
        ScalarField hl(2);
        hl << 0.0, 1.0;
        ScalarField q = hopf_lax(two, hl, 1.0);
        if (q[0] != 0.0 || q[1] != 0.5) {
            why = "two-node Hopf-Lax off";
            return false;
        }
        ScalarField r0(2), r1(2);
        r0 << 2.0, 0.0;
        r1 << 0.0, 2.0;
        OtSolution two_lp = solve_w2_exact(two, Density{r0}, Density{r1});
        if (std::abs(two_lp.w2_squared - 1.0) > 1e-12) {
            why = "two-node W2^2 off";
            return false;
        }
        Density b0 = make_density(two, (ScalarField(2) << 1.6, 0.4).finished());
        Density b1 = make_density(two, (ScalarField(2) << 0.4, 1.6).finished());
        IpfpOptions tight;
        tight.tol = 1e-13;
        SchrodingerSolution sol = solve_schrodinger_system(two, b0, b1, 0.5, tight);
        if (!(sol.marginal_residual < 1e-12)) {
            why = "two-node IPFP residual " + std::to_string(sol.marginal_residual);
            return false;
        }
        return true;
    });

    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILED", g_failures);
    return g_failures == 0 ? 0 : 1;
}
