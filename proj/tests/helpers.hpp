#pragma once

#include <cmath>
#include <random>

#include "entropic/space.hpp"

namespace testhelp {

// m = (1/2, 1/2), w = 1/4, unit length: -Delta has eigenvalues {0, 1} and
// every quantity below is available in closed form.
inline entropic::Space two_node_space() {
    return entropic::build_weighted_graph(2, {entropic::Edge{0, 1, 0.25, 1.0}},
                                          Eigen::Vector2d(0.5, 0.5));
}

inline entropic::Space circle(int n, double side = 1.0) {
    return entropic::build_torus_grid(1, n, {side});
}

inline entropic::ScalarField random_field(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    entropic::ScalarField f(n);
    for (int i = 0; i < n; ++i) f[i] = gauss(rng);
    return f;
}

// Strictly positive two-bump density on the circle, centers as fractions of
// the side length.
inline entropic::Density two_bumps(const entropic::Space& space, double c0, double c1,
                                   double width, double floor) {
    const auto& grid = space.grid();
    const int n = space.size();
    entropic::ScalarField v(n);
    auto wrap = [&](double x, double c) {
        double d = std::abs(x - c);
        return std::min(d, grid.side[0] - d);
    };
    for (int i = 0; i < n; ++i) {
        const double x = i * grid.spacing[0];
        const double d0 = wrap(x, c0 * grid.side[0]);
        const double d1 = wrap(x, c1 * grid.side[0]);
        v[i] = std::exp(-d0 * d0 / (2.0 * width * width)) +
               std::exp(-d1 * d1 / (2.0 * width * width)) + floor;
    }
    return entropic::make_density(space, v);
}

inline entropic::Density gaussian_bump(const entropic::Space& space, double center, double width,
                                       double floor) {
    const auto& grid = space.grid();
    const int n = space.size();
    entropic::ScalarField v(n);
    for (int i = 0; i < n; ++i) {
        const double x = i * grid.spacing[0];
        double d = std::abs(x - center * grid.side[0]);
        d = std::min(d, grid.side[0] - d);
        v[i] = std::exp(-d * d / (2.0 * width * width)) + floor;
    }
    return entropic::make_density(space, v);
}

// Two tanh-edged plateau bumps side by side; base and widths are fractions
// of the side length.
inline entropic::Density plateau_pair(const entropic::Space& space, double base, double width,
                                      double transition, double floor) {
    const auto& grid = space.grid();
    const int n = space.size();
    const double L = grid.side[0];
    entropic::ScalarField v(n);
    auto wrap = [&](double x, double c) {
        double d = std::abs(x - c);
        return std::min(d, L - d);
    };
    auto sig = [](double z) { return 0.5 * (1.0 + std::tanh(z)); };
    const double W = width * L, T = transition * L, c0 = base * L, c1 = (base + 0.25) * L;
    for (int i = 0; i < n; ++i) {
        const double x = i * grid.spacing[0];
        v[i] = floor + sig((W - wrap(x, c0)) / T) + sig((W - wrap(x, c1)) / T);
    }
    return entropic::make_density(space, v);
}

// The reference transport problem most convergence studies run on: a circle
// of circumference 2 carrying a two-plateau density and its antipodal flip,
// so the optimal plan moves the excess rigidly by a quarter turn.
struct ReferenceProblem {
    entropic::Space space;
    entropic::Density rho0, rho1;
};

inline ReferenceProblem reference_problem(int n) {
    entropic::Space s = entropic::build_torus_grid(1, n, {2.0});
    entropic::Density rho0 = plateau_pair(s, 0.0, 0.085, 0.035, 1.0);
    entropic::Density rho1 = plateau_pair(s, 0.5, 0.085, 0.035, 1.0);
    return ReferenceProblem{std::move(s), std::move(rho0), std::move(rho1)};
}

// Softer variant with gentler entropy dynamics, used by the entropy-formula
// studies where the finite-difference oracle needs slow fourth derivatives.
inline ReferenceProblem soft_problem(int n) {
    entropic::Space s = entropic::build_torus_grid(1, n, {2.0});
    entropic::Density rho0 = plateau_pair(s, 0.0, 0.06, 0.06, 2.0);
    entropic::Density rho1 = plateau_pair(s, 0.5, 0.06, 0.06, 2.0);
    return ReferenceProblem{std::move(s), std::move(rho0), std::move(rho1)};
}

}  // namespace testhelp
