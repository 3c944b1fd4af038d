#include "entropic/heat.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace entropic {

const SpectralDecomposition& spectral_decompose(const Space& space) { return space.spectrum(); }

ScalarField heat_apply(const Space& space, double t, const ScalarField& f) {
    if (t < 0.0) throw Error("invalid-time", "heat flow requires t >= 0");
    if (f.size() != space.size()) throw Error("invalid-input", "field length mismatch");
    if (t == 0.0) return f;
    const auto& dec = space.spectrum();
    Eigen::VectorXd coeff = dec.eigenfields.transpose() * (space.measure().asDiagonal() * f);
    coeff.array() *= (-dec.eigenvalues.array() * t).exp();
    return dec.eigenfields * coeff;
}

Eigen::MatrixXd heat_kernel(const Space& space, double t) {
    if (!(t > 0.0)) throw Error("invalid-time", "heat kernel requires t > 0");
    const auto& dec = space.spectrum();
    Eigen::VectorXd decay = (-dec.eigenvalues.array() * t).exp();
    Eigen::MatrixXd r = dec.eigenfields * decay.asDiagonal() * dec.eigenfields.transpose();
    const double floor = std::numeric_limits<double>::min();
    r = r.cwiseMax(floor);
    return r;
}

std::vector<KernelGaussianSample> heat_kernel_gaussian_samples(const Space& space, double t,
                                                               int count, std::uint64_t seed) {
    Eigen::MatrixXd r = heat_kernel(space, t);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, space.size() - 1);
    std::vector<KernelGaussianSample> out;
    out.reserve(count);
    for (int s = 0; s < count; ++s) {
        int x = pick(rng), y = pick(rng);
        out.push_back(KernelGaussianSample{space.distance()(x, y), -2.0 * t * std::log(r(x, y))});
    }
    return out;
}

}  // namespace entropic
