#pragma once

#include <cstdint>
#include <vector>

#include "entropic/space.hpp"

namespace entropic {

/// Full eigendecomposition of -Delta, computed once and cached on the space.
const SpectralDecomposition& spectral_decompose(const Space& space);

/// h_t f = sum_k exp(-lambda_k t) <f, e_k>_m e_k. Mass preserving, respects
/// the maximum principle, h_0 f == f.
ScalarField heat_apply(const Space& space, double t, const ScalarField& f);

/// Symmetric heat kernel r_t[x](y): h_t f(x) = sum_y f(y) r_t[x](y) m_y.
/// Each row is a probability density against m; entries that underflow are
/// floored at the smallest positive normal number so logarithms stay finite.
Eigen::MatrixXd heat_kernel(const Space& space, double t);

/// Sampled comparison of -2t log r_t[x](y) against d^2(x,y), the Gaussian
/// short-time shape the kernel approaches under refinement. Diagnostic only.
struct KernelGaussianSample {
    double distance = 0.0;
    double neg2t_log_r = 0.0;
};
std::vector<KernelGaussianSample> heat_kernel_gaussian_samples(const Space& space, double t,
                                                               int count, std::uint64_t seed);

}  // namespace entropic
