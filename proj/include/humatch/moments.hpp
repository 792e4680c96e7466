#pragma once

#include <array>

#include "humatch/image.hpp"
#include "humatch/segmentation.hpp"

namespace humatch {

/// Exact accumulator for moment sums over integer pixel coordinates.
using MomentInt = __int128;

/// Moment orders p + q <= 3 in storage order:
/// 00, 10, 01, 20, 11, 02, 30, 21, 12, 03.
inline constexpr std::array<std::array<int, 2>, 10> kMomentOrders = {
    {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}}};

constexpr int moment_index(int p, int q) noexcept {
    for (int i = 0; i < 10; ++i) {
        if (kMomentOrders[static_cast<std::size_t>(i)][0] == p && kMomentOrders[static_cast<std::size_t>(i)][1] == q) {
            return i;
        }
    }
    return -1;
}

/// m_pq = sum of x^p * y^q over foreground pixels, 0-based coordinates.
struct RawMoments {
    std::array<MomentInt, 10> m{};

    MomentInt exact(int p, int q) const noexcept { return m[static_cast<std::size_t>(moment_index(p, q))]; }
    double value(int p, int q) const noexcept { return static_cast<double>(exact(p, q)); }
};

/// Moments about the centroid. Each mu_pq is held as the exact integer
/// m00^(p+q-1) * mu_pq, so translated or rotated copies of a mask produce
/// identical (or sign-permuted) numerators.
struct CentralMoments {
    MomentInt m00 = 0;
    std::array<MomentInt, 10> scaled{};
    double cx = 0.0;
    double cy = 0.0;

    double mu(int p, int q) const noexcept;
};

/// eta_pq = mu_pq / mu00^((p+q)/2 + 1) for 2 <= p + q <= 3.
struct NormalizedMoments {
    double eta20 = 0, eta11 = 0, eta02 = 0;
    double eta30 = 0, eta21 = 0, eta12 = 0, eta03 = 0;
};

using HuVector = std::array<double, 7>;
using HuLog = std::array<double, 7>;

inline constexpr double kDefaultLogEpsilon = 1e-30;

/// Throws EmptyRegion when the mask has no foreground.
RawMoments raw_moments(const BinaryImage& mask);
RawMoments raw_moments(const Component& component);

/// Throws ZeroMass when m00 is 0.
CentralMoments central_moments(const RawMoments& rm);

NormalizedMoments normalized_moments(const CentralMoments& cm);

/// The seven classical Hu invariants. Hu[6] changes sign under reflection.
HuVector hu_vector(const NormalizedMoments& nm);

/// -sign(h) * log10(|h| + epsilon), with sign(0) = 0.
HuLog log_scale(const HuVector& hu, double epsilon = kDefaultLogEpsilon);

/// raw -> central -> normalized -> Hu for one mask.
HuVector hu_moments(const BinaryImage& mask);

}  // namespace humatch
