#include "humatch/moments.hpp"

#include <algorithm>
#include <cmath>

#include "humatch/error.hpp"

namespace humatch {

namespace {

// Keeps every product in central_moments below 2^123.
constexpr MomentInt kMassSpanLimit = MomentInt{1} << 40;

void check_span(MomentInt mass, long long max_coord) {
    if (mass * (max_coord + 1) > kMassSpanLimit) {
        throw Error(ErrorCode::Overflow, "region too large for exact moment arithmetic");
    }
}

void accumulate(RawMoments& rm, long long x, long long y) {
    const MomentInt xi = x, yi = y;
    rm.m[0] += 1;
    rm.m[1] += xi;
    rm.m[2] += yi;
    rm.m[3] += xi * xi;
    rm.m[4] += xi * yi;
    rm.m[5] += yi * yi;
    rm.m[6] += xi * xi * xi;
    rm.m[7] += xi * xi * yi;
    rm.m[8] += xi * yi * yi;
    rm.m[9] += yi * yi * yi;
}

MomentInt ipow(MomentInt base, int exp) {
    MomentInt out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

constexpr int binomial(int n, int k) {
    int out = 1;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

}  // namespace

RawMoments raw_moments(const BinaryImage& mask) {
    RawMoments rm;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (mask.at(x, y)) accumulate(rm, x, y);
        }
    }
    if (rm.m[0] == 0) throw Error(ErrorCode::EmptyRegion, "mask has no foreground pixels");
    check_span(rm.m[0], std::max(mask.width(), mask.height()));
    return rm;
}

RawMoments raw_moments(const Component& component) {
    if (component.pixels.empty()) throw Error(ErrorCode::EmptyRegion, "component has no pixels");
    RawMoments rm;
    long long max_coord = 0;
    for (const auto& p : component.pixels) {
        accumulate(rm, p.x, p.y);
        max_coord = std::max({max_coord, static_cast<long long>(p.x), static_cast<long long>(p.y)});
    }
    check_span(rm.m[0], max_coord);
    return rm;
}

double CentralMoments::mu(int p, int q) const noexcept {
    const auto v = static_cast<double>(scaled[static_cast<std::size_t>(moment_index(p, q))]);
    const int order = p + q;
    if (order == 0) return v;
    return v / std::pow(static_cast<double>(m00), order - 1);
}

CentralMoments central_moments(const RawMoments& rm) {
    const MomentInt m00 = rm.m[0];
    if (m00 <= 0) throw Error(ErrorCode::ZeroMass, "zero mass");
    const MomentInt m10 = rm.m[1];
    const MomentInt m01 = rm.m[2];

    // m00^(p+q-1) * mu_pq
    //   = sum_{i<=p, j<=q} C(p,i) C(q,j) (-m10)^(p-i) (-m01)^(q-j) m00^(i+j-1) m_ij,
    // where the i = j = 0 term reduces to (-m10)^p (-m01)^q.
    CentralMoments cm;
    cm.m00 = m00;
    cm.cx = static_cast<double>(m10) / static_cast<double>(m00);
    cm.cy = static_cast<double>(m01) / static_cast<double>(m00);
    cm.scaled[0] = m00;
    for (std::size_t k = 1; k < kMomentOrders.size(); ++k) {
        const int p = kMomentOrders[k][0];
        const int q = kMomentOrders[k][1];
        MomentInt total = 0;
        for (int i = 0; i <= p; ++i) {
            for (int j = 0; j <= q; ++j) {
                const MomentInt coeff = static_cast<MomentInt>(binomial(p, i) * binomial(q, j)) *
                                        ipow(-m10, p - i) * ipow(-m01, q - j);
                if (i + j == 0) {
                    total += coeff;
                } else {
                    total += coeff * ipow(m00, i + j - 1) * rm.exact(i, j);
                }
            }
        }
        cm.scaled[k] = total;
    }
    return cm;
}

NormalizedMoments normalized_moments(const CentralMoments& cm) {
    if (cm.m00 <= 0) throw Error(ErrorCode::ZeroMass, "zero mass");
    const double m00 = static_cast<double>(cm.m00);
    // Second order: mu / m00^2 = scaled / m00^3. Third order: mu / m00^2.5 = scaled / m00^4.5.
    const double second = m00 * m00 * m00;
    const double third = m00 * m00 * m00 * m00 * std::sqrt(m00);
    auto at = [&](int p, int q) { return static_cast<double>(cm.scaled[static_cast<std::size_t>(moment_index(p, q))]); };
    NormalizedMoments nm;
    nm.eta20 = at(2, 0) / second;
    nm.eta11 = at(1, 1) / second;
    nm.eta02 = at(0, 2) / second;
    nm.eta30 = at(3, 0) / third;
    nm.eta21 = at(2, 1) / third;
    nm.eta12 = at(1, 2) / third;
    nm.eta03 = at(0, 3) / third;
    return nm;
}

HuVector hu_vector(const NormalizedMoments& n) {
    const double a = n.eta30 + n.eta12;  // t0
    const double b = n.eta21 + n.eta03;  // t1
    const double c = n.eta30 - 3.0 * n.eta12;
    const double d = 3.0 * n.eta21 - n.eta03;
    const double diff2 = n.eta20 - n.eta02;

    HuVector hu{};
    hu[0] = n.eta20 + n.eta02;
    hu[1] = diff2 * diff2 + 4.0 * n.eta11 * n.eta11;
    hu[2] = c * c + d * d;
    hu[3] = a * a + b * b;
    hu[4] = c * a * (a * a - 3.0 * b * b) + d * b * (3.0 * a * a - b * b);
    hu[5] = diff2 * (a * a - b * b) + 4.0 * n.eta11 * a * b;
    hu[6] = d * a * (a * a - 3.0 * b * b) - c * b * (3.0 * a * a - b * b);
    return hu;
}

HuLog log_scale(const HuVector& hu, double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    HuLog out{};
    for (std::size_t i = 0; i < hu.size(); ++i) {
        const double h = hu[i];
        if (h == 0.0) {
            out[i] = 0.0;
        } else {
            const double mag = std::log10(std::abs(h) + epsilon);
            out[i] = h > 0.0 ? -mag : mag;
        }
    }
    return out;
}

HuVector hu_moments(const BinaryImage& mask) {
    return hu_vector(normalized_moments(central_moments(raw_moments(mask))));
}

}  // namespace humatch
