#include "humatch/integral.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "humatch/error.hpp"

namespace humatch {

IntegralImage::IntegralImage(const GrayImage& image) : width_(image.width()), height_(image.height()) {
    const auto pixels = static_cast<unsigned __int128>(width_) * static_cast<unsigned __int128>(height_);
    if (pixels * 255u * 255u > std::numeric_limits<std::uint64_t>::max()) {
        throw Error(ErrorCode::Overflow, "image too large for 64-bit summed-area tables");
    }
    const std::size_t stride = static_cast<std::size_t>(width_) + 1;
    sums_.assign(stride * (static_cast<std::size_t>(height_) + 1), 0);
    sq_sums_.assign(sums_.size(), 0);

    for (int y = 0; y < height_; ++y) {
        std::uint64_t row = 0;
        std::uint64_t sq_row = 0;
        for (int x = 0; x < width_; ++x) {
            const std::uint64_t v = image.at(x, y);
            row += v;
            sq_row += v * v;
            sums_[index(x + 1, y + 1)] = sums_[index(x + 1, y)] + row;
            sq_sums_[index(x + 1, y + 1)] = sq_sums_[index(x + 1, y)] + sq_row;
        }
    }
}

void IntegralImage::check(const Rect& r) const {
    if (!r.fits_in(width_, height_)) {
        throw Error(ErrorCode::OutOfBounds,
                    "rect (" + std::to_string(r.x) + "," + std::to_string(r.y) + "," + std::to_string(r.w) + "," +
                        std::to_string(r.h) + ") outside " + std::to_string(width_) + "x" +
                        std::to_string(height_));
    }
}

std::uint64_t IntegralImage::rect_sum(const Rect& r) const {
    check(r);
    return rect_sum_unchecked(r.x, r.y, r.w, r.h);
}

std::uint64_t IntegralImage::rect_sq_sum(const Rect& r) const {
    check(r);
    return rect_sq_sum_unchecked(r.x, r.y, r.w, r.h);
}

WindowStats IntegralImage::window_mean_stddev(const Rect& r) const {
    check(r);
    return window_mean_stddev_unchecked(r.x, r.y, r.w, r.h);
}

WindowStats IntegralImage::window_mean_stddev_unchecked(int x, int y, int w, int h) const noexcept {
    const auto area = static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(h);
    const std::uint64_t sum = rect_sum_unchecked(x, y, w, h);
    const std::uint64_t sq = rect_sq_sum_unchecked(x, y, w, h);
    // area^2 * variance, exact in integers.
    const auto scaled_var = static_cast<__int128>(area) * static_cast<__int128>(sq) -
                            static_cast<__int128>(sum) * static_cast<__int128>(sum);
    WindowStats stats;
    stats.mean = static_cast<double>(sum) / static_cast<double>(area);
    if (scaled_var > 0) {
        stats.stddev = std::sqrt(static_cast<double>(scaled_var)) / static_cast<double>(area);
    }
    return stats;
}

}  // namespace humatch
