#pragma once

#include <cstdint>
#include <vector>

#include "humatch/image.hpp"

namespace humatch {

struct WindowStats {
    double mean = 0.0;
    double stddev = 1.0;
};

/// Zero-padded summed-area tables of pixel values and squared pixel values.
/// Entry (x, y) of each table, 0 <= x <= width, 0 <= y <= height, holds the
/// sum over pixels (u < x, v < y).
class IntegralImage {
public:
    explicit IntegralImage(const GrayImage& image);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    std::uint64_t sum_at(int x, int y) const noexcept { return sums_[index(x, y)]; }
    std::uint64_t sq_sum_at(int x, int y) const noexcept { return sq_sums_[index(x, y)]; }

    /// Four-lookup rectangle sum. Throws OutOfBounds when r leaves the image.
    std::uint64_t rect_sum(const Rect& r) const;
    std::uint64_t rect_sq_sum(const Rect& r) const;

    /// Unchecked variants for the detector's inner loop.
    std::uint64_t rect_sum_unchecked(int x, int y, int w, int h) const noexcept {
        const std::size_t stride = static_cast<std::size_t>(width_) + 1;
        const std::size_t top = static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x);
        const std::size_t bottom = top + static_cast<std::size_t>(h) * stride;
        return sums_[bottom + w] - sums_[bottom] - sums_[top + w] + sums_[top];
    }
    std::uint64_t rect_sq_sum_unchecked(int x, int y, int w, int h) const noexcept {
        const std::size_t stride = static_cast<std::size_t>(width_) + 1;
        const std::size_t top = static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x);
        const std::size_t bottom = top + static_cast<std::size_t>(h) * stride;
        return sq_sums_[bottom + w] - sq_sums_[bottom] - sq_sums_[top + w] + sq_sums_[top];
    }

    /// Population mean and standard deviation of the window. A window with
    /// zero variance reports stddev 1.
    WindowStats window_mean_stddev(const Rect& r) const;
    WindowStats window_mean_stddev_unchecked(int x, int y, int w, int h) const noexcept;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * (static_cast<std::size_t>(width_) + 1) + static_cast<std::size_t>(x);
    }
    void check(const Rect& r) const;

    int width_;
    int height_;
    std::vector<std::uint64_t> sums_;
    std::vector<std::uint64_t> sq_sums_;
};

inline IntegralImage build_integral(const GrayImage& image) { return IntegralImage(image); }

}  // namespace humatch
