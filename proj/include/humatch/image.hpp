#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace humatch {

/// Axis-aligned rectangle. x is the column offset, y the row offset,
/// origin at the top-left pixel, 0-based.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 1;
    int h = 1;

    int right() const noexcept { return x + w; }
    int bottom() const noexcept { return y + h; }
    long long area() const noexcept { return static_cast<long long>(w) * h; }
    bool valid() const noexcept { return w >= 1 && h >= 1 && x >= 0 && y >= 0; }
    bool fits_in(int width, int height) const noexcept {
        return valid() && right() <= width && bottom() <= height;
    }

    friend bool operator==(const Rect&, const Rect&) = default;
    friend auto operator<=>(const Rect&, const Rect&) = default;
};

/// 8-bit single-channel raster, row-major. Pixel (x, y) lives at data[y * width + x].
class GrayImage {
public:
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::uint8_t at(int x, int y) const noexcept { return data_[index(x, y)]; }
    std::uint8_t& at(int x, int y) noexcept { return data_[index(x, y)]; }

    std::span<const std::uint8_t> pixels() const noexcept { return data_; }
    std::span<std::uint8_t> pixels() noexcept { return data_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

/// Foreground mask with values in {0, 1}.
class BinaryImage {
public:
    BinaryImage(int width, int height);
    BinaryImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    bool at(int x, int y) const noexcept { return data_[index(x, y)] != 0; }
    void set(int x, int y, bool on) noexcept { data_[index(x, y)] = on ? 1 : 0; }

    std::span<const std::uint8_t> pixels() const noexcept { return data_; }
    std::size_t count() const noexcept;

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

/// Copies roi out of image. Throws OutOfBounds unless roi lies fully inside.
GrayImage crop(const GrayImage& image, const Rect& roi);

/// Netpbm graymap reader. Accepts P2 and P5 with maxval <= 255 and `#`
/// comments between header tokens. Sample values are kept as stored.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);

/// Writes binary P5 with maxval 255: "P5 <w> <h> 255\n" followed by the raster.
void save_pgm(const GrayImage& image, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);

}  // namespace humatch
