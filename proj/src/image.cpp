#include "humatch/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "humatch/error.hpp"

namespace humatch {

namespace {

void check_dims(int width, int height) {
    if (width < 1 || height < 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "image dimensions must be positive, got " + std::to_string(width) + "x" +
                        std::to_string(height));
    }
}

std::size_t pixel_count(int width, int height) {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

// Tokenizer over a Netpbm header. Whitespace separates tokens and a `#`
// starts a comment that runs to the end of the line.
class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const noexcept { return pos_; }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    // Reads a non-negative decimal integer; nullopt at end of input.
    std::optional<long long> read_uint(ErrorCode on_garbage, const char* what) {
        skip_space_and_comments();
        if (pos_ >= bytes_.size()) return std::nullopt;
        const std::size_t start = pos_;
        long long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000LL) {
                throw Error(on_garbage, std::string(what) + " too large at byte offset " + std::to_string(start));
            }
            ++pos_;
        }
        if (pos_ == start || (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#')) {
            throw Error(on_garbage, std::string("expected ") + what + " at byte offset " + std::to_string(start));
        }
        return value;
    }

    long long require_uint(const char* what) {
        const std::size_t at = pos_;
        auto v = read_uint(ErrorCode::MalformedHeader, what);
        if (!v) {
            throw Error(ErrorCode::MalformedHeader,
                        std::string("missing ") + what + " at byte offset " + std::to_string(at));
        }
        return *v;
    }

    // Exactly one whitespace byte separates maxval from a binary raster.
    void consume_single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw Error(ErrorCode::MalformedHeader,
                        "expected whitespace after maxval at byte offset " + std::to_string(pos_));
        }
        ++pos_;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(pixel_count(width, height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != pixel_count(width, height)) {
        throw Error(ErrorCode::InvalidArgument, "pixel buffer size does not match dimensions");
    }
}

BinaryImage::BinaryImage(int width, int height) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(pixel_count(width, height), 0);
}

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != pixel_count(width, height)) {
        throw Error(ErrorCode::InvalidArgument, "mask buffer size does not match dimensions");
    }
    if (std::any_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v > 1; })) {
        throw Error(ErrorCode::InvalidArgument, "binary image values must be 0 or 1");
    }
}

std::size_t BinaryImage::count() const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

GrayImage crop(const GrayImage& image, const Rect& roi) {
    if (!roi.fits_in(image.width(), image.height())) {
        throw Error(ErrorCode::OutOfBounds,
                    "roi (" + std::to_string(roi.x) + "," + std::to_string(roi.y) + "," +
                        std::to_string(roi.w) + "," + std::to_string(roi.h) + ") exceeds " +
                        std::to_string(image.width()) + "x" + std::to_string(image.height()));
    }
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(roi.area()));
    const auto src = image.pixels();
    for (int y = roi.y; y < roi.bottom(); ++y) {
        const auto row = src.subspan(static_cast<std::size_t>(y) * image.width() + roi.x, roi.w);
        out.insert(out.end(), row.begin(), row.end());
    }
    return GrayImage(roi.w, roi.h, std::move(out));
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw Error(ErrorCode::MalformedHeader, "expected magic P2 or P5 at byte offset 0");
    }
    const bool binary = bytes[1] == '5';
    HeaderReader reader(bytes.subspan(2));
    const auto at = [&] { return reader.offset() + 2; };

    const long long width = reader.require_uint("width");
    const long long height = reader.require_uint("height");
    if (width < 1 || height < 1) {
        throw Error(ErrorCode::MalformedHeader, "zero image dimension before byte offset " + std::to_string(at()));
    }
    const std::size_t maxval_at = at();
    const long long maxval = reader.require_uint("maxval");
    if (maxval < 1 || maxval > 255) {
        throw Error(ErrorCode::MaxvalOutOfRange,
                    "maxval " + std::to_string(maxval) + " at byte offset " + std::to_string(maxval_at));
    }

    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> data;
    data.reserve(count);

    if (binary) {
        reader.consume_single_space();
        const std::size_t start = at();
        if (bytes.size() - start < count) {
            throw Error(ErrorCode::TruncatedPayload,
                        "expected " + std::to_string(count) + " raster bytes from byte offset " +
                            std::to_string(start) + ", file ends at " + std::to_string(bytes.size()));
        }
        for (std::size_t i = 0; i < count; ++i) {
            const auto v = bytes[start + i];
            if (v > maxval) {
                throw Error(ErrorCode::MalformedPayload,
                            "sample exceeds maxval at byte offset " + std::to_string(start + i));
            }
            data.push_back(v);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t sample_at = at();
            auto v = reader.read_uint(ErrorCode::MalformedPayload, "sample");
            if (!v) {
                throw Error(ErrorCode::TruncatedPayload,
                            "expected " + std::to_string(count) + " samples, found " + std::to_string(i) +
                                " before byte offset " + std::to_string(sample_at));
            }
            if (*v > maxval) {
                throw Error(ErrorCode::MalformedPayload,
                            "sample exceeds maxval at byte offset " + std::to_string(sample_at));
            }
            data.push_back(static_cast<std::uint8_t>(*v));
        }
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_pgm(bytes);
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
    const std::string header =
        "P5 " + std::to_string(image.width()) + " " + std::to_string(image.height()) + " 255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const auto px = image.pixels();
    out.insert(out.end(), px.begin(), px.end());
    return out;
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path) {
    const auto bytes = encode_pgm(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace humatch
