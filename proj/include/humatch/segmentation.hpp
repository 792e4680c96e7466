#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "humatch/image.hpp"

namespace humatch {

struct Histogram256 {
    std::array<std::uint64_t, 256> counts{};

    std::uint64_t total() const noexcept;
};

Histogram256 histogram(const GrayImage& image);

/// Smallest t in [0, 255] maximizing the between-class variance of the split
/// {v <= t} / {v > t}. Candidates are compared exactly in integer arithmetic.
/// Throws EmptyHistogram when the histogram holds no pixels.
int otsu_threshold(const Histogram256& hist);

/// w0 * w1 * (mu0 - mu1)^2 for the split at t, 0 when either class is empty.
double between_class_variance(const Histogram256& hist, int t);

/// Dark pixels are foreground: out = 1 iff in <= t.
BinaryImage binarize(const GrayImage& image, int t);

struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point& a, const Point& b) {
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }
};

/// 8-connected foreground blob. Pixels are stored in raster order.
struct Component {
    std::vector<Point> pixels;
    Rect bbox;
    std::size_t area = 0;
    double cx = 0.0;
    double cy = 0.0;

    /// The blob rendered on its own tight bounding canvas.
    BinaryImage mask() const;

    static Component from_pixels(std::vector<Point> pixels);
};

/// Components sorted by descending area, then ascending (bbox.y, bbox.x),
/// then first pixel in raster order.
std::vector<Component> connected_components(const BinaryImage& image);

enum class RegionLabel { LeftEyebrow, RightEyebrow, LeftEye, RightEye, Lip };

inline constexpr std::array<RegionLabel, 5> kRegionLabels = {
    RegionLabel::LeftEyebrow, RegionLabel::RightEyebrow, RegionLabel::LeftEye, RegionLabel::RightEye,
    RegionLabel::Lip};

/// Snake-case key used in gallery files: left_eyebrow, right_eyebrow, left_eye, right_eye, lip.
std::string_view region_key(RegionLabel label) noexcept;
std::optional<RegionLabel> region_from_key(std::string_view key) noexcept;

/// Vertical band of normalized centroid height.
struct Band {
    double lo = 0.0;
    double hi = 1.0;
    bool closed_hi = false;

    bool contains(double v) const noexcept { return v >= lo && (closed_hi ? v <= hi : v < hi); }
};

struct SegmentationConfig {
    double min_area_fraction = 0.002;
    double max_area_fraction = 0.15;
    Band eyebrow{0.15, 0.40, false};
    Band eye{0.30, 0.55, false};
    Band lip{0.60, 0.90, true};

    /// Throws InvalidArgument when a band or fraction is out of range.
    void validate() const;
};

struct FaceRegions {
    std::map<RegionLabel, Component> regions;
    /// Face location in the source frame; components are relative to it.
    Rect face_box;
};

/// Places components into the five feature slots by layout bands. Components
/// outside the area limits are ignored, slots without a candidate stay empty,
/// and the result does not depend on the input order.
FaceRegions assign_regions(const std::vector<Component>& components, const Rect& face_box,
                           const SegmentationConfig& config = {});

struct FaceSegmentation {
    int threshold = 0;
    std::vector<Component> components;
    FaceRegions regions;
};

/// Otsu + binarize + components + assignment on an already-cropped face image.
/// face_box records where the crop came from.
FaceSegmentation segment_face(const GrayImage& face, const Rect& face_box, const SegmentationConfig& config = {});

/// Label visualization: background 0, then 50, 100, 150, 200, 250 in label order.
GrayImage render_label_mask(const FaceRegions& regions);

}  // namespace humatch
