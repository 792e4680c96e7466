#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "humatch/image.hpp"
#include "humatch/integral.hpp"

namespace humatch {

struct WeightedRect {
    Rect rect;
    double weight = 0.0;
};

/// Upright Haar-like feature: a weighted sum of 2 or 3 rectangles in base
/// window coordinates.
struct HaarFeature {
    std::vector<WeightedRect> rects;
};

/// Decision stump over one feature.
struct WeakClassifier {
    HaarFeature feature;
    double threshold = 0.0;
    double left_val = 0.0;
    double right_val = 0.0;
};

struct CascadeStage {
    std::vector<WeakClassifier> weak_classifiers;
    double stage_threshold = 0.0;
};

struct CascadeModel {
    int window_w = 0;
    int window_h = 0;
    std::vector<CascadeStage> stages;

    std::size_t weak_count() const noexcept;
};

struct Detection {
    Rect rect;
    int neighbor_count = 1;

    friend bool operator==(const Detection&, const Detection&) = default;
};

/// Reads the stump-only, upright subset of the boosted-cascade XML format.
/// Errors name the offending element path.
CascadeModel parse_cascade(const std::filesystem::path& path);
CascadeModel parse_cascade_xml(std::string_view xml);

/// Runs every stage on one window. The window scale is window.w / model.window_w
/// and the height must match the model aspect after rounding.
bool eval_window(const CascadeModel& model, const IntegralImage& ii, const Rect& window);

struct DetectParams {
    double scale_factor = 1.1;
    int min_neighbors = 3;
    /// Smallest window width considered; 0 means the model window width.
    int min_size = 0;
};

/// One rung of the window-size ladder used by the sliding-window scan.
struct ScanLevel {
    int window_w = 0;
    int window_h = 0;
    int stride = 1;
};

/// Window sizes visited for an image of the given size: widths round(w * f^k)
/// while the window fits, repeated widths skipped, stride max(1, round(2 * scale)).
std::vector<ScanLevel> scan_levels(const CascadeModel& model, int image_w, int image_h, const DetectParams& params);

/// Every window that passes all stages, before grouping. Order is level,
/// then row, then column.
std::vector<Rect> detect_raw(const CascadeModel& model, const GrayImage& image, const DetectParams& params);

/// Partitions rects into similarity classes (transitive closure) and emits
/// the mean rect of every class holding at least max(1, min_neighbors) members.
std::vector<Detection> group_detections(const std::vector<Rect>& raw, int min_neighbors);

/// True when two rects belong to the same class before closure: widths within
/// 20% of the smaller width and top-left corners within 0.2 * smaller width.
bool similar_rects(const Rect& a, const Rect& b) noexcept;

/// Grouped detections sorted by descending neighbor_count, then ascending (y, x).
std::vector<Detection> detect_multiscale(const CascadeModel& model, const GrayImage& image, const DetectParams& params);

}  // namespace humatch
