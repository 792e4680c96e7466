#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "humatch/image.hpp"

// Synthetic shape-faces for calibration corpora, demos and tests: a bright
// face square on a dark frame with five dark feature blobs in the
// eyebrow/eye/lip layout.
namespace humatch::synthetic {

/// Simple polygon in unit coordinates, x and y in [-1, 1], y pointing down.
struct Shape {
    std::string name;
    std::vector<std::array<double, 2>> vertices;
};

/// Built-in shapes by name: square, disk, triangle, cross, l_shape, t_shape,
/// half_disk, arrow, trapezoid, kite, boot, zigzag, flag, key, chevron, hook.
/// Throws InvalidArgument for an unknown name.
const Shape& shape(const std::string& name);
std::vector<std::string> shape_names();

/// Fills pixels whose centers fall inside the polygon after mapping the unit
/// square onto a width x height canvas. The canvas is cropped to the blob.
BinaryImage rasterize(const Shape& shape, int width, int height);

/// Lossless pixel permutations.
BinaryImage rotate90(const BinaryImage& mask, int quarter_turns);
BinaryImage reflect_horizontal(const BinaryImage& mask);

/// 3x3 square structuring element; the canvas grows by one pixel per side.
BinaryImage dilate(const BinaryImage& mask);

/// Rotation about the canvas center with nearest-neighbor sampling onto a
/// canvas large enough to hold the result, cropped to the blob.
BinaryImage rotate_nearest(const BinaryImage& mask, double degrees);

/// Copies mask into a larger blank canvas at (dx, dy).
BinaryImage place(const BinaryImage& mask, int canvas_w, int canvas_h, int dx, int dy);

/// Smallest canvas containing all foreground pixels.
BinaryImage tight(const BinaryImage& mask);

struct FaceStyle {
    int frame_w = 400;
    int frame_h = 400;
    std::uint8_t background = 20;
    std::uint8_t skin = 210;
    std::uint8_t feature = 40;
    /// Skin inset from the face box edge as a fraction of the box size.
    double margin = 0.125;
};

/// Feature centers relative to the face box, in label order
/// (left eyebrow, right eyebrow, left eye, right eye, lip).
inline constexpr std::array<std::array<double, 2>, 5> kFeatureCenters = {
    {{0.30, 0.24}, {0.70, 0.24}, {0.30, 0.43}, {0.70, 0.43}, {0.50, 0.75}}};

using FeatureMasks = std::array<std::optional<BinaryImage>, 5>;

/// Draws the face into a frame; each present mask is centered on its
/// canonical position inside box.
GrayImage render_face(const FaceStyle& style, const Rect& box, const FeatureMasks& features);

/// Feature masks for a subject built from one base shape: flattened eyebrows,
/// round-ish eyes and a wide lip, sized for a face box of box_size pixels.
FeatureMasks subject_features(const Shape& base, int box_size);

/// Perturbations applied when rendering a subject's face.
struct FaceVariant {
    /// Face box offset from its default position (centered in the frame).
    int dx = 0;
    int dy = 0;
    /// Quarter turns applied to every feature blob in place.
    int quarter_turns = 0;
    /// One-pixel dilation of every feature blob.
    bool dilated = false;
    /// Keep only the lip.
    bool lip_only = false;
};

/// Default face box edge for render_subject: 80% of the frame width.
int default_box_size(const FaceStyle& style);

/// The face box render_subject uses for a variant.
Rect subject_box(const FaceStyle& style, const FaceVariant& variant);

/// Frame showing the subject whose features are built from base_shape.
GrayImage render_subject(const std::string& base_shape, const FaceVariant& variant = {}, const FaceStyle& style = {});

}  // namespace humatch::synthetic
