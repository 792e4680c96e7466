#pragma once

// Reference implementations used as test oracles. They favor obviousness over
// speed: explicit pixel loops, no summed-area tables, no exact-integer tricks.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "humatch/cascade.hpp"
#include "humatch/gallery.hpp"
#include "humatch/image.hpp"
#include "humatch/segmentation.hpp"

namespace oracle {

using Rng = std::mt19937_64;

humatch::GrayImage random_gray(Rng& rng, int w, int h);
humatch::BinaryImage random_mask(Rng& rng, int w, int h, double density);
/// Random mask with at least one foreground pixel.
humatch::BinaryImage random_nonempty_mask(Rng& rng, int max_w, int max_h);
humatch::Histogram256 random_histogram(Rng& rng);
humatch::Rect random_rect_in(Rng& rng, int w, int h);

std::uint64_t pixel_sum(const humatch::GrayImage& img, const humatch::Rect& r);

/// Textbook argmax of w0 * w1 * (mu0 - mu1)^2 over every t, first maximum wins.
int brute_otsu(const humatch::Histogram256& hist);

double raw_moment(const humatch::BinaryImage& mask, int p, int q);
/// Sum of (x - xbar)^p (y - ybar)^q with the centroid taken in floating point.
double central_moment(const humatch::BinaryImage& mask, int p, int q);
/// Sum of |x - xbar|^p |y - ybar|^q: the magnitude scale of the central sum.
double central_moment_abs(const humatch::BinaryImage& mask, int p, int q);

/// Cascade verdict computed with explicit pixel loops over the window.
bool eval_window(const humatch::CascadeModel& model, const humatch::GrayImage& img, const humatch::Rect& window);
/// Every window of every scan level that passes, found by explicit loops.
std::vector<humatch::Rect> sweep(const humatch::CascadeModel& model, const humatch::GrayImage& img,
                                 double scale_factor, int min_size = 0);
/// Similarity classes by breadth-first search over the pairwise predicate.
std::vector<humatch::Detection> group(const std::vector<humatch::Rect>& raw, int min_neighbors);

/// 1-stage, 1-stump 4x4 cascade: dark top half over bright bottom half passes.
std::string handbuilt_cascade_xml();

/// Gallery with random ids and random (finite, nonzero) Hu values.
humatch::Gallery random_gallery(Rng& rng, int max_subjects = 6);

bool nearly_equal(double a, double b, double rel);

}  // namespace oracle
