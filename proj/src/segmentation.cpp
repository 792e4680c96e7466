#include "humatch/segmentation.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include <boost/multiprecision/cpp_int.hpp>

#include "humatch/error.hpp"

namespace humatch {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// Canonical component order; also the tie-break wherever two candidates
// would otherwise be equal.
bool canonical_less(const Component& a, const Component& b) {
    if (a.area != b.area) return a.area > b.area;
    if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
    if (a.bbox.x != b.bbox.x) return a.bbox.x < b.bbox.x;
    return a.pixels.front() < b.pixels.front();
}

}  // namespace

std::uint64_t Histogram256::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

Histogram256 histogram(const GrayImage& image) {
    Histogram256 hist;
    for (const auto v : image.pixels()) ++hist.counts[v];
    return hist;
}

int otsu_threshold(const Histogram256& hist) {
    const std::uint64_t n = hist.total();
    if (n == 0) throw Error(ErrorCode::EmptyHistogram, "histogram holds no pixels");

    BigInt total_sum = 0;
    for (int v = 0; v < 256; ++v) total_sum += BigInt(hist.counts[static_cast<std::size_t>(v)]) * v;

    // sigma_b^2(t) = D^2 / (N^2 * n0 * n1) with D = n0 * s1 - n1 * s0, so
    // candidates compare by cross-multiplying D^2 / (n0 * n1).
    int best_t = 0;
    BigInt best_num = 0;
    BigInt best_den = 1;
    BigInt n0 = 0;
    BigInt s0 = 0;
    for (int t = 0; t < 256; ++t) {
        n0 += hist.counts[static_cast<std::size_t>(t)];
        s0 += BigInt(hist.counts[static_cast<std::size_t>(t)]) * t;
        const BigInt n1 = BigInt(n) - n0;
        if (n0 == 0 || n1 == 0) continue;
        const BigInt s1 = total_sum - s0;
        const BigInt d = n0 * s1 - n1 * s0;
        const BigInt num = d * d;
        const BigInt den = n0 * n1;
        if (num * best_den > best_num * den) {
            best_t = t;
            best_num = num;
            best_den = den;
        }
    }
    return best_t;
}

double between_class_variance(const Histogram256& hist, int t) {
    const double n = static_cast<double>(hist.total());
    double n0 = 0.0, s0 = 0.0, s = 0.0;
    for (int v = 0; v < 256; ++v) {
        const double c = static_cast<double>(hist.counts[static_cast<std::size_t>(v)]);
        s += c * v;
        if (v <= t) {
            n0 += c;
            s0 += c * v;
        }
    }
    const double n1 = n - n0;
    if (n0 == 0.0 || n1 == 0.0) return 0.0;
    const double mu0 = s0 / n0;
    const double mu1 = (s - s0) / n1;
    return (n0 / n) * (n1 / n) * (mu0 - mu1) * (mu0 - mu1);
}

BinaryImage binarize(const GrayImage& image, int t) {
    std::vector<std::uint8_t> out(image.size());
    std::transform(image.pixels().begin(), image.pixels().end(), out.begin(),
                   [t](std::uint8_t v) { return static_cast<std::uint8_t>(v <= t ? 1 : 0); });
    return BinaryImage(image.width(), image.height(), std::move(out));
}

BinaryImage Component::mask() const {
    BinaryImage m(bbox.w, bbox.h);
    for (const auto& p : pixels) m.set(p.x - bbox.x, p.y - bbox.y, true);
    return m;
}

Component Component::from_pixels(std::vector<Point> pixels) {
    if (pixels.empty()) throw Error(ErrorCode::EmptyRegion, "component needs at least one pixel");
    std::sort(pixels.begin(), pixels.end());
    Component c;
    int min_x = pixels.front().x, max_x = min_x, min_y = pixels.front().y, max_y = min_y;
    double sx = 0.0, sy = 0.0;
    for (const auto& p : pixels) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
        sx += p.x;
        sy += p.y;
    }
    c.area = pixels.size();
    c.bbox = Rect{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
    c.cx = sx / static_cast<double>(c.area);
    c.cy = sy / static_cast<double>(c.area);
    c.pixels = std::move(pixels);
    return c;
}

std::vector<Component> connected_components(const BinaryImage& image) {
    const int w = image.width();
    const int h = image.height();
    std::vector<std::uint8_t> seen(image.size(), 0);
    std::vector<Component> out;
    std::vector<Point> stack;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto idx = static_cast<std::size_t>(y) * w + x;
            if (!image.at(x, y) || seen[idx]) continue;
            seen[idx] = 1;
            std::vector<Point> pixels;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                pixels.push_back(p);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = p.x + dx;
                        const int ny = p.y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const auto nidx = static_cast<std::size_t>(ny) * w + nx;
                        if (seen[nidx] || !image.at(nx, ny)) continue;
                        seen[nidx] = 1;
                        stack.push_back({nx, ny});
                    }
                }
            }
            out.push_back(Component::from_pixels(std::move(pixels)));
        }
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

std::string_view region_key(RegionLabel label) noexcept {
    switch (label) {
        case RegionLabel::LeftEyebrow: return "left_eyebrow";
        case RegionLabel::RightEyebrow: return "right_eyebrow";
        case RegionLabel::LeftEye: return "left_eye";
        case RegionLabel::RightEye: return "right_eye";
        case RegionLabel::Lip: return "lip";
    }
    return "";
}

std::optional<RegionLabel> region_from_key(std::string_view key) noexcept {
    for (const auto label : kRegionLabels) {
        if (region_key(label) == key) return label;
    }
    return std::nullopt;
}

void SegmentationConfig::validate() const {
    auto check_band = [](const Band& b, const char* name) {
        if (!(b.lo >= 0.0 && b.hi <= 1.0 && b.lo < b.hi)) {
            throw Error(ErrorCode::InvalidArgument, std::string(name) + " band must satisfy 0 <= lo < hi <= 1");
        }
    };
    check_band(eyebrow, "eyebrow");
    check_band(eye, "eye");
    check_band(lip, "lip");
    if (!(min_area_fraction >= 0.0 && min_area_fraction < max_area_fraction && max_area_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "area fractions must satisfy 0 <= min < max <= 1");
    }
}

FaceRegions assign_regions(const std::vector<Component>& components, const Rect& face_box,
                           const SegmentationConfig& config) {
    FaceRegions result;
    result.face_box = face_box;
    const double face_area = static_cast<double>(face_box.area());

    std::vector<const Component*> kept;
    for (const auto& c : components) {
        const double a = static_cast<double>(c.area);
        if (a < config.min_area_fraction * face_area || a > config.max_area_fraction * face_area) continue;
        if (!c.bbox.fits_in(face_box.w, face_box.h)) continue;
        kept.push_back(&c);
    }
    std::sort(kept.begin(), kept.end(), [](const Component* a, const Component* b) { return canonical_less(*a, *b); });

    auto ny = [&](const Component* c) { return c->cy / face_box.h; };
    auto nx = [&](const Component* c) { return c->cx / face_box.w; };

    // Each side picks an (eyebrow, eye) pair: most slots filled first, then the
    // larger eye, then the larger eyebrow. The eyebrow must sit strictly above
    // the eye. kept is canonically ordered, so the first optimum is the tie-break.
    auto assign_side = [&](bool left, RegionLabel brow_label, RegionLabel eye_label) {
        std::vector<const Component*> brows{nullptr};
        std::vector<const Component*> eyes{nullptr};
        for (const auto* c : kept) {
            if ((nx(c) < 0.5) != left) continue;
            if (config.eyebrow.contains(ny(c))) brows.push_back(c);
            if (config.eye.contains(ny(c))) eyes.push_back(c);
        }
        using Score = std::tuple<int, std::size_t, std::size_t>;
        std::optional<Score> best;
        const Component* best_brow = nullptr;
        const Component* best_eye = nullptr;
        for (const auto* e : eyes) {
            for (const auto* b : brows) {
                if (b != nullptr && b == e) continue;
                if (b != nullptr && e != nullptr && !(b->cy < e->cy)) continue;
                const Score score{(b != nullptr) + (e != nullptr), e ? e->area : 0, b ? b->area : 0};
                if (!best || score > *best) {
                    best = score;
                    best_brow = b;
                    best_eye = e;
                }
            }
        }
        if (best_brow) result.regions.emplace(brow_label, *best_brow);
        if (best_eye) result.regions.emplace(eye_label, *best_eye);
    };
    assign_side(true, RegionLabel::LeftEyebrow, RegionLabel::LeftEye);
    assign_side(false, RegionLabel::RightEyebrow, RegionLabel::RightEye);

    for (const auto* c : kept) {
        if (config.lip.contains(ny(c))) {
            result.regions.emplace(RegionLabel::Lip, *c);
            break;
        }
    }
    return result;
}

FaceSegmentation segment_face(const GrayImage& face, const Rect& face_box, const SegmentationConfig& config) {
    FaceSegmentation seg;
    seg.threshold = otsu_threshold(histogram(face));
    seg.components = connected_components(binarize(face, seg.threshold));
    Rect box = face_box;
    box.w = face.width();
    box.h = face.height();
    seg.regions = assign_regions(seg.components, box, config);
    return seg;
}

GrayImage render_label_mask(const FaceRegions& regions) {
    GrayImage out(regions.face_box.w, regions.face_box.h, 0);
    for (const auto& [label, component] : regions.regions) {
        const auto value = static_cast<std::uint8_t>(50 * (static_cast<int>(label) + 1));
        for (const auto& p : component.pixels) out.at(p.x, p.y) = value;
    }
    return out;
}

}  // namespace humatch
