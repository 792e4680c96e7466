#include "humatch/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "humatch/error.hpp"
#include "humatch/segmentation.hpp"

namespace humatch::synthetic {

namespace {

using Vertices = std::vector<std::array<double, 2>>;

Vertices arc(double cx, double cy, double r, double from, double to, int steps) {
    Vertices out;
    for (int i = 0; i <= steps; ++i) {
        const double a = from + (to - from) * i / steps;
        out.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
    }
    return out;
}

const std::map<std::string, Shape>& library() {
    static const std::map<std::string, Shape> shapes = [] {
        constexpr double pi = std::numbers::pi;
        std::map<std::string, Shape> m;
        auto add = [&m](std::string name, Vertices v) { m.emplace(name, Shape{name, std::move(v)}); };
        add("square", {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
        auto disk = arc(0, 0, 1, 0, 2 * pi, 96);
        disk.pop_back();
        add("disk", disk);
        add("triangle", {{0, -1}, {1, 1}, {-1, 1}});
        const double a = 1.0 / 3.0;
        add("cross", {{-a, -1}, {a, -1}, {a, -a}, {1, -a}, {1, a}, {a, a}, {a, 1}, {-a, 1}, {-a, a}, {-1, a}, {-1, -a}, {-a, -a}});
        add("l_shape", {{-1, -1}, {-0.3, -1}, {-0.3, 0.4}, {1, 0.4}, {1, 1}, {-1, 1}});
        add("t_shape", {{-1, -1}, {1, -1}, {1, -0.4}, {0.3, -0.4}, {0.3, 1}, {-0.3, 1}, {-0.3, -0.4}, {-1, -0.4}});
        add("half_disk", arc(0, 1, 1, pi, 2 * pi, 64));
        add("arrow", {{-1, -0.3}, {0.2, -0.3}, {0.2, -1}, {1, 0}, {0.2, 1}, {0.2, 0.3}, {-1, 0.3}});
        add("trapezoid", {{-0.5, -1}, {0.5, -1}, {1, 1}, {-1, 1}});
        add("kite", {{0, -1}, {0.6, -0.3}, {0, 1}, {-0.6, -0.3}});
        add("boot", {{-0.8, -1}, {0, -1}, {0.1, 0.1}, {1, 0.5}, {0.9, 1}, {-0.8, 1}});
        add("zigzag", {{-1, -1}, {1, -1}, {1, -0.5}, {-0.2, 0.5}, {1, 0.5}, {1, 1}, {-1, 1}, {-1, 0.5}, {0.2, -0.5}, {-1, -0.5}});
        add("flag", {{-1, -1}, {1, -0.6}, {-0.5, -0.2}, {-0.5, 1}, {-1, 1}});
        add("chevron", {{-1, -1}, {0, 0}, {1, -1}, {1, -0.4}, {0, 0.8}, {-1, -0.4}});
        add("hook", {{-1, -1}, {1, -1}, {1, 0.6}, {0.5, 0.6}, {0.5, -0.5}, {-1, -0.5}});
        add("key", {{-1, -0.6}, {-0.2, -0.6}, {-0.2, -1}, {0.6, -1}, {1, -0.5}, {0.6, 0.1}, {0.2, 0.1}, {0.2, 1}, {-0.1, 1}, {-0.1, 0.6}, {-0.5, 0.6}, {-0.5, 0.3}, {-1, 0.3}});
        return m;
    }();
    return shapes;
}

bool inside(const Vertices& poly, double x, double y) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a[1] > y) != (b[1] > y)) {
            const double cross_x = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if (x < cross_x) in = !in;
        }
    }
    return in;
}

}  // namespace

const Shape& shape(const std::string& name) {
    const auto& lib = library();
    auto it = lib.find(name);
    if (it == lib.end()) throw Error(ErrorCode::InvalidArgument, "unknown shape '" + name + "'");
    return it->second;
}

std::vector<std::string> shape_names() {
    std::vector<std::string> out;
    for (const auto& [name, s] : library()) out.push_back(name);
    return out;
}

BinaryImage rasterize(const Shape& s, int width, int height) {
    BinaryImage out(width, height);
    for (int y = 0; y < height; ++y) {
        const double v = (y + 0.5) / height * 2.0 - 1.0;
        for (int x = 0; x < width; ++x) {
            const double u = (x + 0.5) / width * 2.0 - 1.0;
            if (inside(s.vertices, u, v)) out.set(x, y, true);
        }
    }
    return tight(out);
}

BinaryImage tight(const BinaryImage& mask) {
    int min_x = mask.width(), min_y = mask.height(), max_x = -1, max_y = -1;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y)) continue;
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
    }
    if (max_x < 0) throw Error(ErrorCode::EmptyRegion, "mask has no foreground pixels");
    BinaryImage out(max_x - min_x + 1, max_y - min_y + 1);
    for (int y = min_y; y <= max_y; ++y) {
        for (int x = min_x; x <= max_x; ++x) out.set(x - min_x, y - min_y, mask.at(x, y));
    }
    return out;
}

BinaryImage rotate90(const BinaryImage& mask, int quarter_turns) {
    const int turns = ((quarter_turns % 4) + 4) % 4;
    if (turns == 0) return mask;
    const int w = mask.width();
    const int h = mask.height();
    BinaryImage out = turns == 2 ? BinaryImage(w, h) : BinaryImage(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            switch (turns) {
                case 1: out.set(h - 1 - y, x, true); break;  // clockwise on screen
                case 2: out.set(w - 1 - x, h - 1 - y, true); break;
                default: out.set(y, w - 1 - x, true); break;
            }
        }
    }
    return out;
}

BinaryImage reflect_horizontal(const BinaryImage& mask) {
    BinaryImage out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) out.set(mask.width() - 1 - x, y, mask.at(x, y));
    }
    return out;
}

BinaryImage dilate(const BinaryImage& mask) {
    BinaryImage out(mask.width() + 2, mask.height() + 2);
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y)) continue;
            for (int dy = 0; dy <= 2; ++dy) {
                for (int dx = 0; dx <= 2; ++dx) out.set(x + dx, y + dy, true);
            }
        }
    }
    return out;
}

BinaryImage rotate_nearest(const BinaryImage& mask, double degrees) {
    const double rad = degrees * std::numbers::pi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    const double src_cx = (mask.width() - 1) / 2.0;
    const double src_cy = (mask.height() - 1) / 2.0;
    const int side = static_cast<int>(std::ceil(std::hypot(mask.width(), mask.height()))) + 2;
    const double dst_c = (side - 1) / 2.0;
    BinaryImage out(side, side);
    for (int v = 0; v < side; ++v) {
        for (int u = 0; u < side; ++u) {
            const double dx = u - dst_c;
            const double dy = v - dst_c;
            const long sx = std::lround(src_cx + c * dx + s * dy);
            const long sy = std::lround(src_cy - s * dx + c * dy);
            if (sx < 0 || sy < 0 || sx >= mask.width() || sy >= mask.height()) continue;
            if (mask.at(static_cast<int>(sx), static_cast<int>(sy))) out.set(u, v, true);
        }
    }
    return tight(out);
}

BinaryImage place(const BinaryImage& mask, int canvas_w, int canvas_h, int dx, int dy) {
    if (dx < 0 || dy < 0 || dx + mask.width() > canvas_w || dy + mask.height() > canvas_h) {
        throw Error(ErrorCode::OutOfBounds, "mask does not fit the canvas at the requested offset");
    }
    BinaryImage out(canvas_w, canvas_h);
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) out.set(x + dx, y + dy, mask.at(x, y));
    }
    return out;
}

GrayImage render_face(const FaceStyle& style, const Rect& box, const FeatureMasks& features) {
    if (!box.fits_in(style.frame_w, style.frame_h)) {
        throw Error(ErrorCode::OutOfBounds, "face box outside the frame");
    }
    GrayImage frame(style.frame_w, style.frame_h, style.background);
    const int inset_x = static_cast<int>(std::lround(style.margin * box.w));
    const int inset_y = static_cast<int>(std::lround(style.margin * box.h));
    for (int y = box.y + inset_y; y < box.bottom() - inset_y; ++y) {
        for (int x = box.x + inset_x; x < box.right() - inset_x; ++x) frame.at(x, y) = style.skin;
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!features[i]) continue;
        const auto& mask = *features[i];
        const int cx = box.x + static_cast<int>(std::lround(kFeatureCenters[i][0] * box.w));
        const int cy = box.y + static_cast<int>(std::lround(kFeatureCenters[i][1] * box.h));
        const int x0 = cx - mask.width() / 2;
        const int y0 = cy - mask.height() / 2;
        for (int y = 0; y < mask.height(); ++y) {
            for (int x = 0; x < mask.width(); ++x) {
                const int fx = x0 + x;
                const int fy = y0 + y;
                if (mask.at(x, y) && fx >= 0 && fy >= 0 && fx < style.frame_w && fy < style.frame_h) {
                    frame.at(fx, fy) = style.feature;
                }
            }
        }
    }
    return frame;
}

FeatureMasks subject_features(const Shape& base, int box_size) {
    auto px = [box_size](double f) { return std::max(3, static_cast<int>(std::lround(f * box_size))); };
    const auto brow = rasterize(base, px(0.18), px(0.08));
    const auto eye = rasterize(base, px(0.12), px(0.10));
    const auto lip = rasterize(base, px(0.24), px(0.10));
    return {brow, brow, eye, eye, lip};
}

int default_box_size(const FaceStyle& style) {
    return static_cast<int>(std::lround(0.8 * std::min(style.frame_w, style.frame_h)));
}

Rect subject_box(const FaceStyle& style, const FaceVariant& variant) {
    const int size = default_box_size(style);
    return Rect{(style.frame_w - size) / 2 + variant.dx, (style.frame_h - size) / 2 + variant.dy, size, size};
}

GrayImage render_subject(const std::string& base_shape, const FaceVariant& variant, const FaceStyle& style) {
    const Rect box = subject_box(style, variant);
    auto features = subject_features(shape(base_shape), box.w);
    for (std::size_t i = 0; i < features.size(); ++i) {
        auto& mask = features[i];
        if (variant.lip_only && kRegionLabels[i] != RegionLabel::Lip) mask.reset();
        if (!mask) continue;
        if (variant.quarter_turns != 0) mask = rotate90(*mask, variant.quarter_turns);
        if (variant.dilated) mask = dilate(*mask);
    }
    return render_face(style, box, features);
}

}  // namespace humatch::synthetic
