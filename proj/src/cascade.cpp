#include "humatch/cascade.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "humatch/error.hpp"

namespace humatch {

namespace {

using boost::property_tree::ptree;

[[noreturn]] void fail(ErrorCode code, const std::string& path, const std::string& what) {
    throw Error(code, path + ": " + what);
}

std::vector<double> parse_numbers(const std::string& text, const std::string& path) {
    std::vector<double> out;
    const char* p = text.data();
    const char* end = p + text.size();
    while (p < end) {
        while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
        if (p == end) break;
        double v = 0.0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc{}) fail(ErrorCode::MalformedXml, path, "expected a number in '" + text + "'");
        p = next;
        out.push_back(v);
    }
    return out;
}

const ptree& child(const ptree& node, const std::string& name, const std::string& path) {
    auto it = node.find(name);
    if (it == node.not_found()) fail(ErrorCode::MalformedXml, path + "/" + name, "missing element");
    return it->second;
}

int child_int(const ptree& node, const std::string& name, const std::string& path) {
    const auto values = parse_numbers(child(node, name, path).data(), path + "/" + name);
    if (values.size() != 1 || values[0] != std::floor(values[0])) {
        fail(ErrorCode::MalformedXml, path + "/" + name, "expected one integer");
    }
    return static_cast<int>(values[0]);
}

std::string trimmed(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Children named "_" in document order; comments and other siblings skipped.
std::vector<const ptree*> items(const ptree& node) {
    std::vector<const ptree*> out;
    for (const auto& [key, value] : node) {
        if (key == "_") out.push_back(&value);
    }
    return out;
}

std::string indexed(const std::string& path, std::size_t i) { return path + "/_[" + std::to_string(i) + "]"; }

bool is_tilted(const ptree& feature) {
    if (auto attr = feature.get_optional<std::string>("<xmlattr>.tilted")) {
        return trimmed(*attr) != "0";
    }
    if (auto elem = feature.get_optional<std::string>("tilted")) {
        return trimmed(*elem) != "0";
    }
    return false;
}

CascadeModel parse_tree(const ptree& doc) {
    std::string path = "opencv_storage";
    const ptree& storage = child(doc, "opencv_storage", "");
    const ptree& cascade = child(storage, "cascade", path);
    path += "/cascade";

    if (auto st = cascade.get_optional<std::string>("stageType"); st && trimmed(*st) != "BOOST") {
        fail(ErrorCode::MalformedXml, path + "/stageType", "unsupported stage type '" + trimmed(*st) + "'");
    }
    const std::string feature_type = trimmed(child(cascade, "featureType", path).data());
    if (feature_type != "HAAR") {
        fail(ErrorCode::UnsupportedFeatureType, path + "/featureType", "feature type '" + feature_type + "'");
    }

    CascadeModel model;
    model.window_h = child_int(cascade, "height", path);
    model.window_w = child_int(cascade, "width", path);
    if (model.window_w < 1 || model.window_h < 1) {
        fail(ErrorCode::MalformedXml, path, "window size must be positive");
    }

    // Features first so weak classifiers can resolve their indices.
    const std::string features_path = path + "/features";
    std::vector<HaarFeature> features;
    const auto feature_nodes = items(child(cascade, "features", path));
    for (std::size_t i = 0; i < feature_nodes.size(); ++i) {
        const std::string fpath = indexed(features_path, i);
        if (is_tilted(*feature_nodes[i])) {
            fail(ErrorCode::UnsupportedFeatureType, fpath, "tilted features are not supported");
        }
        HaarFeature feature;
        const auto rect_nodes = items(child(*feature_nodes[i], "rects", fpath));
        for (std::size_t r = 0; r < rect_nodes.size(); ++r) {
            const std::string rpath = indexed(fpath + "/rects", r);
            const auto v = parse_numbers(rect_nodes[r]->data(), rpath);
            if (v.size() != 5) fail(ErrorCode::MalformedXml, rpath, "expected 'x y w h weight'");
            WeightedRect wr{Rect{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]),
                                 static_cast<int>(v[3])},
                            v[4]};
            if (!wr.rect.fits_in(model.window_w, model.window_h)) {
                fail(ErrorCode::MalformedXml, rpath, "rect outside the detection window");
            }
            feature.rects.push_back(wr);
        }
        if (feature.rects.size() < 2 || feature.rects.size() > 3) {
            fail(ErrorCode::MalformedXml, fpath + "/rects", "expected 2 or 3 rects");
        }
        features.push_back(std::move(feature));
    }

    const std::string stages_path = path + "/stages";
    const auto stage_nodes = items(child(cascade, "stages", path));
    if (stage_nodes.empty()) fail(ErrorCode::MalformedXml, stages_path, "cascade has no stages");

    for (std::size_t s = 0; s < stage_nodes.size(); ++s) {
        const std::string spath = indexed(stages_path, s);
        const ptree& stage_node = *stage_nodes[s];
        CascadeStage stage;
        const auto thr = parse_numbers(child(stage_node, "stageThreshold", spath).data(), spath + "/stageThreshold");
        if (thr.size() != 1) fail(ErrorCode::MalformedXml, spath + "/stageThreshold", "expected one number");
        stage.stage_threshold = thr[0];

        const auto weak_nodes = items(child(stage_node, "weakClassifiers", spath));
        if (weak_nodes.empty()) fail(ErrorCode::MalformedXml, spath + "/weakClassifiers", "stage has no classifiers");
        for (std::size_t w = 0; w < weak_nodes.size(); ++w) {
            const std::string wpath = indexed(spath + "/weakClassifiers", w);
            const auto nodes = parse_numbers(child(*weak_nodes[w], "internalNodes", wpath).data(),
                                             wpath + "/internalNodes");
            const auto leaves = parse_numbers(child(*weak_nodes[w], "leafValues", wpath).data(),
                                              wpath + "/leafValues");
            if (nodes.size() != 4 || leaves.size() != 2 || nodes[0] != 0.0 || nodes[1] != -1.0) {
                fail(ErrorCode::NonStumpTree, wpath, "only single-split trees are supported");
            }
            const double idx = nodes[2];
            if (idx < 0 || idx != std::floor(idx) || idx >= static_cast<double>(features.size())) {
                fail(ErrorCode::MalformedXml, wpath + "/internalNodes", "feature index out of range");
            }
            stage.weak_classifiers.push_back(
                WeakClassifier{features[static_cast<std::size_t>(idx)], nodes[3], leaves[0], leaves[1]});
        }
        model.stages.push_back(std::move(stage));
    }
    return model;
}

// Feature rects resolved for one window size.
struct ScaledRect {
    int x, y, w, h;
    double weight;
};

struct ScaledWeak {
    std::array<ScaledRect, 3> rects;
    int rect_count;
    double threshold;
    double left_val;
    double right_val;
};

struct ScaledStage {
    std::vector<ScaledWeak> weak;
    double threshold;
};

struct ScaledCascade {
    int window_w;
    int window_h;
    double inv_area;
    std::vector<ScaledStage> stages;
};

int round_int(double v) { return static_cast<int>(std::lround(v)); }

ScaledCascade scale_cascade(const CascadeModel& model, int window_w, int window_h) {
    const double scale = static_cast<double>(window_w) / model.window_w;
    ScaledCascade out{window_w, window_h, 1.0 / (static_cast<double>(window_w) * window_h), {}};
    out.stages.reserve(model.stages.size());
    for (const auto& stage : model.stages) {
        ScaledStage ss{{}, stage.stage_threshold};
        ss.weak.reserve(stage.weak_classifiers.size());
        for (const auto& wc : stage.weak_classifiers) {
            ScaledWeak sw{};
            sw.rect_count = static_cast<int>(wc.feature.rects.size());
            for (int i = 0; i < sw.rect_count; ++i) {
                const auto& r = wc.feature.rects[static_cast<std::size_t>(i)];
                int x = std::clamp(round_int(r.rect.x * scale), 0, window_w - 1);
                int y = std::clamp(round_int(r.rect.y * scale), 0, window_h - 1);
                int w = std::clamp(round_int(r.rect.w * scale), 1, window_w - x);
                int h = std::clamp(round_int(r.rect.h * scale), 1, window_h - y);
                sw.rects[static_cast<std::size_t>(i)] = ScaledRect{x, y, w, h, r.weight};
            }
            sw.threshold = wc.threshold;
            sw.left_val = wc.left_val;
            sw.right_val = wc.right_val;
            ss.weak.push_back(sw);
        }
        out.stages.push_back(std::move(ss));
    }
    return out;
}

bool eval_scaled(const ScaledCascade& cascade, const IntegralImage& ii, int x0, int y0) {
    const double stddev = ii.window_mean_stddev_unchecked(x0, y0, cascade.window_w, cascade.window_h).stddev;
    for (const auto& stage : cascade.stages) {
        double sum = 0.0;
        for (const auto& wc : stage.weak) {
            double value = 0.0;
            for (int i = 0; i < wc.rect_count; ++i) {
                const auto& r = wc.rects[static_cast<std::size_t>(i)];
                value += r.weight * static_cast<double>(ii.rect_sum_unchecked(x0 + r.x, y0 + r.y, r.w, r.h));
            }
            value *= cascade.inv_area;
            sum += value < wc.threshold * stddev ? wc.left_val : wc.right_val;
        }
        if (sum < stage.threshold) return false;
    }
    return true;
}

int expected_height(const CascadeModel& model, int window_w) {
    return round_int(static_cast<double>(model.window_h) * window_w / model.window_w);
}

}  // namespace

std::size_t CascadeModel::weak_count() const noexcept {
    return std::accumulate(stages.begin(), stages.end(), std::size_t{0},
                           [](std::size_t n, const CascadeStage& s) { return n + s.weak_classifiers.size(); });
}

CascadeModel parse_cascade_xml(std::string_view xml) {
    ptree doc;
    std::istringstream in{std::string(xml)};
    try {
        boost::property_tree::read_xml(in, doc, boost::property_tree::xml_parser::trim_whitespace);
    } catch (const boost::property_tree::xml_parser_error& e) {
        throw Error(ErrorCode::MalformedXml, "line " + std::to_string(e.line()) + ": " + e.message());
    }
    return parse_tree(doc);
}

CascadeModel parse_cascade(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open cascade " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_cascade_xml(text.str());
}

bool eval_window(const CascadeModel& model, const IntegralImage& ii, const Rect& window) {
    if (!window.fits_in(ii.width(), ii.height())) {
        throw Error(ErrorCode::OutOfBounds, "window outside image");
    }
    if (window.h != expected_height(model, window.w)) {
        throw Error(ErrorCode::InvalidArgument, "window aspect does not match the model window");
    }
    const auto scaled = scale_cascade(model, window.w, window.h);
    return eval_scaled(scaled, ii, window.x, window.y);
}

std::vector<ScanLevel> scan_levels(const CascadeModel& model, int image_w, int image_h, const DetectParams& params) {
    if (!(params.scale_factor > 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "scale_factor must exceed 1");
    }
    const int min_size = params.min_size == 0 ? model.window_w : params.min_size;
    if (min_size < model.window_w) {
        throw Error(ErrorCode::InvalidArgument, "min_size is smaller than the model window");
    }
    std::vector<ScanLevel> levels;
    int previous_w = 0;
    for (int k = 0;; ++k) {
        const int w = round_int(model.window_w * std::pow(params.scale_factor, k));
        if (w > image_w) break;
        const int h = expected_height(model, w);
        if (h > image_h) break;
        if (w == previous_w || w < min_size) continue;
        previous_w = w;
        const double effective = static_cast<double>(w) / model.window_w;
        levels.push_back(ScanLevel{w, h, std::max(1, round_int(2.0 * effective))});
    }
    return levels;
}

std::vector<Rect> detect_raw(const CascadeModel& model, const GrayImage& image, const DetectParams& params) {
    const auto levels = scan_levels(model, image.width(), image.height(), params);
    std::vector<Rect> hits;
    if (levels.empty()) return hits;
    const IntegralImage ii(image);
    for (const auto& level : levels) {
        const auto cascade = scale_cascade(model, level.window_w, level.window_h);
        for (int y = 0; y + level.window_h <= image.height(); y += level.stride) {
            for (int x = 0; x + level.window_w <= image.width(); x += level.stride) {
                if (eval_scaled(cascade, ii, x, y)) hits.push_back(Rect{x, y, level.window_w, level.window_h});
            }
        }
    }
    return hits;
}

bool similar_rects(const Rect& a, const Rect& b) noexcept {
    const double min_w = std::min(a.w, b.w);
    const double tol = 0.2 * min_w;
    return std::abs(a.w - b.w) <= tol && std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

std::vector<Detection> group_detections(const std::vector<Rect>& raw, int min_neighbors) {
    const std::size_t n = raw.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (similar_rects(raw[i], raw[j])) {
                const auto a = find(i);
                const auto b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }

    struct Accum {
        long long x = 0, y = 0, w = 0, h = 0;
        int count = 0;
    };
    std::vector<Accum> classes(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& c = classes[find(i)];
        c.x += raw[i].x;
        c.y += raw[i].y;
        c.w += raw[i].w;
        c.h += raw[i].h;
        ++c.count;
    }

    const int threshold = std::max(1, min_neighbors);
    auto mean = [](long long total, int count) {
        return static_cast<int>(std::lround(static_cast<double>(total) / count));
    };
    std::vector<Detection> out;
    for (const auto& c : classes) {
        if (c.count == 0 || c.count < threshold) continue;
        out.push_back(Detection{Rect{mean(c.x, c.count), mean(c.y, c.count), mean(c.w, c.count), mean(c.h, c.count)},
                                c.count});
    }
    std::sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
        if (a.neighbor_count != b.neighbor_count) return a.neighbor_count > b.neighbor_count;
        if (a.rect.y != b.rect.y) return a.rect.y < b.rect.y;
        if (a.rect.x != b.rect.x) return a.rect.x < b.rect.x;
        return a.rect.w < b.rect.w;
    });
    return out;
}

std::vector<Detection> detect_multiscale(const CascadeModel& model, const GrayImage& image, const DetectParams& params) {
    return group_detections(detect_raw(model, image, params), params.min_neighbors);
}

}  // namespace humatch
