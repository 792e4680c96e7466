// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "humatch/cascade.hpp"
#include "humatch/gallery.hpp"
#include "humatch/integral.hpp"
#include "humatch/matching.hpp"
#include "humatch/moments.hpp"
#include "humatch/pipeline.hpp"
#include "humatch/segmentation.hpp"
#include "humatch/signature.hpp"
#include "humatch/synthetic.hpp"
#include "oracles.hpp"

#ifndef HUMATCH_DATA_DIR
#error "HUMATCH_DATA_DIR must point at the data directory"
#endif

namespace {

using namespace humatch;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

bool hu_equal(const HuVector& a, const HuVector& b, double rel) {
    for (std::size_t k = 0; k < 7; ++k) {
        if (!oracle::nearly_equal(a[k], b[k], rel)) return false;
    }
    return true;
}

Outcome moments_match_oracle() {
    oracle::Rng rng(1001);
    const auto start = Clock::now();
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto mask = oracle::random_nonempty_mask(rng, 32, 32);
        const auto rm = raw_moments(mask);
        const auto cm = central_moments(rm);
        for (const auto& [p, q] : kMomentOrders) {
            if (!oracle::nearly_equal(rm.value(p, q), oracle::raw_moment(mask, p, q), 1e-9)) ++bad;
            // Central sums cancel toward zero for symmetric masks, so the
            // tolerance is taken relative to the sum of magnitudes.
            const double scale = std::max(1.0, oracle::central_moment_abs(mask, p, q));
            if (std::abs(cm.mu(p, q) - oracle::central_moment(mask, p, q)) > 1e-9 * scale) ++bad;
        }
    }
    const double elapsed = seconds_since(start);
    return {bad == 0 && elapsed < 5.0, fmt("1000 masks, %d mismatches, %.3f s", bad, elapsed)};
}

Outcome hu_translation_invariant() {
    oracle::Rng rng(1002);
    std::uniform_int_distribution<int> offset(0, 40);
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
        const auto mask = oracle::random_nonempty_mask(rng, 32, 32);
        const int dx = offset(rng), dy = offset(rng);
        const auto moved = synthetic::place(mask, mask.width() + dx + offset(rng), mask.height() + dy + offset(rng), dx, dy);
        if (!hu_equal(hu_moments(mask), hu_moments(moved), 1e-9)) ++bad;
    }
    return {bad == 0, fmt("200 masks, %d changed", bad)};
}

Outcome hu_rotation_reflection() {
    oracle::Rng rng(1003);
    int bad_rot = 0, bad_ref = 0;
    for (int i = 0; i < 200; ++i) {
        const auto mask = oracle::random_nonempty_mask(rng, 32, 32);
        const auto hu = hu_moments(mask);
        for (int turns = 1; turns <= 3; ++turns) {
            if (!hu_equal(hu, hu_moments(synthetic::rotate90(mask, turns)), 1e-9)) ++bad_rot;
        }
        auto expected = hu;
        expected[6] = -expected[6];
        if (!hu_equal(expected, hu_moments(synthetic::reflect_horizontal(mask)), 1e-9)) ++bad_ref;
    }
    return {bad_rot == 0 && bad_ref == 0,
            fmt("200 masks, %d rotation and %d reflection mismatches", bad_rot, bad_ref)};
}

// Star-shaped blob r(t) = 1 + sum a_k cos(k t + phase_k), k = 2..4, scaled so
// the farthest vertex sits on the unit circle (64 px across once rasterized).
synthetic::Shape random_blob(oracle::Rng& rng) {
    constexpr double two_pi = 6.283185307179586;
    std::uniform_real_distribution<double> amp(0.05, 0.25), phase(0.0, two_pi);
    std::array<double, 5> a{}, ph{};
    for (int k = 2; k <= 4; ++k) {
        a[static_cast<std::size_t>(k)] = amp(rng);
        ph[static_cast<std::size_t>(k)] = phase(rng);
    }
    std::vector<double> radius;
    for (int j = 0; j < 96; ++j) {
        const double t = two_pi * j / 96;
        double r = 1.0;
        for (int k = 2; k <= 4; ++k) r += a[static_cast<std::size_t>(k)] * std::cos(k * t + ph[static_cast<std::size_t>(k)]);
        radius.push_back(r);
    }
    const double rmax = *std::max_element(radius.begin(), radius.end());
    synthetic::Shape blob{"blob", {}};
    for (int j = 0; j < 96; ++j) {
        const double t = two_pi * j / 96;
        const double r = radius[static_cast<std::size_t>(j)] / rmax;
        blob.vertices.push_back({r * std::cos(t), r * std::sin(t)});
    }
    return blob;
}

Outcome hu_resampled_rotation() {
    oracle::Rng rng(1004);
    double worst = 0.0;
    std::string worst_at = "-";
    for (int i = 0; i < 50; ++i) {
        const auto mask = synthetic::rasterize(random_blob(rng), 64, 64);
        const auto base = log_scale(hu_moments(mask));
        for (const double deg : {15.0, 30.0, 45.0}) {
            const auto turned = log_scale(hu_moments(synthetic::rotate_nearest(mask, deg)));
            for (std::size_t k = 0; k < 4; ++k) {
                const double d = std::abs(turned[k] - base[k]);
                if (d > worst) {
                    worst = d;
                    worst_at = fmt("blob %d, %.0f deg, Hu[%zu]", i, deg, k);
                }
            }
        }
    }
    return {worst <= 0.1, fmt("50 blobs, max log change %.4f (%s)", worst, worst_at.c_str())};
}

Outcome otsu_matches_brute_force() {
    oracle::Rng rng(1005);
    std::vector<Histogram256> hists;
    for (int i = 0; i < 500; ++i) hists.push_back(oracle::random_histogram(rng));
    const auto start = Clock::now();
    std::vector<int> got;
    for (const auto& h : hists) got.push_back(otsu_threshold(h));
    const double elapsed = seconds_since(start);
    int bad = 0;
    for (std::size_t i = 0; i < hists.size(); ++i) bad += got[i] != oracle::brute_otsu(hists[i]) ? 1 : 0;
    return {bad == 0 && elapsed < 2.0, fmt("500 histograms, %d mismatches, %.3f s", bad, elapsed)};
}

Outcome rect_sum_matches_brute_force() {
    oracle::Rng rng(1006);
    int bad = 0;
    for (int img = 0; img < 50; ++img) {
        const auto image = oracle::random_gray(rng, 64, 64);
        const IntegralImage ii(image);
        for (int i = 0; i < 20; ++i) {
            const auto r = oracle::random_rect_in(rng, 64, 64);
            bad += ii.rect_sum(r) != oracle::pixel_sum(image, r) ? 1 : 0;
        }
    }
    return {bad == 0, fmt("1000 rects, %d mismatches", bad)};
}

// Random dark-over-bright bars of assorted sizes on a noisy background.
GrayImage detection_scene(oracle::Rng& rng) {
    std::uniform_int_distribution<int> dim(40, 72);
    GrayImage img(dim(rng), dim(rng));
    std::uniform_int_distribution<int> noise(90, 160);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) img.at(x, y) = static_cast<std::uint8_t>(noise(rng));
    }
    const int patches = std::uniform_int_distribution<int>(2, 6)(rng);
    for (int p = 0; p < patches; ++p) {
        const int side = std::uniform_int_distribution<int>(4, 20)(rng);
        const int x0 = std::uniform_int_distribution<int>(0, img.width() - side)(rng);
        const int y0 = std::uniform_int_distribution<int>(0, img.height() - side)(rng);
        for (int y = y0; y < y0 + side; ++y) {
            for (int x = x0; x < x0 + side; ++x) img.at(x, y) = y < y0 + side / 2 ? 20 : 235;
        }
    }
    return img;
}

Outcome detection_matches_sweep() {
    const auto model = parse_cascade_xml(oracle::handbuilt_cascade_xml());
    oracle::Rng rng(1007);
    int bad = 0;
    std::size_t hits = 0;
    for (int i = 0; i < 20; ++i) {
        const auto img = detection_scene(rng);
        DetectParams params;
        params.min_neighbors = 0;
        const auto expected = oracle::sweep(model, img, params.scale_factor);
        hits += expected.size();
        const auto raw = detect_raw(model, img, params);
        const auto key = [](const Rect& r) { return std::tuple(r.x, r.y, r.w, r.h); };
        std::set<std::tuple<int, int, int, int>> a, b;
        for (const auto& r : raw) a.insert(key(r));
        for (const auto& r : expected) b.insert(key(r));
        if (a != b || raw.size() != expected.size()) ++bad;
        const auto grouped = detect_multiscale(model, img, params);
        if (grouped != oracle::group(expected, 0)) ++bad;
        std::size_t members = 0;
        for (const auto& d : grouped) members += static_cast<std::size_t>(d.neighbor_count);
        if (members != expected.size()) ++bad;
    }
    return {bad == 0 && hits > 0, fmt("20 images, %zu raw hits, %d mismatches", hits, bad)};
}

Outcome end_to_end_recognition() {
    PipelineConfig cfg;
    cfg.cascade_path = std::string(HUMATCH_DATA_DIR) + "/synthetic_face_cascade.xml";
    const Pipeline pipeline(cfg);
    const std::vector<std::string> enrolled = {"kite", "trapezoid", "triangle", "flag", "boot"};
    const std::vector<std::string> strangers = {"arrow", "chevron", "hook", "l_shape", "t_shape"};
    const std::vector<synthetic::FaceVariant> variants = {
        {12, -9, 0, false, false}, {-20, 16, 0, false, false}, {0, 0, 1, false, false},
        {8, 8, 1, false, false},   {0, 0, 0, true, false},
    };

    Gallery gallery = new_gallery();
    for (const auto& s : enrolled) gallery = enroll(gallery, s, pipeline.analyze(synthetic::render_subject(s)).signature);

    const auto verdict_of = [&](const GrayImage& frame) {
        const auto r = pipeline.identify(frame, gallery);
        return r.match ? std::optional<MatchResult>(*r.match) : std::nullopt;
    };

    int correct = 0, probes = 0;
    for (const auto& s : enrolled) {
        for (const auto& v : variants) {
            ++probes;
            const auto m = verdict_of(synthetic::render_subject(s, v));
            correct += m && m->verdict == Verdict::Match && m->subject_id == s ? 1 : 0;
        }
    }
    int unknown = 0;
    for (const auto& s : strangers) {
        const auto m = verdict_of(synthetic::render_subject(s));
        unknown += m && m->verdict == Verdict::Unknown ? 1 : 0;
    }
    int insufficient = 0;
    for (const auto& s : enrolled) {
        const auto m = verdict_of(synthetic::render_subject(s, {0, 0, 0, false, true}));
        insufficient += m && m->verdict == Verdict::InsufficientRegions ? 1 : 0;
    }
    return {correct == probes && unknown == 5 && insufficient == 5,
            fmt("%d/%d matched, %d/5 unknown, %d/5 insufficient", correct, probes, unknown, insufficient)};
}

Outcome desk_timing() {
    PipelineConfig cfg;
    cfg.cascade_path = std::string(HUMATCH_DATA_DIR) + "/haarcascade_frontalface_default.xml";
    const Pipeline pipeline(cfg);
    synthetic::FaceStyle style;
    style.frame_w = 640;
    style.frame_h = 480;
    const auto frame = synthetic::render_subject("kite", {}, style);
    Gallery gallery = new_gallery();
    gallery = enroll(gallery, "kite", build_signature(segment_face(crop(frame, synthetic::subject_box(style, {})),
                                                                   synthetic::subject_box(style, {}))
                                                          .regions));
    const auto start = Clock::now();
    const auto r = pipeline.identify(frame, gallery);
    const double total = seconds_since(start);
    const double detect = r.analysis.detect_seconds;
    // Timing depends on the host, so it is reported rather than enforced.
    const bool within = total < 1.5 && detect < 1.0;
    return {true, fmt("640x480, %zu weak classifiers, detect %.3f s, identify %.3f s (%s budget)",
                      pipeline.cascade().weak_count(), detect, total, within ? "within" : "OVER")};
}

Outcome gallery_round_trip() {
    oracle::Rng rng(1010);
    const auto path = std::filesystem::temp_directory_path() / "humatch_acceptance_gallery.txt";
    int bad = 0;
    for (int i = 0; i < 100; ++i) {
        const auto g = oracle::random_gallery(rng);
        save_gallery(g, path);
        bad += load_gallery(path) == g ? 0 : 1;
    }

    constexpr double table[5][7] = {
        {0.309422, 0.068286, 0.001145, 0.000133, -3.00773, -2.0013, 4.905664},
        {0.27892, 0.049427, 0.00178, 0.000161, -6.61529, -3.10648, -5.41296},
        {0.46138, 0.181526, 0.005953, 0.001035, -5.46412, -7.25124, 2.363238},
        {0.396682, 0.124126, 0.005539, 0.00072, -4.47711, -0.00014, 1.379213},
        {0.414793, 0.138669, 0.005166, 0.00088, -7.74619, -7.22877, -1.82417},
    };
    FaceSignature sig;
    for (std::size_t r = 0; r < 5; ++r) {
        HuVector hu{};
        std::copy(std::begin(table[r]), std::end(table[r]), hu.begin());
        sig.regions[kRegionLabels[r]] = make_region_feature(kRegionLabels[r], hu);
    }
    const auto g = enroll(new_gallery(), "paper-fig2", sig);
    save_gallery(g, path);
    const auto back = load_gallery(path);
    int verbatim = 0;
    for (std::size_t r = 0; r < 5; ++r) {
        for (std::size_t k = 0; k < 7; ++k) {
            verbatim += back.subjects.at("paper-fig2").regions.at(kRegionLabels[r]).hu[k] == table[r][k] ? 1 : 0;
        }
    }
    std::filesystem::remove(path);
    return {bad == 0 && verbatim == 35 && back == g,
            fmt("100 galleries, %d mismatches; reference subject %d/35 values verbatim", bad, verbatim)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"raw and central moments match the naive oracle", moments_match_oracle},
        {"Hu values are translation invariant", hu_translation_invariant},
        {"Hu values under quarter turns and reflection", hu_rotation_reflection},
        {"log Hu[0..3] stable under resampled rotation", hu_resampled_rotation},
        {"Otsu threshold matches brute force", otsu_matches_brute_force},
        {"rect_sum matches brute force", rect_sum_matches_brute_force},
        {"detection matches the exhaustive window sweep", detection_matches_sweep},
        {"end-to-end synthetic recognition", end_to_end_recognition},
        {"desk-scale timing (reported)", desk_timing},
        {"gallery persistence round trip", gallery_round_trip},
    };
    int failed = 0;
    int n = 0;
    for (const auto& [name, run] : criteria) {
        ++n;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed;
}
