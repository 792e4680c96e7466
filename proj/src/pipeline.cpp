#include "humatch/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "humatch/error.hpp"

namespace humatch {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Shortest text that parses back to the same double.
std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
        throw Error(ErrorCode::InvalidArgument, "config '" + key + "': expected a number, got '" + value + "'");
    }
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorCode::InvalidArgument, "config '" + key + "': expected an integer, got '" + value + "'");
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void PipelineConfig::validate() const {
    if (!(scale_factor > 1.0) || !std::isfinite(scale_factor)) {
        throw Error(ErrorCode::InvalidArgument, "scale_factor must exceed 1");
    }
    if (min_neighbors < 0) throw Error(ErrorCode::InvalidArgument, "min_neighbors must be non-negative");
    if (min_face_size < 0) throw Error(ErrorCode::InvalidArgument, "min_face_size must be non-negative");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    segmentation.validate();
    match.validate();
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
    auto& seg = segmentation;
    if (key == "cascade") cascade_path = value;
    else if (key == "scale_factor") scale_factor = parse_double(key, value);
    else if (key == "min_neighbors") min_neighbors = parse_int(key, value);
    else if (key == "min_face_size") min_face_size = parse_int(key, value);
    else if (key == "min_area_fraction") seg.min_area_fraction = parse_double(key, value);
    else if (key == "max_area_fraction") seg.max_area_fraction = parse_double(key, value);
    else if (key == "eyebrow_band_lo") seg.eyebrow.lo = parse_double(key, value);
    else if (key == "eyebrow_band_hi") seg.eyebrow.hi = parse_double(key, value);
    else if (key == "eye_band_lo") seg.eye.lo = parse_double(key, value);
    else if (key == "eye_band_hi") seg.eye.hi = parse_double(key, value);
    else if (key == "lip_band_lo") seg.lip.lo = parse_double(key, value);
    else if (key == "lip_band_hi") seg.lip.hi = parse_double(key, value);
    else if (key == "epsilon") epsilon = parse_double(key, value);
    else if (key == "k_min") match.k_min = parse_int(key, value);
    else if (key == "tau") match.tau = parse_double(key, value);
    else throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::entries() const {
    const auto& seg = segmentation;
    return {
        {"cascade", cascade_path.string()},
        {"scale_factor", format_double(scale_factor)},
        {"min_neighbors", std::to_string(min_neighbors)},
        {"min_face_size", std::to_string(min_face_size)},
        {"min_area_fraction", format_double(seg.min_area_fraction)},
        {"max_area_fraction", format_double(seg.max_area_fraction)},
        {"eyebrow_band_lo", format_double(seg.eyebrow.lo)},
        {"eyebrow_band_hi", format_double(seg.eyebrow.hi)},
        {"eye_band_lo", format_double(seg.eye.lo)},
        {"eye_band_hi", format_double(seg.eye.hi)},
        {"lip_band_lo", format_double(seg.lip.lo)},
        {"lip_band_hi", format_double(seg.lip.hi)},
        {"epsilon", format_double(epsilon)},
        {"k_min", std::to_string(match.k_min)},
        {"tau", format_double(match.tau)},
    };
}

std::string PipelineConfig::echo() const {
    std::string out;
    for (const auto& [k, v] : entries()) {
        if (!out.empty()) out += ' ';
        out += k + "=" + v;
    }
    return out;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument,
                        path.string() + ":" + std::to_string(line_no) + ": expected key=value");
        }
        base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
    config_.validate();
    if (config_.cascade_path.empty()) throw Error(ErrorCode::InvalidArgument, "no cascade file configured");
    cascade_ = parse_cascade(config_.cascade_path);
}

Pipeline::Pipeline(PipelineConfig config, CascadeModel cascade)
    : config_(std::move(config)), cascade_(std::move(cascade)) {
    config_.validate();
}

DetectParams Pipeline::detect_params() const {
    return DetectParams{config_.scale_factor, config_.min_neighbors, config_.min_face_size};
}

std::vector<Detection> Pipeline::detect(const GrayImage& frame) const {
    return detect_multiscale(cascade_, frame, detect_params());
}

FaceAnalysis Pipeline::analyze(const GrayImage& frame, std::optional<Rect> face) const {
    const auto start = Clock::now();
    FaceAnalysis out;
    if (face) {
        out.face = Detection{*face, 1};
    } else {
        const auto detections = detect(frame);
        if (!detections.empty()) out.face = detections.front();
    }
    out.detect_seconds = seconds_since(start);
    if (out.face) {
        const auto roi = crop(frame, out.face->rect);
        out.segmentation = segment_face(roi, out.face->rect, config_.segmentation);
        out.signature = build_signature(out.segmentation.regions, config_.epsilon);
    }
    out.total_seconds = seconds_since(start);
    return out;
}

Identification Pipeline::identify(const GrayImage& frame, const Gallery& gallery) const {
    const auto start = Clock::now();
    Identification out;
    out.analysis = analyze(frame);
    if (out.analysis.face) out.match = humatch::identify(out.analysis.signature, gallery, config_.match);
    out.analysis.total_seconds = seconds_since(start);
    return out;
}

GrayImage annotate(const GrayImage& frame, const std::vector<Detection>& detections) {
    GrayImage out = frame;
    for (const auto& d : detections) {
        const Rect& r = d.rect;
        for (int x = r.x; x < r.right(); ++x) {
            if (x < 0 || x >= out.width()) continue;
            if (r.y >= 0 && r.y < out.height()) out.at(x, r.y) = 255;
            if (r.bottom() - 1 >= 0 && r.bottom() - 1 < out.height()) out.at(x, r.bottom() - 1) = 255;
        }
        for (int y = r.y; y < r.bottom(); ++y) {
            if (y < 0 || y >= out.height()) continue;
            if (r.x >= 0 && r.x < out.width()) out.at(r.x, y) = 255;
            if (r.right() - 1 >= 0 && r.right() - 1 < out.width()) out.at(r.right() - 1, y) = 255;
        }
    }
    return out;
}

std::string subject_from_filename(const std::string& filename) {
    const std::string stem = std::filesystem::path(filename).stem().string();
    const auto sep = stem.rfind("__");
    return sep == std::string::npos ? stem : stem.substr(0, sep);
}

BenchReport run_bench(const Pipeline& pipeline, const std::filesystem::path& corpus_dir, const Gallery& gallery) {
    if (!std::filesystem::is_directory(corpus_dir)) {
        throw Error(ErrorCode::Io, "corpus directory " + corpus_dir.string() + " not found");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
    }
    if (files.empty()) throw Error(ErrorCode::InvalidArgument, "corpus " + corpus_dir.string() + " has no .pgm images");
    std::sort(files.begin(), files.end());

    BenchReport report;
    report.config_echo = pipeline.config().echo();
    double detect_total = 0.0;
    double recognize_total = 0.0;
    for (const auto& file : files) {
        BenchTrial trial;
        trial.filename = file.filename().string();
        trial.expected_id = subject_from_filename(trial.filename);
        const auto result = pipeline.identify(load_pgm(file), gallery);
        trial.detect_seconds = result.analysis.detect_seconds;
        trial.total_seconds = result.analysis.total_seconds;
        if (!result.match) {
            trial.verdict = "no-face";
        } else {
            trial.verdict = std::string(to_string(result.match->verdict));
            trial.matched_id = result.match->subject_id.value_or("");
            trial.distance = result.match->distance;
            trial.regions_used = result.match->regions_used;
            trial.error = !(result.match->verdict == Verdict::Match && trial.matched_id == trial.expected_id);
        }
        detect_total += trial.detect_seconds;
        recognize_total += trial.total_seconds;
        report.error_count += trial.error ? 1 : 0;
        report.trials.push_back(std::move(trial));
    }
    report.total_trials = static_cast<int>(report.trials.size());
    report.accuracy_percent = 100.0 * (report.total_trials - report.error_count) / report.total_trials;
    report.mean_detect_seconds = detect_total / report.total_trials;
    report.mean_recognize_seconds = recognize_total / report.total_trials;
    return report;
}

std::string format_bench_table(const BenchReport& r) {
    std::ostringstream out;
    char line[512];
    std::snprintf(line, sizeof line, "%-32s %-16s %-21s %-16s %10s %7s %9s %9s\n", "file", "expected", "verdict",
                  "matched", "distance", "regions", "detect_s", "total_s");
    out << line;
    for (const auto& t : r.trials) {
        std::snprintf(line, sizeof line, "%-32s %-16s %-21s %-16s %10.6f %7d %9.4f %9.4f%s\n", t.filename.c_str(),
                      t.expected_id.c_str(), t.verdict.c_str(), t.matched_id.empty() ? "-" : t.matched_id.c_str(),
                      t.distance, t.regions_used, t.detect_seconds, t.total_seconds, t.error ? "  ERROR" : "");
        out << line;
    }
    out << '\n';
    std::snprintf(line, sizeof line, "%-12s %-8s %-14s %-16s %-18s\n", "experiments", "errors", "accuracy_%",
                  "mean_detect_s", "mean_recognize_s");
    out << line;
    std::snprintf(line, sizeof line, "%-12d %-8d %-14.2f %-16.4f %-18.4f\n", r.total_trials, r.error_count,
                  r.accuracy_percent, r.mean_detect_seconds, r.mean_recognize_seconds);
    out << line;
    out << "config: " << r.config_echo << '\n';
    return out.str();
}

std::string format_bench_records(const BenchReport& r) {
    std::ostringstream out;
    out << "HUMATCH-BENCH v1\n";
    out << "# config " << r.config_echo << '\n';
    for (const auto& t : r.trials) {
        out << t.filename << '\t' << t.expected_id << '\t' << t.verdict << '\t'
            << (t.matched_id.empty() ? "-" : t.matched_id) << '\t' << format_double(t.distance) << '\t'
            << t.regions_used << '\t' << format_double(t.detect_seconds) << '\t' << format_double(t.total_seconds)
            << '\n';
    }
    return out.str();
}

}  // namespace humatch
