#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "humatch/cascade.hpp"
#include "humatch/gallery.hpp"
#include "humatch/matching.hpp"
#include "humatch/segmentation.hpp"
#include "humatch/signature.hpp"

namespace humatch {

/// Everything the end-to-end commands need. Defaults match the CLI defaults.
struct PipelineConfig {
    std::filesystem::path cascade_path;
    double scale_factor = 1.1;
    int min_neighbors = 3;
    /// 0 means the cascade window width.
    int min_face_size = 0;
    SegmentationConfig segmentation;
    double epsilon = kDefaultLogEpsilon;
    MatchParams match;

    /// Throws InvalidArgument naming the first field out of range.
    void validate() const;

    /// Sets one field from a key=value pair as written in a config file.
    void set(const std::string& key, const std::string& value);

    /// Effective settings as ordered key=value pairs.
    std::vector<std::pair<std::string, std::string>> entries() const;
    std::string echo() const;
};

/// Reads a flat key=value file ('#' comments, blank lines allowed) on top of base.
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

struct FaceAnalysis {
    std::optional<Detection> face;
    FaceSegmentation segmentation;
    FaceSignature signature;
    double detect_seconds = 0.0;
    double total_seconds = 0.0;
};

struct Identification {
    FaceAnalysis analysis;
    std::optional<MatchResult> match;
};

class Pipeline {
public:
    /// Loads the cascade named in the config.
    explicit Pipeline(PipelineConfig config);
    Pipeline(PipelineConfig config, CascadeModel cascade);

    const PipelineConfig& config() const noexcept { return config_; }
    const CascadeModel& cascade() const noexcept { return cascade_; }

    DetectParams detect_params() const;
    std::vector<Detection> detect(const GrayImage& frame) const;

    /// Detect (unless face is given), crop, segment and build the signature.
    /// analysis.face stays empty when detection finds nothing.
    FaceAnalysis analyze(const GrayImage& frame, std::optional<Rect> face = std::nullopt) const;

    /// analyze + identify; match stays empty when no face was found.
    Identification identify(const GrayImage& frame, const Gallery& gallery) const;

private:
    PipelineConfig config_;
    CascadeModel cascade_;
};

/// Burns one-pixel box borders at intensity 255.
GrayImage annotate(const GrayImage& frame, const std::vector<Detection>& detections);

struct BenchTrial {
    std::string filename;
    std::string expected_id;
    /// match, unknown, insufficient-regions or no-face.
    std::string verdict;
    std::string matched_id;
    double distance = 0.0;
    int regions_used = 0;
    double detect_seconds = 0.0;
    double total_seconds = 0.0;
    bool error = true;
};

struct BenchReport {
    int total_trials = 0;
    int error_count = 0;
    double accuracy_percent = 0.0;
    double mean_detect_seconds = 0.0;
    double mean_recognize_seconds = 0.0;
    std::vector<BenchTrial> trials;
    std::string config_echo;
};

/// Subject id encoded in a corpus file name: "<subject>__<n>.pgm" -> "<subject>".
std::string subject_from_filename(const std::string& filename);

/// Identifies every .pgm in corpus_dir (sorted by name). A trial is an error
/// unless it is a Match on the subject named by its file. Throws
/// InvalidArgument for an empty corpus.
BenchReport run_bench(const Pipeline& pipeline, const std::filesystem::path& corpus_dir, const Gallery& gallery);

/// Aligned human-readable table.
std::string format_bench_table(const BenchReport& report);
/// "HUMATCH-BENCH v1" header, a "# config" line, then one tab-separated record per trial.
std::string format_bench_records(const BenchReport& report);

}  // namespace humatch
