// humatch: detect, segment, enroll, identify and bench from the command line.
//
// Exit codes: 0 success/match, 1 I/O or config error, 2 no face, 3 empty
// signature, 4 duplicate subject, 5 insufficient regions, 6 unknown subject.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "humatch/error.hpp"
#include "humatch/image.hpp"
#include "humatch/pipeline.hpp"

namespace {

using namespace humatch;

enum Exit : int {
    kOk = 0,
    kFailure = 1,
    kNoFace = 2,
    kEmptySignature = 3,
    kDuplicate = 4,
    kInsufficient = 5,
    kUnknown = 6,
};

struct CommonOptions {
    std::string config_file;
    std::string cascade;
    std::optional<int> k_min;
    std::optional<double> tau;
    std::optional<double> scale_factor;
    std::optional<int> min_neighbors;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "key=value config file");
        cmd->add_option("--cascade", cascade, "cascade XML file");
        cmd->add_option("--k-min", k_min, "minimum shared regions (default 3)");
        cmd->add_option("--tau", tau, "match acceptance distance (default 0.35)");
        cmd->add_option("--scale-factor", scale_factor, "window growth per scan level (default 1.1)");
        cmd->add_option("--min-neighbors", min_neighbors, "raw hits required per detection (default 3)");
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg;
        if (!config_file.empty()) cfg = load_config(config_file, cfg);
        if (!cascade.empty()) cfg.cascade_path = cascade;
        if (k_min) cfg.match.k_min = *k_min;
        if (tau) cfg.match.tau = *tau;
        if (scale_factor) cfg.scale_factor = *scale_factor;
        if (min_neighbors) cfg.min_neighbors = *min_neighbors;
        cfg.validate();
        return cfg;
    }
};

std::string join(const HuLog& values) {
    std::string out;
    char buf[32];
    for (const double v : values) {
        std::snprintf(buf, sizeof buf, "%.9g", v);
        if (!out.empty()) out += ' ';
        out += buf;
    }
    return out;
}

Rect parse_rect(const std::string& text) {
    Rect r;
    char sep1 = 0, sep2 = 0, sep3 = 0;
    std::istringstream in(text);
    if (!(in >> r.x >> sep1 >> r.y >> sep2 >> r.w >> sep3 >> r.h) || sep1 != ',' || sep2 != ',' || sep3 != ',' ||
        !in.eof()) {
        throw Error(ErrorCode::InvalidArgument, "face rect must be x,y,w,h");
    }
    return r;
}

int cmd_detect(const CommonOptions& common, const std::string& image_path, const std::string& annotate_path) {
    const Pipeline pipeline(common.resolve());
    const auto frame = load_pgm(image_path);
    const auto detections = pipeline.detect(frame);
    for (const auto& d : detections) {
        std::cout << d.rect.x << ' ' << d.rect.y << ' ' << d.rect.w << ' ' << d.rect.h << ' ' << d.neighbor_count
                  << '\n';
    }
    if (!annotate_path.empty()) save_pgm(annotate(frame, detections), annotate_path);
    return detections.empty() ? kNoFace : kOk;
}

int cmd_segment(const CommonOptions& common, const std::string& image_path, const std::string& face_text,
                const std::string& mask_path) {
    const auto frame = load_pgm(image_path);
    std::optional<Rect> face;
    if (!face_text.empty()) {
        face = parse_rect(face_text);
        if (!face->fits_in(frame.width(), frame.height())) {
            throw Error(ErrorCode::OutOfBounds, "face rect outside the image");
        }
    }
    auto cfg = common.resolve();
    // An explicit face box needs no detector.
    const auto analysis = face ? Pipeline(cfg, CascadeModel{}).analyze(frame, face) : Pipeline(cfg).analyze(frame);
    if (!analysis.face) {
        std::cerr << "no face found\n";
        return kNoFace;
    }
    const auto& seg = analysis.segmentation;
    const Rect& box = analysis.face->rect;
    std::cout << "face " << box.x << ' ' << box.y << ' ' << box.w << ' ' << box.h << '\n';
    std::cout << "threshold " << seg.threshold << '\n';
    for (const auto& [label, component] : seg.regions.regions) {
        const auto& c = component;
        std::cout << region_key(label) << " area " << c.area << " bbox " << c.bbox.x << ',' << c.bbox.y << ','
                  << c.bbox.w << ',' << c.bbox.h;
        if (auto it = analysis.signature.regions.find(label); it != analysis.signature.regions.end()) {
            std::cout << " hu " << join(it->second.hu) << " log " << join(it->second.hu_log);
        }
        std::cout << '\n';
    }
    if (!mask_path.empty()) save_pgm(render_label_mask(seg.regions), mask_path);
    return kOk;
}

int cmd_enroll(const CommonOptions& common, const std::string& image_path, const std::string& subject,
               const std::string& gallery_path, bool replace) {
    const Pipeline pipeline(common.resolve());
    const auto analysis = pipeline.analyze(load_pgm(image_path));
    if (!analysis.face) {
        std::cerr << "no face found\n";
        return kNoFace;
    }
    if (analysis.signature.empty()) {
        std::cerr << "no facial feature regions found\n";
        return kEmptySignature;
    }
    Gallery gallery = std::filesystem::exists(gallery_path) ? load_gallery(gallery_path)
                                                            : new_gallery(pipeline.config().epsilon);
    try {
        gallery = enroll(gallery, subject, analysis.signature, replace);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DuplicateSubject) throw;
        std::cerr << e.what() << " (use --replace)\n";
        return kDuplicate;
    }
    save_gallery(gallery, gallery_path);
    std::cout << "regions_used " << analysis.signature.size() << '\n';
    std::cout << "gallery_size " << gallery.size() << '\n';
    return kOk;
}

int cmd_identify(const CommonOptions& common, const std::string& image_path, const std::string& gallery_path) {
    const Pipeline pipeline(common.resolve());
    const auto gallery = load_gallery(gallery_path);
    if (gallery.empty()) throw Error(ErrorCode::EmptyGallery, gallery_path + " has no enrolled subjects");
    const auto result = pipeline.identify(load_pgm(image_path), gallery);
    std::printf("detect_s %.6f\n", result.analysis.detect_seconds);
    std::printf("total_s %.6f\n", result.analysis.total_seconds);
    if (!result.match) {
        std::printf("verdict no-face\n");
        return kNoFace;
    }
    const auto& m = *result.match;
    std::printf("verdict %s\n", std::string(to_string(m.verdict)).c_str());
    std::printf("subject %s\n", m.subject_id.value_or("-").c_str());
    std::printf("distance %.9g\n", m.distance);
    std::printf("regions_used %d\n", m.regions_used);
    std::printf("config %s\n", pipeline.config().echo().c_str());
    switch (m.verdict) {
        case Verdict::Match: return kOk;
        case Verdict::Unknown: return kUnknown;
        case Verdict::InsufficientRegions: return kInsufficient;
    }
    return kFailure;
}

int cmd_bench(const CommonOptions& common, const std::string& corpus, const std::string& gallery_path,
              const std::string& report_path) {
    const Pipeline pipeline(common.resolve());
    const auto gallery = load_gallery(gallery_path);
    const auto report = run_bench(pipeline, corpus, gallery);
    std::cout << format_bench_table(report);
    const auto records = format_bench_records(report);
    if (report_path.empty()) {
        std::cout << '\n' << records;
    } else {
        std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + report_path);
        out << records;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partial-matching face recognition over Hu moment invariants"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string image, subject, gallery_path, annotate_path, face_text, mask_path, corpus, report_path;
    bool replace = false;

    auto* detect = app.add_subcommand("detect", "list face detections: x y w h neighbors");
    detect->add_option("image", image, "PGM frame")->required();
    detect->add_option("--annotate", annotate_path, "write the frame with detection boxes");
    common.add_to(detect);

    auto* segment = app.add_subcommand("segment", "Otsu threshold, feature regions and their Hu moments");
    segment->add_option("image", image, "PGM frame")->required();
    segment->add_option("--face", face_text, "face box x,y,w,h (default: detect)");
    segment->add_option("--mask", mask_path, "write the labeled region mask");
    common.add_to(segment);

    auto* enroll_cmd = app.add_subcommand("enroll", "add a subject to the gallery");
    enroll_cmd->add_option("image", image, "PGM frame")->required();
    enroll_cmd->add_option("subject", subject, "subject id")->required();
    enroll_cmd->add_option("--gallery", gallery_path, "gallery file")->required();
    enroll_cmd->add_flag("--replace", replace, "overwrite an existing subject");
    common.add_to(enroll_cmd);

    auto* identify_cmd = app.add_subcommand("identify", "match a frame against the gallery");
    identify_cmd->add_option("image", image, "PGM frame")->required();
    identify_cmd->add_option("--gallery", gallery_path, "gallery file")->required();
    common.add_to(identify_cmd);

    auto* bench = app.add_subcommand("bench", "identify every <subject>__<n>.pgm in a directory");
    bench->add_option("corpus", corpus, "directory of probe frames")->required();
    bench->add_option("--gallery", gallery_path, "gallery file")->required();
    bench->add_option("--report", report_path, "write the machine-readable report here");
    common.add_to(bench);

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect->parsed()) return cmd_detect(common, image, annotate_path);
        if (segment->parsed()) return cmd_segment(common, image, face_text, mask_path);
        if (enroll_cmd->parsed()) return cmd_enroll(common, image, subject, gallery_path, replace);
        if (identify_cmd->parsed()) return cmd_identify(common, image, gallery_path);
        if (bench->parsed()) return cmd_bench(common, corpus, gallery_path, report_path);
    } catch (const std::exception& e) {
        std::cerr << "humatch: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
