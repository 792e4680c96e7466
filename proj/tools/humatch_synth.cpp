// humatch-synth: render synthetic shape-faces for demos and benchmarks.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "humatch/image.hpp"
#include "humatch/synthetic.hpp"

namespace fs = std::filesystem;
using namespace humatch;

namespace {

// Probe variants written per subject by the corpus command.
const std::vector<synthetic::FaceVariant> kProbeVariants = {
    {12, -9, 0, false, false},
    {-20, 16, 0, false, false},
    {0, 0, 1, false, false},
    {8, 8, 3, false, false},
    {0, 0, 0, true, false},
};

void write_corpus(const fs::path& dir, const std::vector<std::string>& enrolled, const std::vector<std::string>& strangers) {
    fs::create_directories(dir / "enroll");
    fs::create_directories(dir / "probes");
    for (const auto& name : enrolled) {
        save_pgm(synthetic::render_subject(name), dir / "enroll" / (name + ".pgm"));
        int n = 0;
        for (const auto& v : kProbeVariants) {
            save_pgm(synthetic::render_subject(name, v), dir / "probes" / (name + "__" + std::to_string(n++) + ".pgm"));
        }
    }
    for (const auto& name : strangers) {
        save_pgm(synthetic::render_subject(name), dir / "probes" / ("stranger-" + name + "__0.pgm"));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic shape-face generator"};
    app.require_subcommand(1);

    synthetic::FaceStyle style;
    synthetic::FaceVariant variant;
    std::string shape_name, out;
    int blank_value = 128;

    auto* face = app.add_subcommand("face", "render one subject's face");
    face->add_option("shape", shape_name, "base shape of the subject's features")->required();
    face->add_option("out", out, "output PGM")->required();
    face->add_option("--dx", variant.dx, "horizontal face offset");
    face->add_option("--dy", variant.dy, "vertical face offset");
    face->add_option("--turns", variant.quarter_turns, "quarter turns of every feature blob");
    face->add_flag("--dilate", variant.dilated, "dilate feature blobs by one pixel");
    face->add_flag("--lip-only", variant.lip_only, "draw only the lip");
    face->add_option("--width", style.frame_w, "frame width");
    face->add_option("--height", style.frame_h, "frame height");

    auto* blank = app.add_subcommand("blank", "write a flat frame");
    blank->add_option("out", out, "output PGM")->required();
    blank->add_option("--value", blank_value, "gray level")->check(CLI::Range(0, 255));
    blank->add_option("--width", style.frame_w, "frame width");
    blank->add_option("--height", style.frame_h, "frame height");

    std::vector<std::string> enrolled = {"kite", "trapezoid", "triangle", "flag", "boot"};
    std::vector<std::string> strangers;
    auto* corpus = app.add_subcommand("corpus", "write enroll/ and probes/ (<subject>__<n>.pgm) into a directory");
    corpus->add_option("dir", out, "output directory")->required();
    corpus->add_option("--subjects", enrolled, "shapes to enroll");
    corpus->add_option("--strangers", strangers, "unenrolled shapes added as probes");

    app.add_subcommand("shapes", "list available shapes");

    CLI11_PARSE(app, argc, argv);

    try {
        if (face->parsed()) {
            save_pgm(synthetic::render_subject(shape_name, variant, style), out);
        } else if (blank->parsed()) {
            save_pgm(GrayImage(style.frame_w, style.frame_h, static_cast<std::uint8_t>(blank_value)), out);
        } else if (corpus->parsed()) {
            write_corpus(out, enrolled, strangers);
        } else {
            for (const auto& name : synthetic::shape_names()) std::cout << name << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "humatch-synth: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
