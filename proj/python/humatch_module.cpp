#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>

#include "humatch/cascade.hpp"
#include "humatch/error.hpp"
#include "humatch/gallery.hpp"
#include "humatch/image.hpp"
#include "humatch/integral.hpp"
#include "humatch/matching.hpp"
#include "humatch/moments.hpp"
#include "humatch/pipeline.hpp"
#include "humatch/segmentation.hpp"
#include "humatch/signature.hpp"

namespace py = pybind11;
using namespace humatch;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using RectTuple = std::tuple<int, int, int, int>;
using SignatureDict = std::map<std::string, HuVector>;

GrayImage to_gray(const U8Array& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D uint8 array");
    const auto h = static_cast<int>(a.shape(0));
    const auto w = static_cast<int>(a.shape(1));
    return GrayImage(w, h, std::vector<std::uint8_t>(a.data(), a.data() + a.size()));
}

BinaryImage to_mask(const U8Array& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
    std::vector<std::uint8_t> bits(a.data(), a.data() + a.size());
    for (auto& b : bits) b = b != 0 ? 1 : 0;
    return BinaryImage(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), std::move(bits));
}

U8Array to_array(const GrayImage& img) {
    U8Array out({img.height(), img.width()});
    std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
    return out;
}

Rect to_rect(const RectTuple& t) { return {std::get<0>(t), std::get<1>(t), std::get<2>(t), std::get<3>(t)}; }
RectTuple to_tuple(const Rect& r) { return {r.x, r.y, r.w, r.h}; }

py::list detections_to_list(const std::vector<Detection>& dets) {
    py::list out;
    for (const auto& d : dets) out.append(py::make_tuple(d.rect.x, d.rect.y, d.rect.w, d.rect.h, d.neighbor_count));
    return out;
}

SignatureDict to_dict(const FaceSignature& sig) {
    SignatureDict out;
    for (const auto& [label, f] : sig.regions) out[std::string(region_key(label))] = f.hu;
    return out;
}

FaceSignature from_dict(const SignatureDict& d, double epsilon) {
    FaceSignature sig;
    for (const auto& [key, hu] : d) {
        const auto label = region_from_key(key);
        if (!label) throw Error(ErrorCode::InvalidArgument, "unknown region '" + key + "'");
        sig.regions[*label] = make_region_feature(*label, hu, epsilon);
    }
    return sig;
}

py::dict match_to_dict(const MatchResult& m) {
    py::dict out;
    out["verdict"] = std::string(to_string(m.verdict));
    out["subject"] = m.subject_id ? py::cast(*m.subject_id) : py::none();
    out["distance"] = m.distance;
    out["regions_used"] = m.regions_used;
    return out;
}

py::dict analysis_to_dict(const FaceAnalysis& a) {
    py::dict out;
    py::object face = py::none();
    if (a.face) face = py::make_tuple(a.face->rect.x, a.face->rect.y, a.face->rect.w, a.face->rect.h, a.face->neighbor_count);
    out["face"] = face;
    out["threshold"] = a.segmentation.threshold;
    py::dict regions;
    for (const auto& [label, c] : a.segmentation.regions.regions) {
        regions[py::str(std::string(region_key(label)))] = py::make_tuple(to_tuple(c.bbox), c.area);
    }
    out["regions"] = regions;
    out["signature"] = to_dict(a.signature);
    out["detect_seconds"] = a.detect_seconds;
    out["total_seconds"] = a.total_seconds;
    return out;
}

PipelineConfig make_config(const std::string& cascade_path, const py::dict& options) {
    PipelineConfig cfg;
    cfg.cascade_path = cascade_path;
    for (const auto& [key, value] : options) cfg.set(py::str(key), py::str(value));
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_humatch, m) {
    m.doc() = "Face matching over Hu moment invariants of facial feature regions";

    static py::exception<Error> error_type(m, "HumatchError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::handle(error_type)(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def("load_pgm", [](const std::filesystem::path& p) { return to_array(load_pgm(p)); }, py::arg("path"),
          "Read a P2/P5 graymap as an (h, w) uint8 array.");
    m.def("save_pgm", [](const std::filesystem::path& p, const U8Array& a) { save_pgm(to_gray(a), p); },
          py::arg("path"), py::arg("image"));

    m.def("hu_moments", [](const U8Array& mask) { return hu_moments(to_mask(mask)); }, py::arg("mask"),
          "Seven Hu invariants of the nonzero pixels.");
    m.def("log_scale", &log_scale, py::arg("hu"), py::arg("epsilon") = kDefaultLogEpsilon);
    m.def(
        "central_moments",
        [](const U8Array& mask) {
            const auto cm = central_moments(raw_moments(to_mask(mask)));
            std::map<std::string, double> out;
            for (const auto& [p, q] : kMomentOrders) out["mu" + std::to_string(p) + std::to_string(q)] = cm.mu(p, q);
            return out;
        },
        py::arg("mask"));

    m.def(
        "histogram",
        [](const U8Array& img) {
            const auto h = histogram(to_gray(img));
            return std::vector<std::uint64_t>(h.counts.begin(), h.counts.end());
        },
        py::arg("image"));
    m.def("otsu_threshold", [](const U8Array& img) { return otsu_threshold(histogram(to_gray(img))); },
          py::arg("image"), "Otsu threshold; foreground is pixel <= t.");
    m.def("rect_sum", [](const U8Array& img, const RectTuple& r) { return IntegralImage(to_gray(img)).rect_sum(to_rect(r)); },
          py::arg("image"), py::arg("rect"));

    py::class_<CascadeModel>(m, "Cascade")
        .def(py::init([](const std::filesystem::path& p) { return parse_cascade(p); }), py::arg("path"))
        .def_static("from_xml", [](const std::string& xml) { return parse_cascade_xml(xml); })
        .def_property_readonly("window_size", [](const CascadeModel& c) { return py::make_tuple(c.window_w, c.window_h); })
        .def_property_readonly("stage_count", [](const CascadeModel& c) { return c.stages.size(); })
        .def_property_readonly("weak_count", &CascadeModel::weak_count)
        .def(
            "detect",
            [](const CascadeModel& c, const U8Array& img, double scale_factor, int min_neighbors, int min_size) {
                return detections_to_list(detect_multiscale(c, to_gray(img), {scale_factor, min_neighbors, min_size}));
            },
            py::arg("image"), py::arg("scale_factor") = 1.1, py::arg("min_neighbors") = 3, py::arg("min_size") = 0,
            "Grouped detections as (x, y, w, h, neighbors).")
        .def(
            "detect_raw",
            [](const CascadeModel& c, const U8Array& img, double scale_factor, int min_size) {
                std::vector<RectTuple> out;
                for (const auto& r : detect_raw(c, to_gray(img), {scale_factor, 0, min_size})) out.push_back(to_tuple(r));
                return out;
            },
            py::arg("image"), py::arg("scale_factor") = 1.1, py::arg("min_size") = 0);

    py::class_<Gallery>(m, "Gallery")
        .def(py::init([](double epsilon) { return new_gallery(epsilon); }), py::arg("epsilon") = kDefaultLogEpsilon)
        .def_static("load", &load_gallery, py::arg("path"))
        .def_static("parse", [](const std::string& text) { return parse_gallery(text); })
        .def("save", [](const Gallery& g, const std::filesystem::path& p) { save_gallery(g, p); }, py::arg("path"))
        .def("serialize", &serialize_gallery)
        .def("__len__", &Gallery::size)
        .def("__contains__", [](const Gallery& g, const std::string& id) { return g.subjects.count(id) > 0; })
        .def("__eq__", [](const Gallery& a, const Gallery& b) { return a == b; })
        .def_property_readonly("subjects", [](const Gallery& g) {
            std::vector<std::string> ids;
            for (const auto& [id, sig] : g.subjects) ids.push_back(id);
            return ids;
        })
        .def("signature", [](const Gallery& g, const std::string& id) {
            const auto it = g.subjects.find(id);
            if (it == g.subjects.end()) throw py::key_error(id);
            return to_dict(it->second);
        })
        .def(
            "enroll",
            [](const Gallery& g, const std::string& id, const SignatureDict& sig, bool replace) {
                return enroll(g, id, from_dict(sig, g.metadata.epsilon), replace);
            },
            py::arg("subject"), py::arg("signature"), py::arg("replace") = false,
            "New gallery with the subject added; signature maps region keys to 7 Hu values.");

    m.def(
        "identify",
        [](const SignatureDict& probe, const Gallery& g, int k_min, double tau) {
            return match_to_dict(identify(from_dict(probe, g.metadata.epsilon), g, MatchParams{k_min, tau}));
        },
        py::arg("probe"), py::arg("gallery"), py::arg("k_min") = 3, py::arg("tau") = 0.35);

    py::class_<Pipeline>(m, "Pipeline")
        .def(py::init([](const std::string& cascade, const py::dict& options) {
                 return Pipeline(make_config(cascade, options));
             }),
             py::arg("cascade"), py::arg("options") = py::dict(),
             "options use the config-file keys, e.g. {'tau': 0.3, 'min_neighbors': 2}.")
        .def_property_readonly("config", [](const Pipeline& p) { return p.config().entries(); })
        .def("detect", [](const Pipeline& p, const U8Array& img) { return detections_to_list(p.detect(to_gray(img))); })
        .def(
            "analyze",
            [](const Pipeline& p, const U8Array& img, std::optional<RectTuple> face) {
                std::optional<Rect> box;
                if (face) box = to_rect(*face);
                return analysis_to_dict(p.analyze(to_gray(img), box));
            },
            py::arg("image"), py::arg("face") = py::none())
        .def(
            "enroll",
            [](const Pipeline& p, const Gallery& g, const std::string& id, const U8Array& img, bool replace) {
                const auto a = p.analyze(to_gray(img));
                if (!a.face) throw Error(ErrorCode::InvalidArgument, "no face found");
                return enroll(g, id, a.signature, replace);
            },
            py::arg("gallery"), py::arg("subject"), py::arg("image"), py::arg("replace") = false)
        .def(
            "identify",
            [](const Pipeline& p, const U8Array& img, const Gallery& g) -> py::object {
                const auto r = p.identify(to_gray(img), g);
                if (!r.match) return py::none();
                auto out = match_to_dict(*r.match);
                out["detect_seconds"] = r.analysis.detect_seconds;
                out["total_seconds"] = r.analysis.total_seconds;
                return out;
            },
            py::arg("image"), py::arg("gallery"), "Match verdict, or None when no face is found.");
}
