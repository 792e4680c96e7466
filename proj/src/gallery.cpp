#include "humatch/gallery.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "humatch/error.hpp"

namespace humatch {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void non_finite(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::NonFiniteValue, "line " + std::to_string(line) + ": " + what);
}

// nlohmann rejects NaN/Infinity literals outright; spot them first so the
// error says what is actually wrong with the record.
bool has_non_finite_literal(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
            continue;
        }
        for (std::string_view token : {"NaN", "nan", "Infinity", "inf"}) {
            if (line.substr(i, token.size()) == token) return true;
        }
    }
    return false;
}

json encode_values(const std::array<double, 7>& values) {
    json out = json::array();
    for (const double v : values) out.push_back(v);
    return out;
}

std::array<double, 7> decode_values(const json& node, std::size_t line, const std::string& where) {
    if (!node.is_array() || node.size() != 7) malformed(line, where + " must be an array of 7 numbers");
    std::array<double, 7> out{};
    for (std::size_t i = 0; i < 7; ++i) {
        const auto& v = node[i];
        if (v.is_null()) non_finite(line, where + "[" + std::to_string(i) + "] is null");
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s.find("nan") != std::string::npos || s.find("NaN") != std::string::npos ||
                s.find("inf") != std::string::npos || s.find("Inf") != std::string::npos) {
                non_finite(line, where + "[" + std::to_string(i) + "] is " + s);
            }
        }
        if (!v.is_number()) malformed(line, where + "[" + std::to_string(i) + "] is not a number");
        out[i] = v.get<double>();
        if (!std::isfinite(out[i])) non_finite(line, where + "[" + std::to_string(i) + "]");
    }
    return out;
}

GalleryMetadata parse_metadata(std::string_view rest) {
    GalleryMetadata meta;
    if (rest.empty()) return meta;
    if (rest.front() != ' ') malformed(1, "expected a space after the gallery header");
    json node;
    try {
        node = json::parse(rest.substr(1));
    } catch (const json::parse_error& e) {
        malformed(1, std::string("metadata: ") + e.what());
    } catch (const json::out_of_range& e) {
        non_finite(1, std::string("metadata: ") + e.what());
    }
    if (!node.is_object()) malformed(1, "metadata must be an object");
    for (const auto& [key, value] : node.items()) {
        if (key == "created" && value.is_string()) {
            meta.created = value.get<std::string>();
        } else if (key == "epsilon" && value.is_number()) {
            meta.epsilon = value.get<double>();
            if (!std::isfinite(meta.epsilon) || meta.epsilon <= 0.0) non_finite(1, "epsilon must be finite and positive");
        } else if (key == "normalization" && value.is_string()) {
            meta.normalization = value.get<std::string>();
        } else {
            malformed(1, "unexpected metadata field '" + key + "'");
        }
    }
    return meta;
}

}  // namespace

Gallery new_gallery(double epsilon) {
    Gallery g;
    g.metadata.epsilon = epsilon;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    g.metadata.created = buf;
    return g;
}

Gallery enroll(const Gallery& gallery, const std::string& subject_id, const FaceSignature& signature, bool replace) {
    if (subject_id.empty()) throw Error(ErrorCode::InvalidArgument, "subject id must be non-empty");
    if (signature.empty()) throw Error(ErrorCode::EmptySignature, "signature for '" + subject_id + "' has no regions");
    if (!replace && gallery.subjects.contains(subject_id)) {
        throw Error(ErrorCode::DuplicateSubject, "subject '" + subject_id + "' is already enrolled");
    }
    Gallery out = gallery;
    out.subjects.insert_or_assign(subject_id, signature);
    return out;
}

std::string serialize_gallery(const Gallery& gallery) {
    std::string out(kGalleryHeader);
    const json meta = {{"created", gallery.metadata.created},
                       {"epsilon", gallery.metadata.epsilon},
                       {"normalization", gallery.metadata.normalization}};
    out += ' ';
    out += meta.dump();
    out += '\n';
    for (const auto& [id, sig] : gallery.subjects) {
        json regions = json::object();
        for (const auto& [label, feature] : sig.regions) {
            regions[std::string(region_key(label))] = {{"hu", encode_values(feature.hu)},
                                                       {"hu_log", encode_values(feature.hu_log)}};
        }
        out += json{{"id", id}, {"regions", regions}}.dump();
        out += '\n';
    }
    return out;
}

Gallery parse_gallery(std::string_view text) {
    std::vector<std::string_view> lines;
    for (std::size_t start = 0; start < text.size();) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    if (lines.empty() || !lines[0].starts_with(kGalleryHeader)) {
        malformed(1, "missing '" + std::string(kGalleryHeader) + "' header");
    }

    Gallery g;
    g.metadata = parse_metadata(lines[0].substr(kGalleryHeader.size()));

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto line = lines[i];
        if (line.empty()) malformed(line_no, "blank line");
        if (has_non_finite_literal(line)) non_finite(line_no, "non-finite literal");

        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            malformed(line_no, e.what());
        } catch (const json::out_of_range& e) {
            // Number literals beyond double range.
            non_finite(line_no, e.what());
        }
        if (!record.is_object() || record.size() != 2 || !record.contains("id") || !record.contains("regions")) {
            malformed(line_no, "record must hold exactly 'id' and 'regions'");
        }
        if (!record["id"].is_string() || record["id"].get<std::string>().empty()) {
            malformed(line_no, "'id' must be a non-empty string");
        }
        const auto id = record["id"].get<std::string>();
        if (g.subjects.contains(id)) {
            throw Error(ErrorCode::DuplicateSubject, "line " + std::to_string(line_no) + ": subject '" + id + "'");
        }
        const auto& regions = record["regions"];
        if (!regions.is_object()) malformed(line_no, "'regions' must be an object");
        if (regions.empty()) malformed(line_no, "record has no regions");

        FaceSignature sig;
        for (const auto& [key, node] : regions.items()) {
            const auto label = region_from_key(key);
            if (!label) malformed(line_no, "unknown region '" + key + "'");
            if (!node.is_object() || node.size() != 2 || !node.contains("hu") || !node.contains("hu_log")) {
                malformed(line_no, "region '" + key + "' must hold exactly 'hu' and 'hu_log'");
            }
            RegionFeature feature{*label, decode_values(node["hu"], line_no, key + ".hu"),
                                  decode_values(node["hu_log"], line_no, key + ".hu_log")};
            const auto expected = log_scale(feature.hu, g.metadata.epsilon);
            for (std::size_t k = 0; k < 7; ++k) {
                if (std::abs(expected[k] - feature.hu_log[k]) > 1e-12 * std::max(1.0, std::abs(expected[k]))) {
                    malformed(line_no, key + ".hu_log[" + std::to_string(k) + "] does not match log-scaled hu");
                }
            }
            sig.regions.emplace(*label, feature);
        }
        g.subjects.emplace(id, std::move(sig));
    }
    return g;
}

void save_gallery(const Gallery& gallery, const std::filesystem::path& path) {
    const auto text = serialize_gallery(gallery);
    const auto tmp = std::filesystem::path(path).concat(".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot replace " + path.string() + ": " + ec.message());
}

Gallery load_gallery(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open gallery " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_gallery(text.str());
}

}  // namespace humatch
