#include "humatch/matching.hpp"

#include <cmath>

#include "humatch/error.hpp"

namespace humatch {

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
        case Verdict::Match: return "match";
        case Verdict::Unknown: return "unknown";
        case Verdict::InsufficientRegions: return "insufficient-regions";
    }
    return "";
}

void MatchParams::validate() const {
    if (k_min < 1 || k_min > 5) throw Error(ErrorCode::InvalidArgument, "k_min must lie in [1, 5]");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
}

double region_distance(const RegionFeature& a, const RegionFeature& b) {
    if (a.label != b.label) {
        throw Error(ErrorCode::LabelMismatch, std::string(region_key(a.label)) + " vs " + std::string(region_key(b.label)));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < a.hu_log.size(); ++i) total += std::abs(a.hu_log[i] - b.hu_log[i]);
    return total / 7.0;
}

std::optional<SignatureDistance> signature_distance(const FaceSignature& probe, const FaceSignature& entry, int k_min) {
    if (k_min < 1) throw Error(ErrorCode::InvalidArgument, "k_min must be at least 1");
    double total = 0.0;
    int shared = 0;
    for (const auto& [label, feature] : probe.regions) {
        auto it = entry.regions.find(label);
        if (it == entry.regions.end()) continue;
        total += region_distance(feature, it->second);
        ++shared;
    }
    if (shared < k_min) return std::nullopt;
    return SignatureDistance{total / shared, shared};
}

MatchResult identify(const FaceSignature& probe, const Gallery& gallery, const MatchParams& params) {
    params.validate();
    if (gallery.empty()) throw Error(ErrorCode::EmptyGallery, "gallery has no enrolled subjects");

    MatchResult result;
    result.params = params;
    // subjects is ordered by id, so strict < keeps the smallest id on ties.
    for (const auto& [id, entry] : gallery.subjects) {
        const auto d = signature_distance(probe, entry, params.k_min);
        if (!d) continue;
        if (!result.subject_id || d->distance < result.distance) {
            result.subject_id = id;
            result.distance = d->distance;
            result.regions_used = d->regions_used;
        }
    }
    if (!result.subject_id) {
        result.verdict = Verdict::InsufficientRegions;
        result.regions_used = 0;
        for (const auto& [id, entry] : gallery.subjects) {
            int shared = 0;
            for (const auto& [label, f] : probe.regions) shared += entry.regions.contains(label) ? 1 : 0;
            result.regions_used = std::max(result.regions_used, shared);
        }
        return result;
    }
    result.verdict = result.distance <= params.tau ? Verdict::Match : Verdict::Unknown;
    return result;
}

}  // namespace humatch
