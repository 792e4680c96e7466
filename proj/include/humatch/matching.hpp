#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "humatch/gallery.hpp"
#include "humatch/signature.hpp"

namespace humatch {

enum class Verdict { Match, Unknown, InsufficientRegions };

std::string_view to_string(Verdict verdict) noexcept;

struct MatchParams {
    /// Minimum number of regions shared by probe and gallery entry.
    int k_min = 3;
    /// Largest distance still accepted as a match.
    double tau = 0.35;

    void validate() const;
};

struct MatchResult {
    std::optional<std::string> subject_id;
    double distance = 0.0;
    int regions_used = 0;
    Verdict verdict = Verdict::InsufficientRegions;
    /// Parameters the verdict was reached with.
    MatchParams params;
};

/// Mean absolute difference of the log-scaled Hu values. Throws LabelMismatch
/// when the features describe different regions.
double region_distance(const RegionFeature& a, const RegionFeature& b);

struct SignatureDistance {
    double distance = 0.0;
    int regions_used = 0;
};

/// Mean region distance over the labels both signatures carry, or nullopt
/// when fewer than k_min labels are shared.
std::optional<SignatureDistance> signature_distance(const FaceSignature& probe, const FaceSignature& entry, int k_min);

/// Nearest gallery subject under signature_distance. Ties go to the
/// lexicographically smallest id. Throws EmptyGallery.
MatchResult identify(const FaceSignature& probe, const Gallery& gallery, const MatchParams& params = {});

}  // namespace humatch
