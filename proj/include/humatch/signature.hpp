#pragma once

#include <map>

#include "humatch/moments.hpp"
#include "humatch/segmentation.hpp"

namespace humatch {

/// Hu invariants of one facial feature region plus their log-scaled form.
struct RegionFeature {
    RegionLabel label = RegionLabel::Lip;
    HuVector hu{};
    HuLog hu_log{};

    friend bool operator==(const RegionFeature&, const RegionFeature&) = default;
};

/// Up to five region features; a full signature carries 5 x 7 = 35 values.
struct FaceSignature {
    std::map<RegionLabel, RegionFeature> regions;

    std::size_t size() const noexcept { return regions.size(); }
    bool empty() const noexcept { return regions.empty(); }

    friend bool operator==(const FaceSignature&, const FaceSignature&) = default;
};

RegionFeature make_region_feature(RegionLabel label, const HuVector& hu, double epsilon = kDefaultLogEpsilon);

/// Hu moments of the mask on its own canvas, then log scaling.
RegionFeature region_feature(RegionLabel label, const BinaryImage& mask, double epsilon = kDefaultLogEpsilon);

/// One feature per present region. Regions whose moments cannot be computed
/// are left out rather than failing the whole signature.
FaceSignature build_signature(const FaceRegions& regions, double epsilon = kDefaultLogEpsilon);

}  // namespace humatch
