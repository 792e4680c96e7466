#include "humatch/signature.hpp"

#include "humatch/error.hpp"

namespace humatch {

RegionFeature make_region_feature(RegionLabel label, const HuVector& hu, double epsilon) {
    return RegionFeature{label, hu, log_scale(hu, epsilon)};
}

RegionFeature region_feature(RegionLabel label, const BinaryImage& mask, double epsilon) {
    return make_region_feature(label, hu_moments(mask), epsilon);
}

FaceSignature build_signature(const FaceRegions& regions, double epsilon) {
    FaceSignature sig;
    for (const auto& [label, component] : regions.regions) {
        try {
            sig.regions.emplace(label, region_feature(label, component.mask(), epsilon));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyRegion && e.code() != ErrorCode::ZeroMass) throw;
        }
    }
    return sig;
}

}  // namespace humatch
