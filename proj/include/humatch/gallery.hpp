#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "humatch/signature.hpp"

namespace humatch {

inline constexpr std::string_view kGalleryHeader = "HUMATCH-GALLERY v1";

struct GalleryMetadata {
    /// ISO-8601 UTC creation time.
    std::string created;
    double epsilon = kDefaultLogEpsilon;
    std::string normalization = "(p+q)/2+1";

    friend bool operator==(const GalleryMetadata&, const GalleryMetadata&) = default;
};

/// Enrollment database: one signature per subject. Galleries are values;
/// enrolling produces a new gallery and leaves the old one untouched.
struct Gallery {
    std::map<std::string, FaceSignature> subjects;
    GalleryMetadata metadata;

    std::size_t size() const noexcept { return subjects.size(); }
    bool empty() const noexcept { return subjects.empty(); }

    friend bool operator==(const Gallery&, const Gallery&) = default;
};

/// Empty gallery stamped with the current UTC time.
Gallery new_gallery(double epsilon = kDefaultLogEpsilon);

/// Throws InvalidArgument for an empty id, EmptySignature for a signature with
/// no regions, and DuplicateSubject when id exists and replace is false.
Gallery enroll(const Gallery& gallery, const std::string& subject_id, const FaceSignature& signature,
               bool replace = false);

/// Header line (with metadata) followed by one JSON record per subject, LF endings.
std::string serialize_gallery(const Gallery& gallery);
/// Errors: MalformedRecord (with line number), DuplicateSubject, NonFiniteValue.
Gallery parse_gallery(std::string_view text);

void save_gallery(const Gallery& gallery, const std::filesystem::path& path);
Gallery load_gallery(const std::filesystem::path& path);

}  // namespace humatch
