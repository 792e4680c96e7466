#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "humatch/error.hpp"
#include "humatch/gallery.hpp"
#include "oracles.hpp"

namespace {

using namespace humatch;

// Hu values for the five regions of the reference face (one column per region).
constexpr double kReferenceHu[5][7] = {
    {0.309422, 0.068286, 0.001145, 0.000133, -3.00773, -2.0013, 4.905664},
    {0.27892, 0.049427, 0.00178, 0.000161, -6.61529, -3.10648, -5.41296},
    {0.46138, 0.181526, 0.005953, 0.001035, -5.46412, -7.25124, 2.363238},
    {0.396682, 0.124126, 0.005539, 0.00072, -4.47711, -0.00014, 1.379213},
    {0.414793, 0.138669, 0.005166, 0.00088, -7.74619, -7.22877, -1.82417},
};

FaceSignature reference_signature() {
    FaceSignature sig;
    for (std::size_t r = 0; r < 5; ++r) {
        HuVector hu{};
        std::copy(std::begin(kReferenceHu[r]), std::end(kReferenceHu[r]), hu.begin());
        sig.regions[kRegionLabels[r]] = make_region_feature(kRegionLabels[r], hu);
    }
    return sig;
}

ErrorCode parse_error(const std::string& text) {
    try {
        parse_gallery(text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "parsed without error:\n" << text;
    return ErrorCode::Io;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    if (at != std::string::npos) text.replace(at, from.size(), to);
    return text;
}

TEST(Gallery, EmptyGalleryIsHeaderOnly) {
    const auto text = serialize_gallery(new_gallery());
    EXPECT_EQ(text.find('\n'), text.size() - 1);
    EXPECT_EQ(text.rfind("HUMATCH-GALLERY v1", 0), 0U);
    EXPECT_EQ(parse_gallery(text).size(), 0U);
}

TEST(Gallery, BareHeaderLoads) {
    EXPECT_TRUE(parse_gallery("HUMATCH-GALLERY v1\n").empty());
}

TEST(Gallery, ReferenceSubjectStoredVerbatim) {
    const auto g = enroll(new_gallery(), "paper-fig2", reference_signature());
    const auto text = serialize_gallery(g);
    EXPECT_NE(text.find("\"left_eyebrow\":{\"hu\":[0.309422,"), std::string::npos) << text;
    EXPECT_NE(text.find("-7.74619"), std::string::npos);
    const auto back = parse_gallery(text);
    EXPECT_EQ(back, g);
    EXPECT_EQ(back.subjects.at("paper-fig2").regions.at(RegionLabel::LeftEyebrow).hu[0], 0.309422);
    EXPECT_EQ(back.subjects.at("paper-fig2").regions.at(RegionLabel::Lip).hu[4], -7.74619);
}

TEST(Gallery, RoundTripsRandomGalleries) {
    oracle::Rng rng(71);
    for (int i = 0; i < 100; ++i) {
        const auto g = oracle::random_gallery(rng);
        ASSERT_EQ(parse_gallery(serialize_gallery(g)), g) << "gallery " << i;
    }
}

TEST(Gallery, FileRoundTrip) {
    oracle::Rng rng(72);
    auto g = oracle::random_gallery(rng);
    g = enroll(g, "paper-fig2", reference_signature(), true);
    const auto path = std::filesystem::temp_directory_path() / "humatch_test_gallery.txt";
    save_gallery(g, path);
    EXPECT_EQ(load_gallery(path), g);
    EXPECT_FALSE(std::filesystem::exists(std::filesystem::path(path).concat(".tmp")));
    std::filesystem::remove(path);
}

TEST(Gallery, LineCountMatchesSubjects) {
    oracle::Rng rng(73);
    const auto g = oracle::random_gallery(rng, 8);
    const auto text = serialize_gallery(g);
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), g.size() + 1);
}

TEST(Gallery, RejectsDuplicateSubject) {
    const auto g = enroll(new_gallery(), "x", reference_signature());
    auto text = serialize_gallery(g);
    const auto record = text.substr(text.find('\n') + 1);
    EXPECT_EQ(parse_error(text + record), ErrorCode::DuplicateSubject);
}

TEST(Gallery, RejectsNonFiniteValues) {
    const auto text = serialize_gallery(enroll(new_gallery(), "x", reference_signature()));
    EXPECT_EQ(parse_error(replace(text, "0.309422", "NaN")), ErrorCode::NonFiniteValue);
    EXPECT_EQ(parse_error(replace(text, "0.309422", "\"NaN\"")), ErrorCode::NonFiniteValue);
    EXPECT_EQ(parse_error(replace(text, "0.309422", "Infinity")), ErrorCode::NonFiniteValue);
    EXPECT_EQ(parse_error(replace(text, "0.309422", "null")), ErrorCode::NonFiniteValue);
    EXPECT_EQ(parse_error(replace(text, "0.309422", "1e999")), ErrorCode::NonFiniteValue);
}

TEST(Gallery, RejectsMalformedRecords) {
    const auto text = serialize_gallery(enroll(new_gallery(), "x", reference_signature()));
    EXPECT_EQ(parse_error("HUMATCH-GALLERY v2\n"), ErrorCode::MalformedRecord);
    EXPECT_EQ(parse_error(""), ErrorCode::MalformedRecord);
    EXPECT_EQ(parse_error(replace(text, "\"id\":\"x\"", "\"id\":\"\"")), ErrorCode::MalformedRecord);
    EXPECT_EQ(parse_error(replace(text, "\"id\":\"x\"", "\"id\":7")), ErrorCode::MalformedRecord);
    EXPECT_EQ(parse_error(replace(text, "left_eyebrow", "nose")), ErrorCode::MalformedRecord);
    EXPECT_EQ(parse_error(replace(text, "0.309422,", "")), ErrorCode::MalformedRecord);
    EXPECT_EQ(parse_error(replace(text, "0.309422", "\"0.3\"")), ErrorCode::MalformedRecord);
    EXPECT_EQ(parse_error(text.substr(0, text.size() - 5) + "\n"), ErrorCode::MalformedRecord);
    EXPECT_EQ(parse_error(text + "\n"), ErrorCode::MalformedRecord);
    EXPECT_EQ(parse_error("HUMATCH-GALLERY v1\n{\"id\":\"a\",\"regions\":{}}\n"), ErrorCode::MalformedRecord);
}

TEST(Gallery, RejectsInconsistentLogValues) {
    const auto text = serialize_gallery(enroll(new_gallery(), "x", reference_signature()));
    const auto logs = text.find("\"hu_log\":[") + 10;
    const auto comma = text.find(',', logs);
    const auto broken = text.substr(0, logs) + "0.5" + text.substr(comma);
    EXPECT_EQ(parse_error(broken), ErrorCode::MalformedRecord);
}

TEST(Gallery, ReportsLineNumber) {
    const auto g = enroll(enroll(new_gallery(), "a", reference_signature()), "b", reference_signature());
    auto text = serialize_gallery(g);
    text = text.substr(0, text.rfind("0.309422")) + "oops" + text.substr(text.rfind("0.309422") + 8);
    try {
        parse_gallery(text);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedRecord);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

// Single-field corruption: every byte flip either still parses to a valid
// gallery or raises one of the documented error codes.
TEST(Gallery, SingleByteCorruptionNeverYieldsInvalidGallery) {
    oracle::Rng rng(74);
    const auto text = serialize_gallery(enroll(new_gallery(), "x", reference_signature()));
    std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1);
    std::uniform_int_distribution<int> chr(32, 126);
    for (int i = 0; i < 500; ++i) {
        auto mutated = text;
        mutated[pos(rng)] = static_cast<char>(chr(rng));
        try {
            const auto g = parse_gallery(mutated);
            for (const auto& [id, sig] : g.subjects) {
                ASSERT_FALSE(id.empty());
                ASSERT_FALSE(sig.empty());
                for (const auto& [label, f] : sig.regions) {
                    for (std::size_t k = 0; k < 7; ++k) {
                        ASSERT_TRUE(std::isfinite(f.hu[k]));
                        ASSERT_TRUE(std::isfinite(f.hu_log[k]));
                    }
                }
            }
        } catch (const Error& e) {
            const auto c = e.code();
            ASSERT_TRUE(c == ErrorCode::MalformedRecord || c == ErrorCode::NonFiniteValue ||
                        c == ErrorCode::DuplicateSubject)
                << e.what();
        }
    }
}

TEST(Enroll, Examples) {
    const auto sig = reference_signature();
    const auto g1 = enroll(new_gallery(), "a", sig);
    EXPECT_EQ(g1.size(), 1U);
    try {
        enroll(g1, "a", sig);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateSubject);
    }
    FaceSignature smaller = sig;
    smaller.regions.erase(RegionLabel::Lip);
    const auto g2 = enroll(g1, "a", smaller, true);
    EXPECT_EQ(g2.size(), 1U);
    EXPECT_EQ(g2.subjects.at("a"), smaller);
    EXPECT_EQ(g1.subjects.at("a"), sig);
    try {
        enroll(g1, "b", FaceSignature{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptySignature);
    }
    EXPECT_THROW(enroll(g1, "", sig), Error);
}

TEST(Gallery, MissingFileIsIoError) {
    try {
        load_gallery("/nonexistent/gallery.txt");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
}

}  // namespace
