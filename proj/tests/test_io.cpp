#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

#include "heis/io.hpp"
#include "heis/report.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(BallFamilyIO, RoundTripIsBitExact) {
    CounterRng g(12);
    BallFamily F;
    F.delta = 1.0 / 3.0;
    F.claimed_t = 2.5;
    F.claimed_C = 7.123456789012345;
    for (int i = 0; i < 500; ++i) F.centers.emplace_back(g.uniform(-1, 1), g.uniform(-1, 1) * 1e-7, g.uniform(-1, 1) * 1e5);
    F.centers.emplace_back(-0.0, 5e-324, 1.7976931348623157e308);
    std::stringstream ss;
    write_ball_family(ss, F);
    const auto G = read_ball_family(ss);
    ASSERT_EQ(G.size(), F.size());
    EXPECT_TRUE(same_bits(G.delta, F.delta));
    EXPECT_TRUE(same_bits(G.claimed_t, F.claimed_t));
    EXPECT_TRUE(same_bits(G.claimed_C, F.claimed_C));
    for (std::size_t i = 0; i < F.size(); ++i) {
        EXPECT_TRUE(same_bits(G.centers[i].x, F.centers[i].x));
        EXPECT_TRUE(same_bits(G.centers[i].y, F.centers[i].y));
        EXPECT_TRUE(same_bits(G.centers[i].t, F.centers[i].t));
    }
}

TEST(BallFamilyIO, FileRoundTrip) {
    const auto path = (std::filesystem::temp_directory_path() / "heis_io_family.txt").string();
    const auto F = gen_sharpness_example(SharpnessKind::horizontal_line, {0.25, 1.0, 8.0});
    save_ball_family(path, F);
    const auto G = load_ball_family(path);
    EXPECT_EQ(G.centers, F.centers);
    EXPECT_NE(file_hash(path), "none");
    EXPECT_EQ(file_hash(path), file_hash(path));
    std::filesystem::remove(path);
    EXPECT_EQ(file_hash(path), "none");
    EXPECT_THROW(load_ball_family(path), ParseError);
}

TEST(BallFamilyIO, CommentsAndBlankLines) {
    std::istringstream in("# family\n\n0.5 1 8 2\n0 0 0\n\n# second\n0.5 0 0\n");
    const auto F = read_ball_family(in);
    EXPECT_EQ(F.size(), 2u);
    EXPECT_EQ(F.centers[1], HeisPoint(0.5, 0, 0));
}

TEST(BallFamilyIO, MalformedInput) {
    auto bad = [](const std::string& text, std::size_t line) {
        std::istringstream in(text);
        try {
            read_ball_family(in);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), line) << text;
        }
    };
    bad("", 0);
    bad("0.5 1 8\n", 1);
    bad("0.5 1 8 x\n", 1);
    bad("0 1 8 1\n0 0 0\n", 1);
    bad("0.5 1 8 2\n0 0 0\n", 2);
    bad("0.5 1 8 1\n0 0\n", 2);
    bad("0.5 1 8 1\n0 zero 0\n", 2);
    bad("0.5 1 8 1\n0 nan 0\n", 2);
    bad("0.5 1 8 1\n0 0 0\n1 1 1\n", 3);
}

TEST(MeasureIO, RoundTripIsBitExact) {
    CounterRng g(13);
    DiscreteMeasure mu;
    for (int i = 0; i < 300; ++i) mu.add(HeisPoint(g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1)), g.uniform(1e-6, 1.0));
    std::stringstream ss;
    write_measure(ss, mu);
    const auto nu = read_measure(ss);
    ASSERT_EQ(nu.size(), mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        EXPECT_EQ(nu.atoms()[i].p, mu.atoms()[i].p);
        EXPECT_TRUE(same_bits(nu.atoms()[i].w, mu.atoms()[i].w));
    }
    EXPECT_NEAR(nu.total_mass(), mu.total_mass(), 1e-10);
}

TEST(MeasureIO, MalformedInput) {
    for (const char* text : {"", "2 1\n0 0 0 0.5\n", "1 1\n0 0 0 -1\n", "1 2\n0 0 0 1\n", "1 1\n0 0 0\n", "1 1\n0 0 0 1\n0 0 0 1\n"}) {
        std::istringstream in(text);
        EXPECT_THROW(read_measure(in), ParseError) << text;
    }
}

TEST(ManifestIO, RoundTrip) {
    const std::vector<ManifestEntry> m{{"sandwich_c", 0.337, 1000000, 1, "min over sampled plate points"},
                                       {"xray_ratio", 2.3359, 48, 0, "midpoint grids"}};
    std::stringstream ss;
    write_manifest(ss, m);
    const auto r = read_manifest(ss);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].name, "sandwich_c");
    EXPECT_EQ(r[0].value, 0.337);
    EXPECT_EQ(r[0].samples, 1000000u);
    EXPECT_EQ(r[0].seed, 1u);
    EXPECT_EQ(r[0].oracle, "min over sampled plate points");
    EXPECT_EQ(manifest_get(r, "xray_ratio").value, 2.3359);
    EXPECT_THROW(manifest_get(r, "missing"), DomainError);
    std::istringstream bad("name 1.0\n");
    EXPECT_THROW(read_manifest(bad), ParseError);
}

TEST(ManifestIO, FixtureHasEveryConstant) {
    std::ifstream in(std::string(HEIS_FIXTURES) + "/constants.txt");
    ASSERT_TRUE(in.good());
    const auto m = read_manifest(in);
    for (const char* name : {"plate_to_ball_C", "recovery_C", "sandwich_c", "tube_C", "same_direction_C", "cinematic_c",
                             "cinematic_lipschitz", "ball_image_area", "xray_ratio"})
        EXPECT_NO_THROW(manifest_get(m, name)) << name;
}

TEST(Report, JsonCsvSvg) {
    ExperimentReport r;
    r.name = "demo";
    r.parameters["delta"] = 0.0625;
    r.parameters["seed"] = 7;
    r.scalars["area_best"] = 0.25;
    r.add_series("areas", {"theta", "area", {0.0, 1.0, 2.0}, {0.1, 0.3, 0.2}});
    EXPECT_THROW(r.add_series("bad", {"x", "y", {0.0}, {}}), DomainError);
    const auto j = r.to_json();
    EXPECT_EQ(j["name"], "demo");
    EXPECT_EQ(j["parameters"]["delta"], 0.0625);
    EXPECT_EQ(j["scalars"]["area_best"], 0.25);
    EXPECT_EQ(j["series"]["areas"]["y"].size(), 3u);
    EXPECT_EQ(j["provenance"]["constants_manifest_hash"], "none");
    EXPECT_EQ(nlohmann::ordered_json::parse(j.dump()), j);
    std::ostringstream csv, svg;
    write_csv(csv, r);
    EXPECT_EQ(csv.str(), "series,x,y\nareas,0,0.10000000000000001\nareas,1,0.29999999999999999\nareas,2,0.20000000000000001\n");
    write_svg(svg, r);
    EXPECT_NE(svg.str().find("<polyline"), std::string::npos);
    EXPECT_NE(svg.str().find("demo: areas"), std::string::npos);
}
