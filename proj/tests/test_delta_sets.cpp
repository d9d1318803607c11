#include <gtest/gtest.h>

#include <cmath>

#include "heis/delta_sets.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {

// Smallest number of delta-balls centered at points of P covering P, by exhaustive search.
std::size_t min_cover_bruteforce(const std::vector<HeisPoint>& P, double delta) {
    const std::size_t n = P.size();
    std::vector<std::uint32_t> covers(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (heis_dist(P[i], P[j]) <= delta) covers[i] |= 1u << j;
    const std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1);
    std::size_t best = n;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const auto k = static_cast<std::size_t>(__builtin_popcount(mask));
        if (k >= best) continue;
        std::uint32_t got = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) got |= covers[i];
        if (got == all) best = k;
    }
    return best;
}

}  // namespace

TEST(Covering, Examples) {
    const double d = 0.1;
    EXPECT_EQ(covering_number(std::vector<HeisPoint>{{0.3, 0.2, 0.1}}, d), 1u);
    EXPECT_EQ(covering_number(std::vector<HeisPoint>{{0, 0, 0}, {3 * d, 0, 0}}, d), 2u);
    EXPECT_THROW(covering_number(std::vector<HeisPoint>{}, d), DomainError);
}

TEST(Covering, CollinearAgainstExhaustiveOracle) {
    const double d = 0.0625;  // dyadic, so neighbor distances are exactly d
    for (std::size_t n = 1; n <= 12; ++n) {
        std::vector<HeisPoint> P;
        for (std::size_t k = 0; k < n; ++k) P.emplace_back(d * static_cast<double>(k), 0, 0);
        const auto greedy = covering_number(P, d);
        const auto exact = min_cover_bruteforce(P, d);
        EXPECT_EQ(exact, (n + 2) / 3);
        EXPECT_GE(greedy, exact);
        EXPECT_LE(greedy, 2 * exact);
        EXPECT_GE(3 * greedy, n);
        EXPECT_LE(greedy, n);
    }
}

TEST(Covering, RandomSetsWithinFactorOfOracle) {
    CounterRng g(81);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<HeisPoint> P;
        for (int k = 0; k < 12; ++k) P.emplace_back(g.uniform(-0.3, 0.3), g.uniform(-0.3, 0.3), g.uniform(-0.05, 0.05));
        const double d = 0.15;
        const auto exact = min_cover_bruteforce(P, d);
        const auto greedy = covering_number(P, d);
        EXPECT_GE(greedy, exact);
        // greedy centers are delta-separated, and one delta-ball holds boundedly many of them
        EXPECT_LE(greedy, 16 * exact);
    }
}

TEST(Covering, MonotoneUnderPrefixesAndHalving) {
    CounterRng g(82);
    std::vector<HeisPoint> P;
    for (int k = 0; k < 3000; ++k) P.emplace_back(g.uniform(-0.5, 0.5), g.uniform(-0.5, 0.5), g.uniform(-0.1, 0.1));
    std::size_t prev = 0;
    for (std::size_t len : {10, 100, 1000, 3000}) {
        const auto n = covering_number(std::span(P).first(len), 0.1);
        EXPECT_GE(n, prev);
        prev = n;
    }
    prev = 0;
    for (double d : {0.4, 0.2, 0.1, 0.05}) {
        const auto n = covering_number(P, d);
        EXPECT_GE(n, prev);
        prev = n;
    }
}

TEST(Verify, SingleBallArithmetic) {
    BallFamily F;
    F.delta = 0.125;
    F.claimed_t = 3;
    F.claimed_C = 2;
    F.centers = {{0.1, 0.2, 0.0}};
    const auto rep = verify_delta_t_set(F);
    EXPECT_NEAR(rep.max_violation_ratio, std::pow(F.delta, -3.0) / F.claimed_C, 1e-9);
    EXPECT_EQ(rep.witness_radius, F.delta);
    EXPECT_FALSE(rep.passes());
    F.claimed_C = std::pow(F.delta, -3.0);
    EXPECT_TRUE(verify_delta_t_set(F).passes());
}

TEST(Verify, ConcentratedFamilyFails) {
    // all balls of the grid inside B(0, 10 delta), claimed t = 3 and C = 1
    const double d = 1.0 / 32;
    BallFamily F;
    F.delta = d;
    F.claimed_t = 3;
    F.claimed_C = 1;
    for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; ++j)
            for (int k = -40; k <= 40; ++k) {
                const HeisPoint p(i * d, j * d, k * d * d);
                if (koranyi_norm(p) <= 10 * d) F.centers.push_back(p);
            }
    const auto rep = verify_delta_t_set(F);
    EXPECT_FALSE(rep.passes());
    EXPECT_GT(rep.max_violation_ratio, 1.0);
    EXPECT_GE(rep.witness_radius, d);
    EXPECT_LE(rep.witness_radius, 16 * d);
}

TEST(Lattice, CountAndSeparation) {
    const double d = 1.0 / 16;
    const auto F = gen_heis_lattice(d);
    const double ideal = std::pow(d, -4.0);
    EXPECT_GE(static_cast<double>(F.size()), ideal / 4);
    EXPECT_LE(static_cast<double>(F.size()), ideal * 4);
    const auto chk = check_family(F);
    EXPECT_TRUE(chk.ok());
    EXPECT_GE(chk.min_separation, d);
    EXPECT_FALSE(gen_heis_lattice(0.5).centers.empty());
    EXPECT_THROW(gen_heis_lattice(0.0), DomainError);
    EXPECT_THROW(gen_heis_lattice(0.75), DomainError);
}

TEST(Lattice, SlabIsThreeDimensional) {
    for (int k = 3; k <= 5; ++k) {
        const double d = std::ldexp(1.0, -k);
        const auto F = gen_heis_lattice(d, 0.0);
        EXPECT_EQ(F.claimed_t, 3.0);
        EXPECT_LE(F.claimed_C, 8.0);
        EXPECT_TRUE(check_family(F).ok());
        const auto rep = verify_delta_t_set(F);
        EXPECT_TRUE(rep.passes()) << "delta 2^-" << k << " ratio " << rep.max_violation_ratio;
    }
}

TEST(Sharpness, Examples) {
    const auto taxis = gen_sharpness_example(SharpnessKind::t_axis_subset, {1.0 / 64, 2.0, 8.0});
    EXPECT_GE(taxis.size(), 2048u);
    EXPECT_LE(taxis.size(), 8192u);
    EXPECT_TRUE(check_family(taxis).ok());

    const auto line = gen_sharpness_example(SharpnessKind::horizontal_line, {0.25, 1.0, 8.0});
    ASSERT_EQ(line.size(), 9u);
    for (std::size_t i = 0; i < line.size(); ++i) EXPECT_EQ(line.centers[i], HeisPoint(0.25 * (static_cast<double>(i) - 4), 0, 0));
    EXPECT_EQ(line.claimed_t, 1.0);

    const auto prod = gen_sharpness_example(SharpnessKind::product_K0xR, {1.0 / 16, 2.5, 8.0});
    EXPECT_EQ(prod.claimed_t, 2.5);
    EXPECT_TRUE(check_family(prod).ok());
    EXPECT_TRUE(verify_delta_t_set(prod).passes());

    EXPECT_THROW(gen_sharpness_example(SharpnessKind::t_axis_subset, {0.1, 2.5, 8.0}), DomainError);
    EXPECT_THROW(gen_sharpness_example(SharpnessKind::product_K0xR, {0.1, 1.5, 8.0}), DomainError);
    EXPECT_THROW(parse_sharpness_kind("nope"), DomainError);
}

TEST(Sharpness, TAxisSubsetsVerifyAtClaimedDimension) {
    for (double s : {1.0, 1.5, 2.0}) {
        const auto F = gen_sharpness_example(SharpnessKind::t_axis_subset, {1.0 / 32, s, 8.0});
        EXPECT_TRUE(check_family(F).ok());
        EXPECT_TRUE(verify_delta_t_set(F).passes()) << s;
    }
}

TEST(Cantor, DimensionOfCounts) {
    for (double dim : {0.25, 0.5, 0.75}) {
        const auto a = cantor_points(0, 1, dim, std::pow(4.0, -5)).size();
        const auto b = cantor_points(0, 1, dim, std::pow(4.0, -7)).size();
        EXPECT_NEAR(std::log(static_cast<double>(b) / static_cast<double>(a)) / std::log(16.0), dim, 0.1);
    }
    EXPECT_EQ(cantor_points(0, 1, 0.0, 0.01).size(), 1u);
    EXPECT_THROW(cantor_points(0, 1, 1.5, 0.1), DomainError);
}
