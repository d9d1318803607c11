#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "heis/constants.hpp"
#include "heis/io.hpp"
#include "heis/plates.hpp"
#include "heis/rng.hpp"

using namespace heis;

namespace {

std::vector<ManifestEntry> manifest() {
    std::ifstream in(std::string(HEIS_FIXTURES) + "/constants.txt");
    return read_manifest(in);
}

HeisPoint random_center(CounterRng& g) { return detail::sample_center(g, 0.9); }

}  // namespace

TEST(PlateRect, Membership) {
    const PlateRect R{0.5, 0.1};
    EXPECT_TRUE(R.contains(0.1, 0.01 - 0.05));
    EXPECT_FALSE(R.contains(0.11, -0.05));
    EXPECT_FALSE(R.contains(0.0, 0.011));
}

TEST(Plates, Examples) {
    const double r = 0.1;
    EXPECT_TRUE(plate_contains(ModifiedPlate(0, 0, 0, r), HeisPoint(1, 0, 0)));
    EXPECT_TRUE(plate_contains(Plate(0, 0, 0, r), HeisPoint(0, r, r * r)));
    EXPECT_FALSE(plate_contains(ModifiedPlate(0, 0, 0, r), HeisPoint(0, 2 * r, 0)));
    EXPECT_FALSE(plate_contains(Plate(0, 0, 0, r), HeisPoint(1.5, 0, 0)));
    EXPECT_TRUE(plate_contains(Plate(0, 0, 0, r, 2.0), HeisPoint(1.5, 0, 0)));
    EXPECT_THROW(Plate(0, 0, 0, 0), DomainError);
    EXPECT_THROW(ModifiedPlate(0, 0, 0, -1), DomainError);
}

TEST(Plates, SliceAtZeroIsTranslatedRectangle) {
    CounterRng g(71);
    for (int i = 0; i < 2000; ++i) {
        const Plate P(g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(0.01, 0.5));
        const double w1 = g.uniform(-0.6, 0.6), w2 = g.uniform(-0.3, 0.3);
        EXPECT_EQ(plate_contains(P, HeisPoint(0, P.u + w1, P.v + w2)), (PlateRect{P.y, P.r}.contains(w1, w2, plate_slack(P.r))));
    }
}

TEST(Plates, ClosedFormAgreesWithScan) {
    CounterRng g(72);
    int inside = 0, disagree = 0;
    for (int i = 0; i < 20000; ++i) {
        const ModifiedPlate P(g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(0.01, 0.5));
        const double s = g.uniform(-2, 2);
        const HeisPoint q(s, P.u - s * P.y + g.uniform(-2, 2) * P.r * (1 + std::abs(s)),
                          P.v + 0.5 * s * P.y * P.y + g.uniform(-3, 3) * P.r * P.r * (1 + std::abs(s)) + g.uniform(-1, 1) * P.r * std::abs(s) * std::abs(P.y));
        const bool exact = plate_contains(P, q), scan = plate_contains_scan(P, q);
        inside += exact;
        if (exact != scan) {
            // the scan works to a residual tolerance; disagreements must sit on the boundary
            ++disagree;
            EXPECT_TRUE(plate_contains(ModifiedPlate(P.u, P.v, P.y, P.r * (1 + 1e-6)), q));
        }
    }
    EXPECT_GT(inside, 1000);
    EXPECT_LT(disagree, 20);
}

TEST(Plates, VolumeByMonteCarlo) {
    CounterRng g(73);
    for (double y : {-0.8, 0.0, 0.5}) {
        const double r = 0.2;
        const Plate P(0.1, -0.2, y, r);
        // per slice, a box around the sheared rectangle centered on the central ray
        const double hy = r, ht = r * r + std::abs(y) * r;
        const int n = 400000;
        int hits = 0;
        for (int i = 0; i < n; ++i) {
            const double s = g.uniform(-1, 1);
            hits += plate_contains(P, HeisPoint(s, P.u - s * y + g.uniform(-hy, hy), P.v + 0.5 * s * y * y + g.uniform(-ht, ht)));
        }
        const double vol = 2.0 * (2 * hy) * (2 * ht) * hits / n;
        EXPECT_NEAR(vol, plate_volume(r), 0.02 * plate_volume(r));
    }
}

TEST(BallToPlate, Examples) {
    const auto P = ball_to_modified_plate(HeisBall({0.5, 0.5, 0.125}, 0.1));
    EXPECT_EQ(P.u, 0.5);
    EXPECT_EQ(P.v, 0.0);
    EXPECT_EQ(P.y, 0.5);
    EXPECT_EQ(P.r, 0.2);
    const auto P0 = ball_to_modified_plate(HeisBall({0, 0, 0}, 0.25));
    EXPECT_EQ(P0.u, 0.0);
    EXPECT_EQ(P0.v, 0.0);
    EXPECT_EQ(P0.r, 0.5);
    EXPECT_THROW(ball_to_modified_plate(HeisBall({1, 2, 1}, 0.1)), DomainError);
    EXPECT_THROW(ball_to_modified_plate(HeisBall({0, 0, 0}, 0.6)), DomainError);
}

TEST(BallToPlate, FirstInclusionIsExact) {
    CounterRng g(74);
    for (int b = 0; b < 100; ++b) {
        const HeisBall B(random_center(g), std::ldexp(1.0, -2 - b % 5));
        const auto P = ball_to_modified_plate(B);
        for (int k = 0; k < 1000; ++k) {
            const auto ray = dual_ray(detail::sample_in_ball(g, B.center, B.radius));
            // sample the ray inside the Euclidean ball of radius 2
            const double s = g.uniform(-2, 2);
            const auto q = ray.at(s);
            if (q.x * q.x + q.y * q.y + q.t * q.t > 4) continue;
            ASSERT_TRUE(plate_contains(P, q)) << b << " " << k;
        }
    }
}

TEST(PlateToBall, RoundTripAndRadius) {
    CounterRng g(75);
    for (int i = 0; i < 100; ++i) {
        const HeisBall B(random_center(g), 0.1);
        const auto back = plate_to_ball(ball_to_modified_plate(B), 1.0);
        EXPECT_NEAR(back.center.x, B.center.x, 1e-15);
        EXPECT_NEAR(back.center.y, B.center.y, 1e-15);
        EXPECT_NEAR(back.center.t, B.center.t, 1e-15);
        EXPECT_NEAR(back.radius, B.radius, 1e-15);
    }
    EXPECT_THROW(plate_to_ball(ModifiedPlate(0, 0, 0, 0.1), 0.5), DomainError);
    EXPECT_EQ(plate_to_ball(ModifiedPlate(0, 0, 0, 0.1), 3.0).radius, 3.0 * 0.05);
}

TEST(SameDirection, ExamplesAndErrors) {
    const HeisBall B({0.2, 0.1, 0.05}, 1.0 / 64);
    EXPECT_EQ(same_direction_separation(B, B).value(), 0.0);
    const HeisBall far({-0.5, 0.1, 0.1}, 1.0 / 64);
    EXPECT_FALSE(same_direction_separation(B, far).has_value());
    EXPECT_THROW(same_direction_separation(B, HeisBall({0.2, 0.5, 0.05}, 1.0 / 64)), DomainError);
    EXPECT_THROW(same_direction_separation(B, HeisBall({0.2, 0.1, 0.05}, 1.0 / 32)), DomainError);
}

TEST(DirectionBin, RoundsHalfAwayFromZero) {
    const double d = 0.25;
    EXPECT_EQ(direction_bin(HeisBall({0, 0, 0}, 0.1), d), 0);
    EXPECT_EQ(direction_bin(HeisBall({0, 1.5 * d, 0}, 0.1), d), 2);
    EXPECT_EQ(direction_bin(HeisBall({0, -1.5 * d, 0}, 0.1), d), -2);
    EXPECT_EQ(direction_bin(HeisBall({0, -1, 0}, 0.1), d), -4);
    EXPECT_THROW(direction_bin(HeisBall({0, 1.5, 0}, 0.1), d), DomainError);
}

TEST(Constants, RegressionBounds) {
    const auto m = manifest();
    EXPECT_LE(measure_plate_to_ball_C(200, 200, 3).value, 1.2 * manifest_get(m, "plate_to_ball_C").value);
    EXPECT_LE(measure_recovery_C(5000, 3).value, 1.2 * manifest_get(m, "recovery_C").value);
    EXPECT_GE(measure_sandwich_c(200, 200, 3).value, 0.8 * manifest_get(m, "sandwich_c").value);
    EXPECT_LE(measure_tube_C(200, 200, 3).value, 1.2 * manifest_get(m, "tube_C").value);
    EXPECT_LE(measure_same_direction_C(1000, 3).value, 1.2 * manifest_get(m, "same_direction_C").value);
}

TEST(Constants, SandwichHoldsAtRecordedConstant) {
    // points of Pi_{c r}, |x| <= 2, lie in the plate of scale r with x-range 2; points of
    // that plate lie in Pi_r
    const double c = manifest_get(manifest(), "sandwich_c").value;
    // the supremum is 1/3 (w1 can grow by 2r, the shear adds r^2), so c must not exceed it by much
    EXPECT_LE(c, 0.35);
    CounterRng g(76);
    for (int i = 0; i < 1000; ++i) {
        const double r = g.uniform(0.01, 0.5);
        const ModifiedPlate inner(g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1), (1.0 / 3.0) * r);
        const Plate mid(inner.u, inner.v, inner.y, r, 2.0);
        const ModifiedPlate outer(inner.u, inner.v, inner.y, r);
        for (int k = 0; k < 100; ++k) {
            const auto q = detail::sample_in_modified_plate(g, inner, 2.0);
            ASSERT_TRUE(plate_contains(mid, q));
            const double s = g.uniform(-2, 2), w1 = g.uniform(-r, r), w2 = g.uniform(-r * r, r * r) - inner.y * w1;
            const HeisPoint p(s, mid.u + w1 - s * mid.y, mid.v + w2 + 0.5 * s * mid.y * mid.y);
            ASSERT_TRUE(plate_contains(mid, p));
            ASSERT_TRUE(plate_contains(outer, p));
        }
    }
}
