#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "heis/cinematic.hpp"
#include "heis/core.hpp"
#include "heis/duality.hpp"
#include "heis/io.hpp"
#include "heis/plates.hpp"
#include "heis/rng.hpp"

// Sampling oracles for constants that are only known to exist. Each returns a manifest
// entry (value, sample count, seed, short description of the oracle).
namespace heis {

namespace detail {

inline HeisPoint sample_in_ball(CounterRng& g, const HeisPoint& c, double r) {
    for (;;) {
        const HeisPoint q(g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-0.25, 0.25));
        if (koranyi_norm4(q) <= 1.0) return group_mul(c, dilate(r, q));
    }
}

// Center with norm <= max_norm and |y| <= 1.
inline HeisPoint sample_center(CounterRng& g, double max_norm) { return sample_in_ball(g, {}, max_norm); }

// Point of the modified plate: (0, u, v) + (0, w) + L_{y'}(s) with w in R_r(y).
inline HeisPoint sample_in_modified_plate(CounterRng& g, const ModifiedPlate& P, double s_max) {
    const double s = g.uniform(-s_max, s_max);
    const double yp = P.y + g.uniform(-P.r, P.r);
    const double w1 = g.uniform(-P.r, P.r);
    const double w2 = g.uniform(-P.r * P.r, P.r * P.r) - P.y * w1;
    return HeisPoint(s, P.u + w1 - s * yp, P.v + w2 + 0.5 * s * yp * yp);
}

}  // namespace detail

// Inflation C with every sampled ray of ball_to_modified_plate(B) dual to a point of B(c, C r).
inline ManifestEntry measure_plate_to_ball_C(std::uint64_t balls, std::uint64_t rays_per_ball, std::uint64_t seed) {
    const CounterRng base(seed, hash_key("plate_to_ball_C"));
    double worst = 0.0;
    for (std::uint64_t i = 0; i < balls; ++i) {
        CounterRng g = base.split(i);
        const HeisPoint c = detail::sample_center(g, 0.9);
        const double r = std::ldexp(1.0, -2 - static_cast<int>(g.uniform() * 5.0));
        const ModifiedPlate P = ball_to_modified_plate(HeisBall(c, r));
        for (std::uint64_t k = 0; k < rays_per_ball; ++k) {
            const double yp = P.y + g.uniform(-P.r, P.r);
            const double w1 = g.uniform(-P.r, P.r);
            const double w2 = g.uniform(-P.r * P.r, P.r * P.r) - P.y * w1;
            const HeisPoint p = point_of_ray(LightRay{P.u + w1, P.v + w2, yp});
            worst = std::max(worst, heis_dist(p, c) / r);
        }
    }
    return {"plate_to_ball_C", worst, balls * rays_per_ball, seed,
            "max d(dual point of a sampled plate ray, ball center) / r over random balls, r in 2^-6..2^-2"};
}

// Recovery constant: rays that stay inside the dual of B(q, r) on the unit ball come from
// points of B(q, C r).
inline ManifestEntry measure_recovery_C(std::uint64_t trials, std::uint64_t seed, std::uint64_t ray_points = 48) {
    const CounterRng base(seed, hash_key("recovery_C"));
    double worst = 0.0;
    std::uint64_t accepted = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        CounterRng g = base.split(i);
        const double r = std::ldexp(1.0, -5 - static_cast<int>(g.uniform() * 3.0));
        const HeisPoint q = detail::sample_center(g, 0.05);
        const HeisPoint p = detail::sample_in_ball(g, q, 3.0 * r);
        if (koranyi_norm(p) > 0.1) continue;
        const LightRay ray = dual_ray(p);
        // direction (1, -y, y^2/2); parameter range of the ray inside the Euclidean unit ball
        const double dy = -ray.y, dt = 0.5 * ray.y * ray.y;
        const double aa = 1.0 + dy * dy + dt * dt, bb = ray.u * dy + ray.v * dt, cc = ray.u * ray.u + ray.v * ray.v - 1.0;
        const double disc = bb * bb - aa * cc;
        if (disc <= 0.0) continue;
        const double s0 = (-bb - std::sqrt(disc)) / aa, s1 = (-bb + std::sqrt(disc)) / aa;
        const HeisBall B(q, r);
        bool inside = true;
        for (std::uint64_t k = 0; k <= ray_points && inside; ++k) {
            const double s = s0 + (s1 - s0) * static_cast<double>(k) / static_cast<double>(ray_points);
            inside = in_dual_of_ball(HeisPoint(s, ray.u + s * dy, ray.v + s * dt), B);
        }
        if (!inside) continue;
        ++accepted;
        worst = std::max(worst, heis_dist(p, q) / r);
    }
    return {"recovery_C", worst, accepted, seed,
            "max d(p, q) / r over sampled p with norm <= 1/10 whose ray in B(1) stays in the dual of B(q, r)"};
}

// Largest c with Pi_{c r} cut to |x| <= 2 inside the plate P_r(y) with x-range 2.
inline ManifestEntry measure_sandwich_c(std::uint64_t plates, std::uint64_t points_per_plate, std::uint64_t seed) {
    const CounterRng base(seed, hash_key("sandwich_c"));
    double worst = 0.0;  // max plate scale needed per unit modified-plate scale
    for (std::uint64_t i = 0; i < plates; ++i) {
        CounterRng g = base.split(i);
        const ModifiedPlate P(g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(0.01, 0.5));
        for (std::uint64_t k = 0; k < points_per_plate; ++k) {
            const HeisPoint q = detail::sample_in_modified_plate(g, P, 2.0);
            const double w1 = q.y - P.u + q.x * P.y;
            const double w2 = q.t - P.v - 0.5 * q.x * P.y * P.y;
            const double need = std::max(std::abs(w1), std::sqrt(std::abs(w2 + P.y * w1)));
            worst = std::max(worst, need / P.r);
        }
    }
    return {"sandwich_c", 1.0 / worst, plates * points_per_plate, seed,
            "1 / max over sampled points of Pi_r, |x| <= 2, of the smallest plate scale containing them, over r"};
}

// Euclidean distance from Pi_r cut to |x| <= 1 to the central ray, over r.
inline ManifestEntry measure_tube_C(std::uint64_t plates, std::uint64_t points_per_plate, std::uint64_t seed) {
    const CounterRng base(seed, hash_key("tube_C"));
    double worst = 0.0;
    for (std::uint64_t i = 0; i < plates; ++i) {
        CounterRng g = base.split(i);
        const ModifiedPlate P(g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(0.01, 0.5));
        const double d[3] = {1.0, -P.y, 0.5 * P.y * P.y};
        const double dn = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        for (std::uint64_t k = 0; k < points_per_plate; ++k) {
            const HeisPoint q = detail::sample_in_modified_plate(g, P, 1.0);
            const double v[3] = {q.x, q.y - P.u, q.t - P.v};
            const double along = (v[0] * d[0] + v[1] * d[1] + v[2] * d[2]) / dn;
            const double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
            worst = std::max(worst, std::sqrt(std::max(0.0, n2 - along * along)) / P.r);
        }
    }
    return {"tube_C", worst, plates * points_per_plate, seed,
            "max Euclidean distance / r from sampled points of Pi_r, |x| <= 1, to its central ray"};
}

// max d(p1, p2) / r over same-direction pairs whose dual plates meet in B(1).
inline ManifestEntry measure_same_direction_C(std::uint64_t pairs, std::uint64_t seed, double r = 1.0 / 64) {
    const CounterRng base(seed, hash_key("same_direction_C"));
    double worst = 0.0;
    std::uint64_t meeting = 0;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        CounterRng g = base.split(i);
        const HeisPoint p1 = detail::sample_center(g, 0.8);
        HeisPoint p2;
        do {
            p2 = detail::sample_in_ball(g, p1, 12.0 * r);
        } while (std::abs(p2.y - p1.y) > r);
        if (koranyi_norm(p2) > 1.0) continue;
        const auto ratio = same_direction_separation(HeisBall(p1, r), HeisBall(p2, r));
        if (!ratio) continue;
        ++meeting;
        worst = std::max(worst, *ratio);
    }
    return {"same_direction_C", worst, meeting, seed,
            "max d(p1, p2) / r over pairs with |y1 - y2| <= r whose dual plates meet in B(1), r = 2^-6"};
}

// min over pairs in B((1, 0, 0), 0.25) of the 720-point C^2 grid separation / |p - q|.
inline ManifestEntry measure_cinematic_c(std::uint64_t pairs, std::uint64_t seed) {
    const CounterRng base(seed, hash_key("cinematic_c"));
    const auto grid = uniform_theta_grid(720);
    double best = INFINITY;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        CounterRng g = base.split(i);
        const HeisPoint p = detail::sample_in_ball(g, {1, 0, 0}, 0.25), q = detail::sample_in_ball(g, {1, 0, 0}, 0.25);
        if (p == q) continue;
        best = std::min(best, cinematic_separation(p, q, grid));
    }
    return {"cinematic_c", best, pairs, seed, "min over pairs in B((1,0,0), 1/4) of min_theta sum_k |f_p^(k) - f_q^(k)| / |p - q|"};
}

// max over pairs in B((1, 0, 0), 0.5) of the C^2 grid distance / |p - q|.
inline ManifestEntry measure_cinematic_lipschitz(std::uint64_t pairs, std::uint64_t seed) {
    const CounterRng base(seed, hash_key("cinematic_lipschitz"));
    const auto grid = uniform_theta_grid(720);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        CounterRng g = base.split(i);
        const HeisPoint p = detail::sample_in_ball(g, {1, 0, 0}, 0.5), q = detail::sample_in_ball(g, {1, 0, 0}, 0.5);
        if (p == q) continue;
        worst = std::max(worst, cinematic_lipschitz_ratio(p, q, grid));
    }
    return {"cinematic_lipschitz", worst, pairs, seed, "max over pairs in B((1,0,0), 1/2) of max_theta sum_k |f_p^(k) - f_q^(k)| / |p - q|"};
}

// Area of pi_e(B(0, 1)) (the same for every e). Column a of the image is
// [-m(a), m(a)] with m(a) = max_x sqrt(1 - (x^2 + a^2)^2) / 4 + x a / 2, found by a dense scan.
inline ManifestEntry measure_ball_image_area(std::uint64_t columns) {
    const std::uint64_t nx = 4000;
    std::vector<double> widths(columns);
    for (std::uint64_t i = 0; i < columns; ++i) {
        const double a = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(columns);
        const double xr = std::sqrt(std::max(0.0, 1.0 - a * a));
        double m = -INFINITY;
        for (std::uint64_t k = 0; k <= nx; ++k) {
            const double x = -xr + 2.0 * xr * static_cast<double>(k) / static_cast<double>(nx);
            const double z2 = x * x + a * a;
            m = std::max(m, 0.25 * std::sqrt(std::max(0.0, 1.0 - z2 * z2)) + 0.5 * x * a);
        }
        widths[i] = 2.0 * m * 2.0 / static_cast<double>(columns);
    }
    return {"ball_image_area", pairwise_sum(widths), columns * nx, 0, "area of pi_e(B(0,1)) by column maxima over a dense x-scan"};
}

// Ratio of the X-ray side to the projection side for a smoothed ball indicator.
inline ManifestEntry measure_xray_ratio(std::uint64_t n) {
    auto f = [](const HeisPoint& p) {
        const double rho = std::sqrt(p.x * p.x + p.y * p.y + p.t * p.t);
        return rho >= 1.0 ? 0.0 : std::pow(1.0 - rho * rho, 2.0);
    };
    const auto rep = xray_parseval_check(f, 1.0, 16, n);
    return {"xray_ratio", rep.ratio, n, 0, "X-ray side over projection side for (1 - |p|^2)^2 on the Euclidean unit ball, midpoint grids"};
}

// Full manifest at the default sample sizes.
inline std::vector<ManifestEntry> derive_constants(std::uint64_t seed = 1) {
    return {measure_plate_to_ball_C(1000, 1000, seed),
            measure_recovery_C(20000, seed),
            measure_sandwich_c(1000, 1000, seed),
            measure_tube_C(1000, 1000, seed),
            measure_same_direction_C(10000, seed),
            measure_cinematic_c(10000, seed),
            measure_cinematic_lipschitz(10000, seed),
            measure_ball_image_area(4000),
            measure_xray_ratio(48)};
}

}  // namespace heis
