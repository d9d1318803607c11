#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "heis/core.hpp"
#include "heis/parallel.hpp"
#include "heis/rng.hpp"

namespace heis {

// {(a s + b, s, (b / 2) s + c) : s real}
struct HorizontalLine {
    double a = 0.0, b = 0.0, c = 0.0;

    HeisPoint at(double s) const { return HeisPoint(a * s + b, s, 0.5 * b * s + c); }
    // Euclidean speed of the parametrization.
    double speed() const noexcept { return std::sqrt(1.0 + a * a + 0.25 * b * b); }
};

// (0, u, v) + L_y with L_y(s) = (s, -s y, s y^2 / 2)
struct LightRay {
    double u = 0.0, v = 0.0, y = 0.0;

    HeisPoint at(double s) const { return HeisPoint(s, u - s * y, v + 0.5 * s * y * y); }
    std::array<double, 3> direction() const noexcept { return {1.0, -y, 0.5 * y * y}; }
};

inline HorizontalLine line_of(const HeisPoint& pstar) noexcept { return {pstar.x, pstar.y, pstar.t}; }

inline LightRay dual_ray(const HeisPoint& p) noexcept { return {p.x, p.t - 0.5 * p.x * p.y, p.y}; }

// Inverse of dual_ray: the point (u, 0, v) * (0, y, 0).
inline HeisPoint point_of_ray(const LightRay& r) { return HeisPoint(r.u, r.y, r.v + 0.5 * r.u * r.y); }

inline constexpr double kIncidenceTol = 1e-10;

// max |residual| of the two linear relations x = a y + b, t = (b / 2) y + c
inline double point_line_residual(const HeisPoint& p, const HorizontalLine& l) noexcept {
    return std::max(std::abs(p.x - (l.a * p.y + l.b)), std::abs(p.t - (0.5 * l.b * p.y + l.c)));
}

// pstar = (a, b, c) on the ray iff it equals (0, u, v) + L_y(a)
inline double point_ray_residual(const HeisPoint& pstar, const LightRay& r) noexcept {
    const double s = pstar.x;
    return std::max(std::abs(pstar.y - (r.u - s * r.y)), std::abs(pstar.t - (r.v + 0.5 * s * r.y * r.y)));
}

inline bool incident_point_line(const HeisPoint& p, const HorizontalLine& l, double tol = kIncidenceTol) noexcept {
    return point_line_residual(p, l) <= tol;
}

inline bool incident_point_ray(const HeisPoint& pstar, const LightRay& r, double tol = kIncidenceTol) noexcept {
    return point_ray_residual(pstar, r) <= tol;
}

// min over the line of d(., c)^4
inline double line_min_dist4(const HorizontalLine& l, const HeisPoint& c) noexcept {
    // l = (b, 0, c) * {s (a, 1)}, so reparametrize by arclength in the xy-plane.
    const double n = std::sqrt(1.0 + l.a * l.a);
    HeisPoint w;
    w.x = l.b;
    w.t = l.c;
    return horizontal_line_min_dist4(w, l.a / n, 1.0 / n, c);
}

inline bool line_meets_ball(const HorizontalLine& l, const HeisBall& B) noexcept {
    const double r2 = B.radius * B.radius;
    return line_min_dist4(l, B.center) <= r2 * r2 * (1.0 + 1e-14);
}

// pstar belongs to the dual of the ball: some point of the ball has pstar on its ray.
inline bool in_dual_of_ball(const HeisPoint& pstar, const HeisBall& B) noexcept {
    return line_meets_ball(line_of(pstar), B);
}

struct Box3 {
    std::array<double, 3> lo{}, hi{};

    double volume() const noexcept { return (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]); }
};

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Lebesgue measure of {p in box : predicate(line_of(p))}.
inline MonteCarloEstimate line_measure_m(const Box3& box, const std::function<bool(const HorizontalLine&)>& predicate,
                                         std::uint64_t samples = 100000, std::uint64_t seed = 1) {
    const double vol = box.volume();
    if (!(vol > 0.0) || !std::isfinite(vol)) throw DomainError("line_measure_m: region has zero volume");
    if (samples < 2) throw DomainError("line_measure_m: need at least two samples");
    const CounterRng base(seed, hash_key("line_measure_m"));
    const std::size_t grain = 4096;
    const double hits = parallel_sum(samples, grain, [&](std::size_t i) {
        CounterRng g = base.split(i);
        HorizontalLine l{g.uniform(box.lo[0], box.hi[0]), g.uniform(box.lo[1], box.hi[1]),
                         g.uniform(box.lo[2], box.hi[2])};
        return predicate(l) ? 1.0 : 0.0;
    });
    const double n = static_cast<double>(samples);
    const double frac = hits / n;
    return {vol * frac, vol * std::sqrt(frac * (1.0 - frac) / (n - 1.0)), samples, seed};
}

// Piecewise constant density on a box, zero outside.
class GridDensity {
public:
    GridDensity(Box3 box, std::array<std::size_t, 3> n) : box_(box), n_(n), v_(n[0] * n[1] * n[2], 0.0) {
        if (!(box.volume() > 0.0) || n[0] == 0 || n[1] == 0 || n[2] == 0)
            throw DomainError("GridDensity: degenerate grid");
    }

    template <class F>
    static GridDensity sample(Box3 box, std::array<std::size_t, 3> n, F&& f) {
        GridDensity g(box, n);
        for (std::size_t i = 0; i < n[0]; ++i)
            for (std::size_t j = 0; j < n[1]; ++j)
                for (std::size_t k = 0; k < n[2]; ++k) g.v_[g.index(i, j, k)] = f(g.cell_center(i, j, k));
        return g;
    }

    HeisPoint cell_center(std::size_t i, std::size_t j, std::size_t k) const {
        return HeisPoint(box_.lo[0] + (static_cast<double>(i) + 0.5) * step(0),
                         box_.lo[1] + (static_cast<double>(j) + 0.5) * step(1),
                         box_.lo[2] + (static_cast<double>(k) + 0.5) * step(2));
    }

    double operator()(const HeisPoint& p) const noexcept {
        const double c[3] = {p.x, p.y, p.t};
        std::size_t idx[3];
        for (int d = 0; d < 3; ++d) {
            if (c[d] < box_.lo[d] || c[d] >= box_.hi[d]) return 0.0;
            idx[d] = std::min(n_[d] - 1, static_cast<std::size_t>((c[d] - box_.lo[d]) / step(d)));
        }
        return v_[index(idx[0], idx[1], idx[2])];
    }

    double& at(std::size_t i, std::size_t j, std::size_t k) { return v_[index(i, j, k)]; }
    const Box3& box() const noexcept { return box_; }
    double step(int d) const noexcept { return (box_.hi[d] - box_.lo[d]) / static_cast<double>(n_[d]); }

private:
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept { return (i * n_[1] + j) * n_[2] + k; }

    Box3 box_;
    std::array<std::size_t, 3> n_;
    std::vector<double> v_;
};

// Integral of f along the line over parameters [s_min, s_max], midpoint rule with n nodes,
// weighted by the Euclidean arclength.
template <class Density>
double xray_transform(const Density& f, const HorizontalLine& l, double s_min, double s_max, std::size_t n = 512) {
    if (!(s_max > s_min) || n == 0) throw DomainError("xray_transform: empty parameter range");
    const double h = (s_max - s_min) / static_cast<double>(n);
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = f(l.at(s_min + (static_cast<double>(i) + 0.5) * h));
    return pairwise_sum(vals) * h * l.speed();
}

struct ParsevalReport {
    double projection_side = 0.0;  // direction average of |pi_e mu_f|_2^2
    double xray_side = 0.0;        // integral of (Xf)^2 over lines with |a| <= 1
    double ratio = 0.0;
};

// Both sides of the projection / X-ray comparison for a density supported in the
// Euclidean ball of the given radius about the origin.
template <class Density>
ParsevalReport xray_parseval_check(const Density& f, double support_radius, std::size_t directions = 16,
                                   std::size_t n = 48) {
    const double R = support_radius;
    // pi_e mu_f(a, b) = int f((a Je, b) * (s e, 0)) ds, since (a, b, s) -> (a Je, b) * (s e, 0)
    // has unit Jacobian.
    const double bmax = R + 0.5 * R * R;
    const double da = 2.0 * R / static_cast<double>(n), db = 2.0 * bmax / static_cast<double>(n);
    const double ds = 2.0 * R / static_cast<double>(n);
    std::vector<double> per_dir(directions);
    for (std::size_t k = 0; k < directions; ++k) {
        const double th = std::numbers::pi * 2.0 * static_cast<double>(k) / static_cast<double>(directions);
        const double ex = std::cos(th), ey = std::sin(th);
        per_dir[k] = parallel_sum(n * n, 64, [&](std::size_t idx) {
            const double a = -R + (static_cast<double>(idx / n) + 0.5) * da;
            const double b = -bmax + (static_cast<double>(idx % n) + 0.5) * db;
            double fiber = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                const double s = -R + (static_cast<double>(m) + 0.5) * ds;
                // (a Je, b) * (s e, 0)
                fiber += f(HeisPoint(-a * ey + s * ex, a * ex + s * ey, b - 0.5 * a * s));
            }
            fiber *= ds;
            return fiber * fiber * da * db;
        });
    }
    ParsevalReport rep;
    rep.projection_side = pairwise_sum(per_dir) / static_cast<double>(directions);
    // Lines meeting the support: |b| <= 2R, |c| <= R + R^2 for |a| <= 1.
    const double bm = 2.0 * R, cm = R + R * R;
    const double ha = 2.0 / static_cast<double>(n), hb = 2.0 * bm / static_cast<double>(n), hc = 2.0 * cm / static_cast<double>(n);
    rep.xray_side = parallel_sum(n * n * n, 256, [&](std::size_t idx) {
        const double a = -1.0 + (static_cast<double>(idx / (n * n)) + 0.5) * ha;
        const double b = -bm + (static_cast<double>((idx / n) % n) + 0.5) * hb;
        const double c = -cm + (static_cast<double>(idx % n) + 0.5) * hc;
        const double x = xray_transform(f, HorizontalLine{a, b, c}, -R, R, n);
        return x * x * ha * hb * hc;
    });
    rep.ratio = rep.xray_side / rep.projection_side;
    return rep;
}

}  // namespace heis
