#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heis/core.hpp"
#include "heis/delta_sets.hpp"
#include "heis/parallel.hpp"
#include "heis/plates.hpp"
#include "heis/projections.hpp"
#include "heis/rng.hpp"

namespace heis {

// Uniform angles k * span / n, k = 0..n-1; span is 2 pi (full circle) or pi (half circle,
// enough for areas since pi_{-e} differs from pi_e by a reflection of W_e).
inline std::vector<double> uniform_directions(std::size_t n, bool half_circle = false) {
    if (n == 0) throw DomainError("uniform_directions: need at least one direction");
    const double span = half_circle ? std::numbers::pi : 2.0 * std::numbers::pi;
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = span * static_cast<double>(k) / static_cast<double>(n);
    return out;
}

enum class RasterMethod { exact_columns, point_cloud };
enum class PixelShape { parabolic, square };

struct RasterOptions {
    RasterMethod method = RasterMethod::exact_columns;
    // parabolic: pixel x pixel^2 cells (a square in the parabolic metric); square: pixel x pixel
    PixelShape shape = PixelShape::parabolic;
    std::size_t points_per_ball = 256;  // point_cloud only
};

// Run of covered pixels [lo, hi] in column col.
struct PixelRun {
    long col, lo, hi;
    friend bool operator<(const PixelRun& x, const PixelRun& y) noexcept {
        return x.col != y.col ? x.col < y.col : (x.lo != y.lo ? x.lo < y.lo : x.hi < y.hi);
    }
};

struct RasterImage {
    double pa = 0.0, pb = 0.0;
    std::vector<PixelRun> runs;  // disjoint, sorted
    std::size_t pixel_count = 0;

    double area() const noexcept { return static_cast<double>(pixel_count) * pa * pb; }

    // Pixel centers in W_e coordinates.
    std::vector<std::array<double, 2>> centers() const {
        std::vector<std::array<double, 2>> out;
        out.reserve(pixel_count);
        for (const auto& r : runs)
            for (long j = r.lo; j <= r.hi; ++j)
                out.push_back({(static_cast<double>(r.col) + 0.5) * pa, (static_cast<double>(j) + 0.5) * pb});
        return out;
    }
};

namespace detail {

inline std::vector<PixelRun> merge_runs(std::vector<PixelRun> runs, std::size_t& count) {
    std::sort(runs.begin(), runs.end());
    std::vector<PixelRun> out;
    for (const auto& r : runs) {
        if (!out.empty() && out.back().col == r.col && r.lo <= out.back().hi + 1)
            out.back().hi = std::max(out.back().hi, r.hi);
        else
            out.push_back(r);
    }
    count = 0;
    for (const auto& r : out) count += static_cast<std::size_t>(r.hi - r.lo + 1);
    return out;
}

// Covered pixel rows of one ball image in one column, found by search from a known interior
// point. Each column of the image of a convex set is an interval.
inline std::optional<std::pair<long, long>> column_rows(const Direction& e, const HeisBall& B, double a, double pb) {
    const HeisPoint& c = B.center;
    const double ac = c.x * e.jx() + c.y * e.jy();
    const double lam = a - ac;
    // c * (lam Je, 0) lies in the ball and projects into this column
    const double px = c.x + lam * e.jx(), py = c.y + lam * e.jy();
    const double pt = c.t + 0.5 * (c.x * lam * e.jy() - c.y * lam * e.jx());
    const double ze = px * e.ex() + py * e.ey();
    const double zj = px * e.jx() + py * e.jy();
    const double b0 = pt + 0.5 * ze * zj;
    auto inside = [&](long j) { return projected_ball_contains(e, B, a, (static_cast<double>(j) + 0.5) * pb); };
    const long j0 = static_cast<long>(std::floor(b0 / pb));
    long seed;
    if (inside(j0)) seed = j0;
    else if (inside(j0 + 1)) seed = j0 + 1;
    else if (inside(j0 - 1)) seed = j0 - 1;
    else return std::nullopt;
    auto extend = [&](long dir) {
        long good = seed, step = 1;
        while (inside(seed + dir * step)) {
            good = seed + dir * step;
            step *= 2;
        }
        long bad = seed + dir * step;
        while (std::abs(bad - good) > 1) {
            const long mid = good + (bad - good) / 2;
            if (inside(mid)) good = mid;
            else bad = mid;
        }
        return good;
    };
    return std::make_pair(extend(-1), extend(+1));
}

// Quasi-random points of the unit Koranyi ball (Halton, rejection from the bounding box).
inline std::vector<HeisPoint> unit_ball_cloud(std::size_t n) {
    std::vector<HeisPoint> out;
    out.reserve(n);
    for (std::uint64_t k = 1; out.size() < n; ++k) {
        const auto h = halton3(k);
        HeisPoint g;
        g.x = 2.0 * h.u - 1.0;
        g.y = 2.0 * h.v - 1.0;
        g.t = 0.5 * h.w - 0.25;
        if (koranyi_norm4(g) <= 1.0) out.push_back(g);
    }
    return out;
}

}  // namespace detail

// Pixels of W_e met by pi_e of the union of the balls B(c, radius), c in centers.
inline RasterImage rasterize_projection(const Direction& e, std::span<const HeisPoint> centers, double radius,
                                        double pixel, const RasterOptions& opt = {}) {
    if (!(pixel > 0.0) || !(radius > 0.0)) throw DomainError("rasterize_projection: pixel and radius must be positive");
    RasterImage img;
    img.pa = pixel;
    img.pb = opt.shape == PixelShape::parabolic ? pixel * pixel : pixel;
    const std::size_t grain = 256;
    const std::size_t nchunks = (centers.size() + grain - 1) / grain;
    std::vector<std::vector<PixelRun>> parts(nchunks);
    if (opt.method == RasterMethod::exact_columns) {
        parallel_chunks(centers.size(), grain, [&](std::size_t b, std::size_t end, std::size_t ch) {
            auto& out = parts[ch];
            for (std::size_t k = b; k < end; ++k) {
                const HeisBall B(centers[k], radius);
                const double ac = B.center.x * e.jx() + B.center.y * e.jy();
                const long i0 = static_cast<long>(std::ceil((ac - radius) / img.pa - 0.5));
                const long i1 = static_cast<long>(std::floor((ac + radius) / img.pa - 0.5));
                for (long i = i0; i <= i1; ++i) {
                    const double a = (static_cast<double>(i) + 0.5) * img.pa;
                    if (auto rows = detail::column_rows(e, B, a, img.pb)) out.push_back({i, rows->first, rows->second});
                }
            }
        });
    } else {
        const auto cloud = detail::unit_ball_cloud(std::max<std::size_t>(opt.points_per_ball, 1));
        parallel_chunks(centers.size(), grain, [&](std::size_t b, std::size_t end, std::size_t ch) {
            auto& out = parts[ch];
            for (std::size_t k = b; k < end; ++k)
                for (const auto& g : cloud) {
                    HeisPoint q;
                    q.x = radius * g.x;
                    q.y = radius * g.y;
                    q.t = radius * radius * g.t;
                    const PlanePoint w = pi_e(e, group_mul(centers[k], q));
                    const long i = static_cast<long>(std::floor(w.a / img.pa));
                    const long j = static_cast<long>(std::floor(w.b / img.pb));
                    out.push_back({i, j, j});
                }
        });
    }
    std::vector<PixelRun> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    img.runs = detail::merge_runs(std::move(all), img.pixel_count);
    return img;
}

// Area of pi_e of the union of the family's balls, by pixel counting.
inline double projection_measure(const Direction& e, const BallFamily& F, double pixel, const RasterOptions& opt = {}) {
    if (!(pixel > 0.0) || pixel > 0.5 * F.delta * (1.0 + 1e-12))
        throw DomainError("projection_measure: pixel must be positive and at most delta / 2");
    return rasterize_projection(e, F.centers, F.delta, pixel, opt).area();
}

struct DirectionScan {
    double theta_best = 0.0;
    double area_best = 0.0;
    std::vector<double> thetas;
    std::vector<double> areas;
};

inline DirectionScan best_direction_scan(const BallFamily& F, std::span<const double> thetas, double pixel,
                                         const RasterOptions& opt = {}) {
    if (thetas.empty()) throw DomainError("best_direction_scan: empty direction grid");
    DirectionScan out;
    out.thetas.assign(thetas.begin(), thetas.end());
    out.areas.reserve(thetas.size());
    for (double th : thetas) out.areas.push_back(projection_measure(Direction(th), F, pixel, opt));
    const auto it = std::max_element(out.areas.begin(), out.areas.end());
    out.area_best = *it;
    out.theta_best = out.thetas[static_cast<std::size_t>(it - out.areas.begin())];
    return out;
}

// max over test centers p and radii r = delta 2^k <= 2 of |{B : B inside B(p, r)}| / (r / delta)^3,
// counting B(c, delta) as inside when d(c, p) <= r - delta. As in verify_delta_t_set, radii
// above exact_factor * delta use an r/4-net of centers and radius 5r/4 (an upper bound).
inline double nonconcentration_constant(const BallFamily& F, double exact_factor = 4.0) {
    if (F.centers.empty()) return 0.0;
    const auto idx = SpatialIndex::for_scale(F.centers, F.delta);
    double best = 0.0;
    for (double r = F.delta; r <= 2.0 * (1.0 + 1e-12); r *= 2.0) {
        std::vector<std::size_t> tests;
        double query = r - F.delta;
        if (r <= exact_factor * F.delta * (1.0 + 1e-12)) {
            tests.resize(F.size());
            for (std::size_t i = 0; i < tests.size(); ++i) tests[i] = i;
        } else {
            tests = greedy_net(F.centers, 0.25 * r);
            query = 1.25 * r - F.delta;
        }
        const double scale = std::pow(r / F.delta, 3.0);
        std::vector<double> partial((tests.size() + 63) / 64, 0.0);
        parallel_chunks(tests.size(), 64, [&](std::size_t b, std::size_t e, std::size_t c) {
            double m = 0.0;
            for (std::size_t k = b; k < e; ++k) {
                const std::size_t n = query < 0.0 ? 0 : idx.count_in_ball(F.centers[tests[k]], std::max(query, 0.0));
                m = std::max(m, static_cast<double>(std::max<std::size_t>(n, 1)));
            }
            partial[c] = m;
        });
        for (double m : partial) best = std::max(best, m / scale);
    }
    return best;
}

struct PlateEnergyOptions {
    double region_radius = 2.0;            // Euclidean ball the plates are truncated to
    std::optional<double> slice_step;      // x step; default delta
    std::optional<double> column_step;     // step across the plate; default delta
    std::optional<double> row_step;        // thin coordinate; default delta^2 / 4, at most delta^2 / 2
    std::optional<double> reference_C;     // normalize by this instead of the measured constant
    std::optional<DeltaTReport> verified;  // skip re-verification when already done
};

struct PlateEnergyReport {
    double energy = 0.0;
    double nonconcentration_C = 0.0;  // measured on the family
    double normalizing_C = 0.0;       // the constant used in the ratio
    double normalized_ratio = 0.0;    // energy / (C delta^3 |F|)
    std::size_t plates = 0;
    double verification_ratio = 0.0;
};

// Integral over the Euclidean ball of (sum over balls of the indicator of the dual modified
// plate)^2. In each slice {x = s} and column x2 the plate Pi_r(u, v, y) is exactly the
// interval of x3 given below, so each column needs one interval per plate and a prefix sum.
inline PlateEnergyReport plate_l2_energy(const BallFamily& F, const PlateEnergyOptions& opt = {}) {
    const double delta = F.delta;
    if (!(delta > 0.0)) throw DomainError("plate_l2_energy: delta must be positive");
    PlateEnergyReport rep;
    const DeltaTReport ver = opt.verified ? *opt.verified : verify_delta_t_set(F);
    rep.verification_ratio = ver.max_violation_ratio;
    if (std::abs(F.claimed_t - 3.0) > 1e-12 || !ver.passes())
        throw DomainError("plate_l2_energy: family is not a verified (delta, 3, C)-set");
    const double hs = opt.slice_step.value_or(delta);
    const double h2 = opt.column_step.value_or(delta);
    const double h3 = opt.row_step.value_or(0.25 * delta * delta);
    if (!(h3 > 0.0) || h3 > 0.5 * delta * delta * (1.0 + 1e-12))
        throw DomainError("plate_l2_energy: thin grid step must be at most delta^2 / 2");
    const double R = opt.region_radius;
    std::vector<ModifiedPlate> plates;
    plates.reserve(F.size());
    for (const auto& c : F.centers) plates.push_back(ball_to_modified_plate(HeisBall(c, delta)));
    rep.plates = plates.size();
    const long ns = static_cast<long>(std::ceil(2.0 * R / hs));
    const long ncol = static_cast<long>(std::ceil(2.0 * R / h2));
    const long nrow = static_cast<long>(std::ceil(2.0 * R / h3));
    std::vector<double> slice_energy(static_cast<std::size_t>(ns), 0.0);
    parallel_chunks(static_cast<std::size_t>(ns), 1, [&](std::size_t k, std::size_t, std::size_t) {
        const double s = -R + (static_cast<double>(k) + 0.5) * hs;
        const double disc2 = R * R - s * s;
        if (disc2 <= 0.0) return;
        std::vector<std::int32_t> diff(static_cast<std::size_t>(ncol * (nrow + 1)), 0);
        for (const auto& P : plates) {
            const double r = P.r, y = P.y;
            const double mid = P.u - s * y;
            const double half = r + r * std::abs(s);
            const long c0 = std::max(0L, static_cast<long>(std::ceil((mid - half + R) / h2 - 0.5)));
            const long c1 = std::min(ncol - 1, static_cast<long>(std::floor((mid + half + R) / h2 - 0.5)));
            for (long ci = c0; ci <= c1; ++ci) {
                const double x2 = -R + (static_cast<double>(ci) + 0.5) * h2;
                const double A = x2 - P.u;
                // admissible d = y' - y: |d| <= r and |A + s y + s d| <= r
                double d0 = -r, d1 = r;
                if (s != 0.0) {
                    double lo = (-r - A - s * y) / s, hi = (r - A - s * y) / s;
                    if (lo > hi) std::swap(lo, hi);
                    d0 = std::max(d0, lo);
                    d1 = std::min(d1, hi);
                } else if (std::abs(A) > r) {
                    continue;
                }
                if (d0 > d1) continue;
                const double sq_max = std::max(d0 * d0, d1 * d1);
                const double sq_min = (d0 <= 0.0 && d1 >= 0.0) ? 0.0 : std::min(d0 * d0, d1 * d1);
                const double K0 = P.v - y * A - 0.5 * s * y * y;
                const double e0 = 0.5 * s * (s >= 0.0 ? sq_min : sq_max);
                const double e1 = 0.5 * s * (s >= 0.0 ? sq_max : sq_min);
                const double lo3 = K0 + e0 - r * r, hi3 = K0 + e1 + r * r;
                const long r0 = std::max(0L, static_cast<long>(std::ceil((lo3 + R) / h3 - 0.5)));
                const long r1 = std::min(nrow - 1, static_cast<long>(std::floor((hi3 + R) / h3 - 0.5)));
                if (r0 > r1) continue;
                diff[static_cast<std::size_t>(ci * (nrow + 1) + r0)] += 1;
                diff[static_cast<std::size_t>(ci * (nrow + 1) + r1 + 1)] -= 1;
            }
        }
        double sum = 0.0;
        for (long ci = 0; ci < ncol; ++ci) {
            const double x2 = -R + (static_cast<double>(ci) + 0.5) * h2;
            if (x2 * x2 > disc2) continue;
            const double x3max = std::sqrt(disc2 - x2 * x2);
            std::int64_t n = 0;
            std::int64_t col = 0;
            for (long ri = 0; ri < nrow; ++ri) {
                n += diff[static_cast<std::size_t>(ci * (nrow + 1) + ri)];
                if (n == 0) continue;
                const double x3 = -R + (static_cast<double>(ri) + 0.5) * h3;
                if (std::abs(x3) <= x3max) col += n * n;
            }
            sum += static_cast<double>(col);
        }
        slice_energy[k] = sum * hs * h2 * h3;
    });
    rep.energy = pairwise_sum(slice_energy);
    rep.nonconcentration_C = nonconcentration_constant(F);
    rep.normalizing_C = opt.reference_C.value_or(rep.nonconcentration_C);
    rep.normalized_ratio = rep.energy / (rep.normalizing_C * delta * delta * delta * static_cast<double>(F.size()));
    return rep;
}

enum class PlaneMetric { euclidean, parabolic };

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> residuals;
    std::vector<double> scales;
    std::vector<std::size_t> counts;
};

// Ordinary least squares of y on x.
inline SlopeFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("ols_fit: need matching samples, at least two");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
    if (sxx == 0.0) throw DomainError("ols_fit: degenerate abscissae");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) f.residuals.push_back(y[i] - (f.intercept + f.slope * x[i]));
    return f;
}

// Greedy eps-net size of planar points in the chosen metric (parabolic: |da| + sqrt|db|).
inline std::size_t plane_covering_number(std::span<const std::array<double, 2>> pts, PlaneMetric metric, double eps) {
    if (pts.empty()) throw DomainError("plane_covering_number: empty point set");
    if (!(eps > 0.0)) throw DomainError("plane_covering_number: scale must be positive");
    const double ha = eps, hb = metric == PlaneMetric::parabolic ? eps * eps : eps;
    std::map<std::pair<long, long>, std::vector<std::size_t>> grid;
    for (std::size_t i = 0; i < pts.size(); ++i)
        grid[{static_cast<long>(std::floor(pts[i][0] / ha)), static_cast<long>(std::floor(pts[i][1] / hb))}].push_back(i);
    std::vector<std::uint8_t> covered(pts.size(), 0);
    auto dist = [&](const std::array<double, 2>& p, const std::array<double, 2>& q) {
        return metric == PlaneMetric::parabolic ? parabolic_dist(p[0], p[1], q[0], q[1])
                                                : std::hypot(p[0] - q[0], p[1] - q[1]);
    };
    std::size_t n = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (covered[i]) continue;
        ++n;
        const long ci = static_cast<long>(std::floor(pts[i][0] / ha)), cj = static_cast<long>(std::floor(pts[i][1] / hb));
        for (long a = ci - 1; a <= ci + 1; ++a)
            for (long b = cj - 1; b <= cj + 1; ++b) {
                const auto it = grid.find({a, b});
                if (it == grid.end()) continue;
                for (std::size_t j : it->second)
                    if (!covered[j] && dist(pts[i], pts[j]) <= eps) covered[j] = 1;
            }
    }
    return n;
}

// Slope of log N(eps) against log(1 / eps).
inline SlopeFit box_dimension(std::span<const std::array<double, 2>> pts, PlaneMetric metric, std::span<const double> scales) {
    if (pts.empty()) throw DomainError("box_dimension: empty point set");
    if (scales.size() < 3) throw DomainError("box_dimension: need at least three scales");
    std::vector<double> sorted(scales.begin(), scales.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() <= 0.0 || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DomainError("box_dimension: scales must be positive and distinct");
    std::vector<double> x, y;
    std::vector<std::size_t> counts;
    for (double eps : scales) {
        const std::size_t n = plane_covering_number(pts, metric, eps);
        counts.push_back(n);
        x.push_back(std::log(1.0 / eps));
        y.push_back(std::log(static_cast<double>(n)));
    }
    SlopeFit f = ols_fit(x, y);
    f.scales.assign(scales.begin(), scales.end());
    f.counts = std::move(counts);
    return f;
}

// Same estimator on the line, for the metrics |dx| and sqrt|dx|.
inline SlopeFit line_box_dimension(std::vector<double> values, bool sqrt_metric, std::span<const double> scales) {
    if (values.empty()) throw DomainError("line_box_dimension: empty point set");
    if (scales.size() < 3) throw DomainError("line_box_dimension: need at least three scales");
    std::sort(values.begin(), values.end());
    std::vector<double> x, y;
    std::vector<std::size_t> counts;
    for (double eps : scales) {
        if (!(eps > 0.0)) throw DomainError("line_box_dimension: scales must be positive");
        const double len = sqrt_metric ? eps * eps : eps;
        std::size_t n = 0;
        double reach = -INFINITY;
        for (double v : values)
            if (v > reach) {
                ++n;
                reach = v + len;
            }
        counts.push_back(n);
        x.push_back(std::log(1.0 / eps));
        y.push_back(std::log(static_cast<double>(n)));
    }
    SlopeFit f = ols_fit(x, y);
    f.scales.assign(scales.begin(), scales.end());
    f.counts = std::move(counts);
    return f;
}

struct RhoDimensionReport {
    std::vector<double> thetas;
    std::vector<double> euclidean_slopes;
    std::vector<double> sqrt_slopes;
    double euclidean_target = 0.0;  // min(dim_E K, 1)
    double sqrt_target = 0.0;       // min(dim_H K, 2)
    double fraction_euclidean_ok = 0.0;
    double fraction_sqrt_ok = 0.0;
};

// Box dimensions of rho_e(K) per direction, in |dx| and in sqrt|dx|.
inline RhoDimensionReport rho_dimension_experiment(std::span<const HeisPoint> K, std::span<const double> thetas,
                                                   std::span<const double> scales, double dim_euclidean,
                                                   double dim_heisenberg, double tolerance = 0.15) {
    if (K.size() < 1000) throw DomainError("rho_dimension_experiment: need at least 1000 points");
    RhoDimensionReport rep;
    rep.euclidean_target = std::min(dim_euclidean, 1.0);
    rep.sqrt_target = std::min(dim_heisenberg, 2.0);
    std::size_t ok_e = 0, ok_s = 0;
    for (double th : thetas) {
        const Direction e(th);
        std::vector<double> vals(K.size());
        for (std::size_t i = 0; i < K.size(); ++i) vals[i] = rho_e(e, K[i]);
        const double se = line_box_dimension(vals, false, scales).slope;
        const double ss = line_box_dimension(vals, true, scales).slope;
        rep.thetas.push_back(th);
        rep.euclidean_slopes.push_back(se);
        rep.sqrt_slopes.push_back(ss);
        if (std::abs(se - rep.euclidean_target) <= tolerance) ++ok_e;
        if (std::abs(ss - rep.sqrt_target) <= 2.0 * tolerance) ++ok_s;
    }
    rep.fraction_euclidean_ok = static_cast<double>(ok_e) / static_cast<double>(thetas.size());
    rep.fraction_sqrt_ok = static_cast<double>(ok_s) / static_cast<double>(thetas.size());
    return rep;
}

// Grid points delta Z^2 x delta^2 Z inside B(center, factor * delta): a family that breaks
// non-concentration on purpose. With fit_constant the claimed C is raised until it verifies.
inline BallFamily gen_concentrated_family(double delta, double factor = 10.0, HeisPoint center = {},
                                          bool fit_constant = true) {
    if (!(delta > 0.0 && delta <= 0.5) || !(factor >= 1.0))
        throw DomainError("gen_concentrated_family: need delta in (0, 1/2] and factor >= 1");
    BallFamily F;
    F.delta = delta;
    F.claimed_t = 3.0;
    const double rad = factor * delta;
    const long n = static_cast<long>(std::ceil(rad / delta));
    const long nt = static_cast<long>(std::ceil((0.25 * rad * rad + 0.5 * rad * (std::abs(center.x) + std::abs(center.y))) /
                                                (delta * delta)));
    for (long i = -n; i <= n; ++i)
        for (long j = -n; j <= n; ++j)
            for (long k = -nt; k <= nt; ++k) {
                const HeisPoint p(std::round(center.x / delta + i) * delta, std::round(center.y / delta + j) * delta,
                                  std::round(center.t / (delta * delta) + k) * delta * delta);
                if (heis_dist(p, center) <= rad && koranyi_norm(p) <= 1.0) F.centers.push_back(p);
            }
    F.claimed_C = 1.0;
    if (fit_constant) F.claimed_C = std::max(1.0, verify_delta_t_set(F).max_violation_ratio * (1.0 + 1e-9));
    return F;
}

}  // namespace heis
