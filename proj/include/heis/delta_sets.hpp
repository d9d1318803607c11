#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heis/core.hpp"
#include "heis/parallel.hpp"
#include "heis/spatial.hpp"

namespace heis {

// Family of Heisenberg balls of common radius delta, with its claimed (delta, t, C) data.
struct BallFamily {
    std::vector<HeisPoint> centers;
    double delta = 0.0;
    double claimed_t = 0.0;
    double claimed_C = 1.0;

    std::size_t size() const noexcept { return centers.size(); }
    HeisBall ball(std::size_t i) const { return HeisBall(centers[i], delta); }
};

struct FamilyCheck {
    bool separated = true;
    bool inside_unit_ball = true;
    double min_separation = 0.0;  // over pairs closer than 2 delta; 2 delta if none
    bool ok() const noexcept { return separated && inside_unit_ball; }
};

// Centers pairwise at distance >= delta and inside the closed unit ball.
inline FamilyCheck check_family(const BallFamily& F) {
    if (!(F.delta > 0.0)) throw DomainError("check_family: delta must be positive");
    FamilyCheck out;
    out.min_separation = 2.0 * F.delta;
    for (const auto& c : F.centers)
        if (koranyi_norm(c) > 1.0 + 1e-12) out.inside_unit_ball = false;
    const auto idx = SpatialIndex::for_scale(F.centers, F.delta);
    for (std::size_t i = 0; i < F.size(); ++i)
        idx.for_each_in_ball(F.centers[i], 2.0 * F.delta, [&](std::size_t j) {
            if (j <= i) return;
            const double d = heis_dist(F.centers[i], F.centers[j]);
            out.min_separation = std::min(out.min_separation, d);
        });
    if (out.min_separation < F.delta * (1.0 - 1e-12)) out.separated = false;
    return out;
}

namespace detail {

// Greedy net of the listed points (processed in the given order): a point is selected
// unless it lies within delta of an earlier selection.
class GreedyCover {
public:
    explicit GreedyCover(const SpatialIndex& idx) : idx_(idx), stamp_(idx.size(), 0) {}

    std::size_t count(std::span<const std::size_t> members, double delta) {
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
        std::size_t n = 0;
        for (std::size_t i : members) {
            if (stamp_[i] == epoch_) continue;
            ++n;
            idx_.for_each_in_ball(idx_.point(i), delta, [&](std::size_t j) { stamp_[j] = epoch_; });
        }
        return n;
    }

private:
    const SpatialIndex& idx_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
};

}  // namespace detail

// Size of a greedy delta-net, in input order. Selected centers are pairwise more than delta
// apart and every point is within delta of one, so the value sits between the minimal
// delta-cover and the minimal delta/2-cover.
inline std::size_t covering_number(std::span<const HeisPoint> P, double delta) {
    if (P.empty()) throw DomainError("covering_number: empty point set");
    if (!(delta > 0.0)) throw DomainError("covering_number: delta must be positive");
    const auto idx = SpatialIndex::for_scale(P, delta);
    std::vector<std::size_t> all(P.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    detail::GreedyCover cover(idx);
    return cover.count(all, delta);
}

// Greedy net selection; returns the selected indices.
inline std::vector<std::size_t> greedy_net(std::span<const HeisPoint> P, double delta) {
    if (!(delta > 0.0)) throw DomainError("greedy_net: delta must be positive");
    const auto idx = SpatialIndex::for_scale(P, delta);
    std::vector<std::uint8_t> covered(P.size(), 0);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < P.size(); ++i) {
        if (covered[i]) continue;
        out.push_back(i);
        idx.for_each_in_ball(P[i], delta, [&](std::size_t j) { covered[j] = 1; });
    }
    return out;
}

struct DeltaTReport {
    double max_violation_ratio = 0.0;
    std::size_t witness_index = 0;  // test center of the worst ratio
    double witness_radius = 0.0;
    std::size_t witness_count = 0;  // |P cap B(x, r')|_delta at the witness
    std::size_t cover_size = 0;     // |P|_delta
    double exact_radius_limit = 0.0;
    bool passes() const noexcept { return max_violation_ratio <= 1.0; }
};

// Scans radii r = delta 2^k up to 2 and returns max |P cap B(x, r)|_delta / (C r^t |P|_delta).
// For r <= exact_factor * delta every ball center is a test center. Beyond that the centers
// are replaced by a greedy r/4-net and the radius by 5r/4; every B(x, r) with x a center is
// contained in one of these, so the reported ratio bounds the all-centers value from above.
inline DeltaTReport verify_delta_t_set(const BallFamily& F, double exact_factor = 4.0) {
    if (!(F.delta > 0.0)) throw DomainError("verify_delta_t_set: delta must be positive");
    if (!(F.claimed_C > 0.0)) throw DomainError("verify_delta_t_set: C must be positive");
    DeltaTReport rep;
    rep.exact_radius_limit = exact_factor * F.delta;
    if (F.centers.empty()) return rep;
    const auto idx = SpatialIndex::for_scale(F.centers, F.delta);
    {
        detail::GreedyCover cover(idx);
        std::vector<std::size_t> all(F.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        rep.cover_size = cover.count(all, F.delta);
    }
    static std::atomic<std::uint64_t> scans{0};
    const std::uint64_t scan_id = ++scans;
    const double denom_base = F.claimed_C * static_cast<double>(rep.cover_size);
    for (double r = F.delta; r <= 2.0 * (1.0 + 1e-12); r *= 2.0) {
        std::vector<std::size_t> tests;
        double query_r = r;
        if (r <= rep.exact_radius_limit * (1.0 + 1e-12)) {
            tests.resize(F.size());
            for (std::size_t i = 0; i < tests.size(); ++i) tests[i] = i;
        } else {
            tests = greedy_net(F.centers, 0.25 * r);
            query_r = 1.25 * r;
        }
        const double denom = denom_base * std::pow(r, F.claimed_t);
        struct Best {
            double ratio = -1.0;
            std::size_t idx = 0, count = 0;
        };
        const std::size_t grain = 64;
        std::vector<Best> partial((tests.size() + grain - 1) / grain);
        parallel_chunks(tests.size(), grain, [&](std::size_t b, std::size_t e, std::size_t c) {
            // One scratch buffer per worker thread, rebuilt for each new scan.
            thread_local std::optional<detail::GreedyCover> cover;
            thread_local std::uint64_t owner = 0;
            if (owner != scan_id) {
                cover.emplace(idx);
                owner = scan_id;
            }
            Best best;
            for (std::size_t k = b; k < e; ++k) {
                const std::size_t i = tests[k];
                const auto members = idx.ball_indices(F.centers[i], query_r);
                const std::size_t n = cover->count(members, F.delta);
                const double ratio = static_cast<double>(n) / denom;
                if (ratio > best.ratio) best = {ratio, i, n};
            }
            partial[c] = best;
        });
        for (const auto& b : partial)
            if (b.ratio > rep.max_violation_ratio) {
                rep.max_violation_ratio = b.ratio;
                rep.witness_index = b.idx;
                rep.witness_radius = r;
                rep.witness_count = b.count;
            }
    }
    return rep;
}

// Grid delta Z^2 x delta^2 Z inside the closed unit ball. Distinct grid points are already at
// distance >= delta (|dz| >= delta, or dz = 0 and |dt| >= delta^2 giving distance 2 delta),
// so the greedy separation pass keeps every point; it is run anyway as a check.
inline BallFamily gen_heis_lattice(double delta, std::optional<double> slab_x = std::nullopt) {
    if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("gen_heis_lattice: delta must lie in (0, 1/2]");
    BallFamily F;
    F.delta = delta;
    F.claimed_t = slab_x ? 3.0 : 4.0;
    F.claimed_C = 8.0;
    const long nxy = static_cast<long>(std::floor(1.0 / delta + 1e-9));
    const long nt = static_cast<long>(std::floor(0.25 / (delta * delta) + 1e-9));
    auto push_column = [&](double x, double y) {
        for (long k = -nt; k <= nt; ++k) {
            const HeisPoint p(x, y, static_cast<double>(k) * delta * delta);
            if (koranyi_norm4(p) <= 1.0) F.centers.push_back(p);
        }
    };
    if (slab_x) {
        const double x = std::round(*slab_x / delta) * delta;
        for (long j = -nxy; j <= nxy; ++j) push_column(x, static_cast<double>(j) * delta);
    } else {
        for (long i = -nxy; i <= nxy; ++i)
            for (long j = -nxy; j <= nxy; ++j) push_column(static_cast<double>(i) * delta, static_cast<double>(j) * delta);
    }
    // Maximal separated subset; a point is dropped only if an accepted one is strictly closer than delta.
    const auto idx = SpatialIndex::for_scale(F.centers, delta);
    std::vector<std::uint8_t> dropped(F.size(), 0);
    std::vector<HeisPoint> kept;
    kept.reserve(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (dropped[i]) continue;
        kept.push_back(F.centers[i]);
        idx.for_each_in_ball(F.centers[i], delta, [&](std::size_t j) {
            if (j > i && heis_dist(F.centers[i], F.centers[j]) < delta * (1.0 - 1e-12)) dropped[j] = 1;
        });
    }
    F.centers = std::move(kept);
    return F;
}

// Positions in [lo, hi) of a Cantor-type set of dimension dim (0 <= dim <= 1): each interval is
// split into 4 and a count of children chosen so that the number of kept intervals of length
// L tracks L^{-dim}. Returns the centers of the kept intervals once their length is <= spacing.
inline std::vector<double> cantor_points(double lo, double hi, double dim, double spacing) {
    if (!(dim >= 0.0 && dim <= 1.0)) throw DomainError("cantor_points: dimension must lie in [0, 1]");
    if (!(hi > lo) || !(spacing > 0.0)) throw DomainError("cantor_points: bad interval or spacing");
    // children patterns spread across the four slots
    static const std::vector<std::vector<int>> pattern = {{}, {0}, {0, 3}, {0, 1, 3}, {0, 1, 2, 3}};
    std::vector<double> starts{lo};
    double len = hi - lo;
    double kept = 1.0;
    int level = 0;
    while (len > spacing * (1.0 + 1e-12)) {
        ++level;
        const double target = std::pow(4.0, dim * level);
        const int n = std::clamp(static_cast<int>(std::lround(target / kept)), 1, 4);
        kept *= n;
        len /= 4.0;
        std::vector<double> next;
        next.reserve(starts.size() * static_cast<std::size_t>(n));
        for (double s : starts)
            for (int slot : pattern[static_cast<std::size_t>(n)]) next.push_back(s + slot * len);
        starts = std::move(next);
    }
    for (double& s : starts) s += 0.5 * len;
    return starts;
}

enum class SharpnessKind { t_axis_subset, product_K0xR, horizontal_line };

inline SharpnessKind parse_sharpness_kind(const std::string& s) {
    if (s == "t_axis_subset" || s == "t-axis") return SharpnessKind::t_axis_subset;
    if (s == "product_K0xR" || s == "product") return SharpnessKind::product_K0xR;
    if (s == "horizontal_line" || s == "line") return SharpnessKind::horizontal_line;
    throw DomainError("unknown sharpness family: " + s);
}

struct SharpnessParams {
    double delta = 0.0625;
    double s = 2.0;  // target dimension (ignored by horizontal_line)
    double C = 8.0;
};

// t_axis_subset: Cantor-type subset of {(0, 0, t)} of dimension s <= 2, spacing delta^2 / 2.
// product_K0xR: planar Cantor set of dimension s - 2 in the xy-plane times a delta^2 grid in t.
// horizontal_line: balls centered at (k delta, 0, 0), |k| <= 1 / delta.
inline BallFamily gen_sharpness_example(SharpnessKind kind, const SharpnessParams& prm) {
    const double delta = prm.delta;
    if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("gen_sharpness_example: delta must lie in (0, 1/2]");
    BallFamily F;
    F.delta = delta;
    F.claimed_C = prm.C;
    switch (kind) {
    case SharpnessKind::t_axis_subset: {
        if (!(prm.s > 0.0 && prm.s <= 2.0)) throw DomainError("t_axis_subset: dimension must lie in (0, 2]");
        F.claimed_t = prm.s;
        // |(0, 0, t)| = 2 sqrt|t|, so |t| <= ((1 - delta) / 2)^2 keeps each ball inside the unit ball.
        const double T = 0.25 * (1.0 - delta) * (1.0 - delta);
        const double step = 0.5 * delta * delta;
        if (prm.s == 2.0) {
            const long n = static_cast<long>(std::floor(T / step + 1e-9));
            for (long k = -n; k <= n; ++k) F.centers.emplace_back(0.0, 0.0, static_cast<double>(k) * step);
        } else {
            // The t-axis carries the metric 2 sqrt|dt|, so dimension s needs Euclidean dimension s / 2.
            for (double t : cantor_points(-T, T, 0.5 * prm.s, step)) F.centers.emplace_back(0.0, 0.0, t);
        }
        break;
    }
    case SharpnessKind::product_K0xR: {
        if (!(prm.s > 2.0 && prm.s <= 4.0)) throw DomainError("product_K0xR: dimension must lie in (2, 4]");
        F.claimed_t = prm.s;
        const double half = 0.5;
        const auto axis = cantor_points(-half, half, 0.5 * (prm.s - 2.0), delta);
        const long nt = static_cast<long>(std::floor(0.25 / (delta * delta)));
        for (double x : axis)
            for (double y : axis)
                for (long k = -nt; k <= nt; ++k) {
                    const HeisPoint p(x, y, static_cast<double>(k) * delta * delta);
                    if (koranyi_norm(p) <= 1.0 - delta) F.centers.push_back(p);
                }
        break;
    }
    case SharpnessKind::horizontal_line: {
        F.claimed_t = 1.0;
        const long n = static_cast<long>(std::floor(1.0 / delta + 1e-9));
        for (long k = -n; k <= n; ++k) F.centers.emplace_back(static_cast<double>(k) * delta, 0.0, 0.0);
        break;
    }
    }
    return F;
}

}  // namespace heis
