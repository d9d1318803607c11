#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "heis/core.hpp"

namespace heis {

// Bucket grid over (x, y, t) for Koranyi-ball range queries. Query balls are closed, with a
// relative slack of 1e-12 on the fourth power so that exact lattice distances count as inside.
class SpatialIndex {
public:
    SpatialIndex(std::span<const HeisPoint> pts, double cell_xy, double cell_t) : pts_(pts.begin(), pts.end()) {
        if (!(cell_xy > 0.0) || !(cell_t > 0.0)) throw DomainError("SpatialIndex: cell sizes must be positive");
        cell_[0] = cell_[1] = cell_xy;
        cell_[2] = cell_t;
        if (pts_.empty()) {
            start_.assign(2, 0);
            return;
        }
        double hi[3];
        for (int d = 0; d < 3; ++d) {
            lo_[d] = std::numeric_limits<double>::infinity();
            hi[d] = -lo_[d];
            for (const auto& p : pts_) {
                lo_[d] = std::min(lo_[d], coord(p, d));
                hi[d] = std::max(hi[d], coord(p, d));
            }
        }
        // Coarsen sparse grids so the bucket table stays proportional to the point count.
        const double budget = std::max(double{1 << 20}, 8.0 * static_cast<double>(pts_.size()));
        for (;;) {
            double cells = 1.0;
            for (int d = 0; d < 3; ++d) cells *= std::floor((hi[d] - lo_[d]) / cell_[d]) + 1.0;
            if (cells <= budget) break;
            for (double& c : cell_) c *= 2.0;
        }
        for (int d = 0; d < 3; ++d) n_[d] = static_cast<long>(std::floor((hi[d] - lo_[d]) / cell_[d])) + 1;
        const std::size_t cells = static_cast<std::size_t>(n_[0] * n_[1] * n_[2]);
        start_.assign(cells + 1, 0);
        std::vector<std::uint32_t> cell_of(pts_.size());
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            cell_of[i] = static_cast<std::uint32_t>(cell_index(pts_[i]));
            ++start_[cell_of[i] + 1];
        }
        for (std::size_t c = 0; c < cells; ++c) start_[c + 1] += start_[c];
        order_.resize(pts_.size());
        std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < pts_.size(); ++i) order_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
    }

    // Cells suited to balls of radius about delta.
    static SpatialIndex for_scale(std::span<const HeisPoint> pts, double delta) {
        return SpatialIndex(pts, delta, std::max(delta * delta, 0.25 * delta));
    }

    std::size_t size() const noexcept { return pts_.size(); }
    const HeisPoint& point(std::size_t i) const noexcept { return pts_[i]; }
    std::span<const HeisPoint> points() const noexcept { return pts_; }

    // Calls f(index) for every point within distance r of c, in increasing index order per cell.
    template <class F>
    void for_each_in_ball(const HeisPoint& c, double r, F&& f) const {
        if (pts_.empty()) return;
        const double r4 = r * r * r * r * (1.0 + 1e-12);
        // The ball lies in |x - cx| <= r, |y - cy| <= r, |t - ct| <= r^2 / 4 + r (|cx| + |cy|) / 2.
        const double ext[3] = {r, r, 0.25 * r * r + 0.5 * r * (std::abs(c.x) + std::abs(c.y))};
        long a[3], b[3];
        for (int d = 0; d < 3; ++d) {
            const double v = coord(c, d);
            a[d] = std::max(0L, static_cast<long>(std::floor((v - ext[d] - lo_[d]) / cell_[d])));
            b[d] = std::min(n_[d] - 1, static_cast<long>(std::floor((v + ext[d] - lo_[d]) / cell_[d])));
            if (a[d] > b[d]) return;
        }
        for (long i = a[0]; i <= b[0]; ++i)
            for (long j = a[1]; j <= b[1]; ++j) {
                const std::size_t base = static_cast<std::size_t>((i * n_[1] + j) * n_[2]);
                const std::uint32_t s = start_[base + static_cast<std::size_t>(a[2])];
                const std::uint32_t e = start_[base + static_cast<std::size_t>(b[2]) + 1];
                for (std::uint32_t k = s; k < e; ++k) {
                    const std::uint32_t idx = order_[k];
                    if (heis_dist4(pts_[idx], c) <= r4) f(static_cast<std::size_t>(idx));
                }
            }
    }

    std::size_t count_in_ball(const HeisPoint& c, double r) const {
        std::size_t n = 0;
        for_each_in_ball(c, r, [&](std::size_t) { ++n; });
        return n;
    }

    // Indices within distance r of c, sorted ascending.
    std::vector<std::size_t> ball_indices(const HeisPoint& c, double r) const {
        std::vector<std::size_t> out;
        for_each_in_ball(c, r, [&](std::size_t i) { out.push_back(i); });
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    static double coord(const HeisPoint& p, int d) noexcept { return d == 0 ? p.x : (d == 1 ? p.y : p.t); }

    std::size_t cell_index(const HeisPoint& p) const noexcept {
        long c[3];
        for (int d = 0; d < 3; ++d)
            c[d] = std::clamp(static_cast<long>(std::floor((coord(p, d) - lo_[d]) / cell_[d])), 0L, n_[d] - 1);
        return static_cast<std::size_t>((c[0] * n_[1] + c[1]) * n_[2] + c[2]);
    }

    std::vector<HeisPoint> pts_;
    double cell_[3]{};
    double lo_[3]{};
    long n_[3]{1, 1, 1};
    std::vector<std::uint32_t> start_;
    std::vector<std::uint32_t> order_;
};

}  // namespace heis
