#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "heis/core.hpp"
#include "heis/discrete_measure.hpp"
#include "heis/parallel.hpp"
#include "heis/rng.hpp"
#include "heis/spatial.hpp"

namespace heis {

namespace detail {
inline void check_energy_args(double s, double delta) {
    if (!(delta > 0.0)) throw DomainError("riesz_energy: delta must be positive");
    if (!(s >= 0.0 && s <= 4.0)) throw DomainError("riesz_energy: exponent must lie in [0, 4]");
}
}  // namespace detail

// sum_{i, j} w_i w_j / max(d(x_i, x_j), delta)^s, diagonal included.
inline double riesz_energy(const DiscreteMeasure& mu, double s, double delta) {
    detail::check_energy_args(s, delta);
    const auto atoms = mu.atoms();
    const std::size_t n = atoms.size();
    const double diag_kernel = std::pow(delta, -s);
    const double delta4 = delta * delta * delta * delta;
    const double q = -0.25 * s;
    const bool integral = s == std::floor(s);
    const int si = static_cast<int>(s);
    auto kernel = [&](double d4) {
        d4 = std::max(d4, delta4);
        if (!integral) return std::pow(d4, q);
        const double inv = 1.0 / std::sqrt(std::sqrt(d4));
        double k = 1.0;
        for (int m = 0; m < si; ++m) k *= inv;
        return k;
    };
    // Symmetric: each off-diagonal pair once, doubled.
    return parallel_sum(n, 32, [&](std::size_t i) {
        const Atom& a = atoms[i];
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) row += atoms[j].w * kernel(heis_dist4(a.p, atoms[j].p));
        return a.w * (2.0 * row + a.w * diag_kernel);
    });
}

struct EnergyEstimate {
    double value = 0.0;
    double error_bound = 0.0;
};

// Cell-binned energy for large measures. Atoms are grouped into cells of side h (xy) and h^2 (t);
// each cell is represented by its mass-weighted centroid c and radius rho = max d(c, atom).
// Pairs of cells with centroid distance D > 4 (rho_a + rho_b) use W_a W_b / max(D, delta)^s;
// the remaining pairs are summed exactly. Each far pair has true distance in
// [D - rho_a - rho_b, D + rho_a + rho_b], which gives the returned error bound.
inline EnergyEstimate riesz_energy_binned(const DiscreteMeasure& mu, double s, double delta, double h) {
    detail::check_energy_args(s, delta);
    if (!(h > 0.0)) throw DomainError("riesz_energy_binned: cell size must be positive");
    struct Cell {
        std::vector<std::size_t> members;
        double W = 0.0, x = 0.0, y = 0.0, t = 0.0, rho = 0.0;
        HeisPoint c;
    };
    std::map<std::array<long, 3>, Cell> grid;
    const auto atoms = mu.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& p = atoms[i].p;
        const std::array<long, 3> key{static_cast<long>(std::floor(p.x / h)), static_cast<long>(std::floor(p.y / h)),
                                      static_cast<long>(std::floor(p.t / (h * h)))};
        auto& c = grid[key];
        c.members.push_back(i);
        c.W += atoms[i].w;
        c.x += atoms[i].w * p.x;
        c.y += atoms[i].w * p.y;
        c.t += atoms[i].w * p.t;
    }
    std::vector<Cell> cells;
    cells.reserve(grid.size());
    for (auto& [k, c] : grid) {
        c.c = HeisPoint(c.x / c.W, c.y / c.W, c.t / c.W);
        for (std::size_t i : c.members) c.rho = std::max(c.rho, heis_dist(atoms[i].p, c.c));
        cells.push_back(std::move(c));
    }
    const std::size_t m = cells.size();
    std::vector<double> val(m, 0.0), err(m, 0.0);
    parallel_chunks(m, 8, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t a = b; a < e; ++a) {
            double v = 0.0, er = 0.0;
            for (std::size_t bb = 0; bb < m; ++bb) {
                const double D = heis_dist(cells[a].c, cells[bb].c);
                const double spread = cells[a].rho + cells[bb].rho;
                if (bb != a && D > 4.0 * spread) {
                    const double k = std::pow(std::max(D, delta), -s);
                    const double kmax = std::pow(std::max(D - spread, delta), -s);
                    const double kmin = std::pow(std::max(D + spread, delta), -s);
                    v += cells[a].W * cells[bb].W * k;
                    er += cells[a].W * cells[bb].W * std::max(kmax - k, k - kmin);
                } else {
                    for (std::size_t i : cells[a].members)
                        for (std::size_t j : cells[bb].members)
                            v += atoms[i].w * atoms[j].w * std::pow(std::max(heis_dist(atoms[i].p, atoms[j].p), delta), -s);
                }
            }
            val[a] = v;
            err[a] = er;
        }
    });
    return {pairwise_sum(val), pairwise_sum(err)};
}

// Nonnegative density on the box grid lo + [0, nx) h_xy x [0, ny) h_xy x [0, nt) h_t.
struct GridMeasure {
    double x0 = 0.0, y0 = 0.0, t0 = 0.0;
    double h_xy = 0.0, h_t = 0.0;
    long nx = 0, ny = 0, nt = 0;
    std::vector<double> density;

    double cell_volume() const noexcept { return h_xy * h_xy * h_t; }
    std::size_t index(long i, long j, long k) const noexcept { return static_cast<std::size_t>((i * ny + j) * nt + k); }
    HeisPoint center(long i, long j, long k) const {
        return HeisPoint(x0 + (static_cast<double>(i) + 0.5) * h_xy, y0 + (static_cast<double>(j) + 0.5) * h_xy,
                         t0 + (static_cast<double>(k) + 0.5) * h_t);
    }

    // Grid of cells (delta / k) x (delta / k) x (delta / k)^2 covering the unit ball.
    static GridMeasure for_unit_ball(double delta, int k = 1) {
        if (!(delta > 0.0) || k < 1) throw DomainError("GridMeasure: bad resolution");
        GridMeasure g;
        g.h_xy = delta / k;
        g.h_t = g.h_xy * g.h_xy;
        g.nx = g.ny = 2 * static_cast<long>(std::ceil(1.0 / g.h_xy));
        g.nt = 2 * static_cast<long>(std::ceil(0.25 / g.h_t));
        g.x0 = g.y0 = -g.h_xy * static_cast<double>(g.nx / 2);
        g.t0 = -g.h_t * static_cast<double>(g.nt / 2);
        g.density.assign(static_cast<std::size_t>(g.nx * g.ny * g.nt), 0.0);
        return g;
    }

    // Deposits each atom's mass into its cell.
    void rasterize(const DiscreteMeasure& mu) {
        for (const auto& a : mu.atoms()) {
            const long i = static_cast<long>(std::floor((a.p.x - x0) / h_xy));
            const long j = static_cast<long>(std::floor((a.p.y - y0) / h_xy));
            const long k = static_cast<long>(std::floor((a.p.t - t0) / h_t));
            if (i < 0 || j < 0 || k < 0 || i >= nx || j >= ny || k >= nt)
                throw DomainError("GridMeasure::rasterize: atom outside the grid");
            density[index(i, j, k)] += a.w / cell_volume();
        }
    }
};

struct DeltaMeasureReport {
    double max_ratio = 0.0;
    HeisPoint witness;
    bool passes = true;
};

// max over cells of density / (C * average of the density over B(x, delta)), where the ball
// average uses the cells whose centers fall in B(x, delta) (mass and volume alike).
inline DeltaMeasureReport is_delta_measure(const GridMeasure& g, double delta, double C) {
    if (!(delta > 0.0) || !(C > 0.0)) throw DomainError("is_delta_measure: delta and C must be positive");
    const long rx = static_cast<long>(std::ceil(delta / g.h_xy));
    struct Best {
        double ratio = 0.0;
        long idx = -1;
    };
    const std::size_t ncells = g.density.size();
    std::vector<Best> partial((ncells + 4095) / 4096);
    parallel_chunks(ncells, 4096, [&](std::size_t b, std::size_t e, std::size_t c) {
        Best best;
        for (std::size_t flat = b; flat < e; ++flat) {
            const double dens = g.density[flat];
            if (dens <= 0.0) continue;
            const long k = static_cast<long>(flat) % g.nt;
            const long j = (static_cast<long>(flat) / g.nt) % g.ny;
            const long i = static_cast<long>(flat) / (g.nt * g.ny);
            const HeisPoint x = g.center(i, j, k);
            const double tspan = 0.25 * delta * delta + 0.5 * delta * (std::abs(x.x) + std::abs(x.y));
            const long rt = static_cast<long>(std::ceil(tspan / g.h_t)) + 1;
            double mass = 0.0;
            long count = 0;
            for (long a = std::max(0L, i - rx); a <= std::min(g.nx - 1, i + rx); ++a)
                for (long bb = std::max(0L, j - rx); bb <= std::min(g.ny - 1, j + rx); ++bb)
                    for (long cc = std::max(0L, k - rt); cc <= std::min(g.nt - 1, k + rt); ++cc) {
                        const HeisPoint y = g.center(a, bb, cc);
                        const double d4 = heis_dist4(y, x);
                        if (d4 <= delta * delta * delta * delta * (1.0 + 1e-12)) {
                            mass += g.density[g.index(a, bb, cc)];
                            ++count;
                        }
                    }
            const double avg = mass / static_cast<double>(count);
            const double ratio = dens / (C * avg);
            if (ratio > best.ratio) best = {ratio, static_cast<long>(flat)};
        }
        partial[c] = best;
    });
    DeltaMeasureReport rep;
    long widx = -1;
    for (const auto& b : partial)
        if (b.ratio > rep.max_ratio) rep.max_ratio = b.ratio, widx = b.idx;
    if (widx >= 0) rep.witness = g.center(widx / (g.nt * g.ny), (widx / g.nt) % g.ny, widx % g.nt);
    rep.passes = rep.max_ratio <= 1.0;
    return rep;
}

inline constexpr std::size_t kDefaultConvolutionCap = 20'000'000;

// Push-forward of eta x mu under (p, q) -> p * q.
inline DiscreteMeasure heis_convolve(const DiscreteMeasure& eta, const DiscreteMeasure& mu,
                                     std::size_t cap = kDefaultConvolutionCap) {
    const double n = static_cast<double>(eta.size()) * static_cast<double>(mu.size());
    if (n > static_cast<double>(cap))
        throw ResourceError("heis_convolve: " + std::to_string(static_cast<long long>(n)) +
                            " atoms exceed the cap; sparsify one factor first");
    std::vector<Atom> out;
    out.reserve(static_cast<std::size_t>(n));
    for (const auto& a : eta.atoms())
        for (const auto& b : mu.atoms()) out.push_back({group_mul(a.p, b.p), a.w * b.w});
    return DiscreteMeasure(std::move(out));
}

struct Layer {
    double alpha = 0.0;  // dyadic: alpha / 2 < mu(B(x, delta)) <= alpha
    std::vector<std::size_t> atoms;
    bool discardable = false;  // alpha <= delta^10
};

// Partition of the atoms by the dyadic level of mu(B(x, delta)), heaviest level first.
inline std::vector<Layer> layer_decomposition(const DiscreteMeasure& mu, double delta) {
    if (!(delta > 0.0)) throw DomainError("layer_decomposition: delta must be positive");
    if (mu.empty()) return {};
    std::vector<HeisPoint> pts;
    pts.reserve(mu.size());
    for (const auto& a : mu.atoms()) pts.push_back(a.p);
    const auto idx = SpatialIndex::for_scale(pts, delta);
    std::map<int, Layer, std::greater<int>> levels;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double m = 0.0;
        idx.for_each_in_ball(pts[i], delta, [&](std::size_t j) { m += mu.atoms()[j].w; });
        int k = static_cast<int>(std::ceil(std::log2(m)));
        // guard rounding at exact powers of two
        if (std::ldexp(1.0, k - 1) >= m) --k;
        if (std::ldexp(1.0, k) < m) ++k;
        auto& L = levels[k];
        L.alpha = std::ldexp(1.0, k);
        L.atoms.push_back(i);
    }
    const double floor10 = std::pow(delta, 10.0);
    std::vector<Layer> out;
    for (auto& [k, L] : levels) {
        L.discardable = L.alpha <= floor10;
        out.push_back(std::move(L));
    }
    return out;
}

// delta Z^3 intersected with the closed unit ball.
inline std::vector<HeisPoint> euclidean_lattice_in_unit_ball(double delta) {
    std::vector<HeisPoint> Z;
    const long n = static_cast<long>(std::floor(1.0 / delta + 1e-9));
    const long nt = static_cast<long>(std::floor(0.25 / delta + 1e-9));
    for (long i = -n; i <= n; ++i)
        for (long j = -n; j <= n; ++j)
            for (long k = -nt; k <= nt; ++k) {
                const HeisPoint p(static_cast<double>(i) * delta, static_cast<double>(j) * delta, static_cast<double>(k) * delta);
                if (koranyi_norm4(p) <= 1.0) Z.push_back(p);
            }
    return Z;
}

struct AugmentationResult {
    std::vector<HeisPoint> H;
    DiscreteMeasure eta;
    std::uint64_t seed = 0;
    int retries = 0;                      // rejected draws before acceptance
    std::vector<std::size_t> draw_sizes;  // |H| of every draw, accepted one last
    std::size_t lattice_size = 0;
    double inclusion_probability = 0.0;
    double energy_mu = 0.0;        // I_t(mu)
    double energy_conv = 0.0;      // I_{s+t}(eta * mu)
    double normalized_ratio = 0.0;  // energy_conv / (energy_mu * log(1/delta)^2)
};

inline constexpr int kMaxAugmentationRetries = 64;

// Independent inclusion of each lattice point with probability delta^{-s} / (2 |Z|), redrawn
// on a fresh sub-stream until |H| <= delta^{-s}; eta puts mass delta^s on each point.
inline AugmentationResult augment_to_dim3(const DiscreteMeasure& mu, double s, double t, double delta, std::uint64_t seed,
                                          bool compute_energies = true) {
    if (!(s >= 0.0) || !(t >= 0.0)) throw DomainError("augment_to_dim3: dimensions must be nonnegative");
    if (s + t > 3.0 + 1e-12) throw DomainError("augment_to_dim3: requires s + t <= 3");
    if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("augment_to_dim3: delta must lie in (0, 1/2]");
    AugmentationResult res;
    res.seed = seed;
    const auto Z = euclidean_lattice_in_unit_ball(delta);
    res.lattice_size = Z.size();
    const double target = std::pow(delta, -s);
    res.inclusion_probability = std::min(1.0, target / (2.0 * static_cast<double>(Z.size())));
    const CounterRng base(seed, hash_key("augment_to_dim3"));
    bool accepted = false;
    for (int attempt = 0; attempt <= kMaxAugmentationRetries; ++attempt) {
        CounterRng g = base.split(static_cast<std::uint64_t>(attempt));
        std::vector<HeisPoint> H;
        for (const auto& z : Z)
            if (g.uniform() < res.inclusion_probability) H.push_back(z);
        res.draw_sizes.push_back(H.size());
        if (static_cast<double>(H.size()) <= target * (1.0 + 1e-12)) {
            res.H = std::move(H);
            res.retries = attempt;
            accepted = true;
            break;
        }
    }
    if (!accepted) throw ResourceError("augment_to_dim3: no admissible draw within the retry budget");
    res.eta = DiscreteMeasure::uniform(res.H, std::pow(delta, s));
    if (compute_energies) {
        res.energy_mu = riesz_energy(mu, t, delta);
        const auto conv = heis_convolve(res.eta, mu);
        res.energy_conv = riesz_energy(conv, s + t, delta);
        const double L = std::log(1.0 / delta);
        res.normalized_ratio = res.energy_mu > 0.0 ? res.energy_conv / (res.energy_mu * L * L) : 0.0;
    }
    return res;
}

}  // namespace heis
