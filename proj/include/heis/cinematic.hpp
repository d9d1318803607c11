#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "heis/core.hpp"
#include "heis/parallel.hpp"

namespace heis {

// Derivatives of theta -> rho_theta(p). All three are trigonometric polynomials of degree 2.
struct CinematicValues {
    double f, d1, d2;
};

inline CinematicValues cinematic_values(const HeisPoint& p, double theta) noexcept {
    const double c = std::cos(theta), s = std::sin(theta);
    const double ze = p.x * c + p.y * s;
    const double zj = -p.x * s + p.y * c;
    return {p.t + 0.5 * ze * zj, 0.5 * zj * zj - 0.5 * ze * ze, -2.0 * ze * zj};
}

inline double f_eval(const HeisPoint& p, double theta) noexcept { return cinematic_values(p, theta).f; }
inline double f_d1(const HeisPoint& p, double theta) noexcept { return cinematic_values(p, theta).d1; }
inline double f_d2(const HeisPoint& p, double theta) noexcept { return cinematic_values(p, theta).d2; }

// Value, slope and curvature at theta = 0.
inline std::array<double, 3> F_map(const HeisPoint& p) noexcept {
    return {p.t + 0.5 * p.x * p.y, 0.5 * (p.y * p.y - p.x * p.x), -2.0 * p.x * p.y};
}

inline double F_jacobian_absdet(const HeisPoint& p) noexcept { return 2.0 * (p.x * p.x + p.y * p.y); }

// Rotation about the t-axis.
inline HeisPoint rotate(const HeisPoint& p, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return HeisPoint(c * p.x - s * p.y, s * p.x + c * p.y, p.t);
}

inline double rotation_conjugation_check(const HeisPoint& p, double theta, double phi) {
    const auto lhs = cinematic_values(rotate(p, phi), theta + phi);
    const auto rhs = cinematic_values(p, theta);
    return std::max({std::abs(lhs.f - rhs.f), std::abs(lhs.d1 - rhs.d1), std::abs(lhs.d2 - rhs.d2)});
}

inline std::vector<double> uniform_theta_grid(std::size_t n = 720) {
    if (n == 0) throw DomainError("uniform_theta_grid: need at least one angle");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    return g;
}

// min over the grid of sum_k |f_p^(k) - f_q^(k)|, divided by the Euclidean distance |p - q|.
inline double cinematic_separation(const HeisPoint& p, const HeisPoint& q, std::span<const double> theta_grid) {
    if (p == q) throw DomainError("cinematic_separation: p and q coincide");
    if (theta_grid.empty()) throw DomainError("cinematic_separation: empty angle grid");
    const double dist = std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) + (p.t - q.t) * (p.t - q.t));
    double best = std::numeric_limits<double>::infinity();
    for (double th : theta_grid) {
        const auto a = cinematic_values(p, th);
        const auto b = cinematic_values(q, th);
        best = std::min(best, std::abs(a.f - b.f) + std::abs(a.d1 - b.d1) + std::abs(a.d2 - b.d2));
    }
    return best / dist;
}

inline double cinematic_separation(const HeisPoint& p, const HeisPoint& q) {
    const auto g = uniform_theta_grid();
    return cinematic_separation(p, q, g);
}

// max over the grid of sum_k |f_p^(k) - f_q^(k)| over |p - q|; the C^2 Lipschitz ratio.
inline double cinematic_lipschitz_ratio(const HeisPoint& p, const HeisPoint& q, std::span<const double> theta_grid) {
    if (p == q) throw DomainError("cinematic_lipschitz_ratio: p and q coincide");
    const double dist = std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) + (p.t - q.t) * (p.t - q.t));
    double worst = 0.0;
    for (double th : theta_grid) {
        const auto a = cinematic_values(p, th);
        const auto b = cinematic_values(q, th);
        worst = std::max(worst, std::abs(a.f - b.f) + std::abs(a.d1 - b.d1) + std::abs(a.d2 - b.d2));
    }
    return worst / dist;
}

// Indicator of a region in the (theta, y) plane, stored on a regular grid of cells.
class GridIndicator {
public:
    GridIndicator(double theta_min, double theta_max, double y_min, double y_max, std::size_t nx, std::size_t ny)
        : th0_(theta_min), th1_(theta_max), y0_(y_min), y1_(y_max), nx_(nx), ny_(ny), mask_(nx * ny, 1) {
        if (!(theta_max > theta_min) || !(y_max > y_min) || nx == 0 || ny == 0)
            throw DomainError("GridIndicator: degenerate bounds");
    }

    static GridIndicator full(double theta_min, double theta_max, double y_min, double y_max) {
        return GridIndicator(theta_min, theta_max, y_min, y_max, 1, 1);
    }

    static GridIndicator from_predicate(double theta_min, double theta_max, double y_min, double y_max, std::size_t nx,
                                        std::size_t ny, const std::function<bool(double, double)>& inside) {
        GridIndicator g(theta_min, theta_max, y_min, y_max, nx, ny);
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < ny; ++j) {
                const double th = theta_min + (static_cast<double>(i) + 0.5) * (theta_max - theta_min) / static_cast<double>(nx);
                const double y = y_min + (static_cast<double>(j) + 0.5) * (y_max - y_min) / static_cast<double>(ny);
                g.mask_[i * ny + j] = inside(th, y) ? 1 : 0;
            }
        return g;
    }

    bool contains(double theta, double y) const noexcept {
        if (theta < th0_ || theta >= th1_ || y < y0_ || y >= y1_) return false;
        auto i = static_cast<std::size_t>((theta - th0_) / (th1_ - th0_) * static_cast<double>(nx_));
        auto j = static_cast<std::size_t>((y - y0_) / (y1_ - y0_) * static_cast<double>(ny_));
        i = std::min(i, nx_ - 1);
        j = std::min(j, ny_ - 1);
        return mask_[i * ny_ + j] != 0;
    }

    double theta_min() const noexcept { return th0_; }
    double theta_max() const noexcept { return th1_; }
    double y_min() const noexcept { return y0_; }
    double y_max() const noexcept { return y1_; }

private:
    double th0_, th1_, y0_, y1_;
    std::size_t nx_, ny_;
    std::vector<std::uint8_t> mask_;
};

// Grid quadrature, cell side delta/2, of (number of graphs within delta vertically)^exponent over E.
inline double graph_overlap_integral(std::span<const HeisPoint> Z, const GridIndicator& E, double delta,
                                     double exponent = 1.5) {
    if (!(delta > 0.0)) throw DomainError("graph_overlap_integral: delta must be positive");
    if (!(exponent >= 1.0)) throw DomainError("graph_overlap_integral: exponent must be at least 1");
    if (Z.empty()) return 0.0;
    const double h = 0.5 * delta;
    const auto ncols = static_cast<std::size_t>(std::ceil((E.theta_max() - E.theta_min()) / h));
    const auto nrows = static_cast<std::size_t>(std::ceil((E.y_max() - E.y_min()) / h));
    const double col_w = (E.theta_max() - E.theta_min()) / static_cast<double>(ncols);
    const double row_h = (E.y_max() - E.y_min()) / static_cast<double>(nrows);
    const double total = parallel_sum(ncols, 16, [&](std::size_t i) {
        const double th = E.theta_min() + (static_cast<double>(i) + 0.5) * col_w;
        std::vector<double> vals(Z.size());
        for (std::size_t k = 0; k < Z.size(); ++k) vals[k] = f_eval(Z[k], th);
        std::sort(vals.begin(), vals.end());
        double col = 0.0;
        // Only rows near some graph can contribute.
        const auto lo_row = static_cast<long>(std::floor((vals.front() - delta - E.y_min()) / row_h)) - 1;
        const auto hi_row = static_cast<long>(std::ceil((vals.back() + delta - E.y_min()) / row_h)) + 1;
        for (long j = std::max(0L, lo_row); j < std::min(static_cast<long>(nrows), hi_row); ++j) {
            const double y = E.y_min() + (static_cast<double>(j) + 0.5) * row_h;
            if (!E.contains(th, y)) continue;
            const auto first = std::lower_bound(vals.begin(), vals.end(), y - delta);
            const auto last = std::upper_bound(first, vals.end(), y + delta);
            const auto n = static_cast<double>(last - first);
            if (n > 0) col += std::pow(n, exponent);
        }
        return col * col_w * row_h;
    });
    return total;
}

}  // namespace heis
