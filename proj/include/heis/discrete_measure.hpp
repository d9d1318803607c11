#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "heis/core.hpp"

namespace heis {

struct Atom {
    HeisPoint p;
    double w = 0.0;
};

// Finite weighted atom list on the group. Weights are strictly positive.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    explicit DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        for (const auto& a : atoms_) check_weight(a.w);
        recompute_mass();
    }

    // Uniform weight w on each point.
    static DiscreteMeasure uniform(std::span<const HeisPoint> pts, double w) {
        std::vector<Atom> atoms;
        atoms.reserve(pts.size());
        for (const auto& p : pts) atoms.push_back({p, w});
        return DiscreteMeasure(std::move(atoms));
    }

    // Probability measure spread evenly over pts.
    static DiscreteMeasure normalized(std::span<const HeisPoint> pts) {
        if (pts.empty()) return {};
        return uniform(pts, 1.0 / static_cast<double>(pts.size()));
    }

    void add(const HeisPoint& p, double w) {
        check_weight(w);
        atoms_.push_back({p, w});
        total_mass_ += w;
    }

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    double total_mass() const noexcept { return total_mass_; }

    void reserve(std::size_t n) { atoms_.reserve(n); }

    // Re-sums the weights with compensated summation.
    void recompute_mass() noexcept {
        double s = 0.0, comp = 0.0;
        for (const auto& a : atoms_) {
            const double y = a.w - comp;
            const double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
        total_mass_ = s;
    }

private:
    static void check_weight(double w) {
        if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("DiscreteMeasure: weights must be positive and finite");
    }

    std::vector<Atom> atoms_;
    double total_mass_ = 0.0;
};

}  // namespace heis
