#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace heis {

// Arbitrary-precision rationals; every finite double converts exactly.
using Rational = boost::multiprecision::cpp_rational;

template <class T>
struct Triple {
    T x, y, t;
};

using RationalTriple = Triple<Rational>;

inline RationalTriple to_rational(double x, double y, double t) { return {Rational(x), Rational(y), Rational(t)}; }

// p lies on the horizontal line with parameters line = (a, b, c).
template <class T>
bool incident_point_line_exact(const Triple<T>& p, const Triple<T>& line) {
    return p.x == line.x * p.y + line.y && p.t == line.y / 2 * p.y + line.t;
}

// pstar lies on the light ray dual to p: (0, x, t - x y / 2) + L_y.
template <class T>
bool incident_point_ray_exact(const Triple<T>& pstar, const Triple<T>& p) {
    const T u = p.x;
    const T v = p.t - p.x * p.y / 2;
    const T s = pstar.x;
    return pstar.y == u - s * p.y && pstar.t == v + s * p.y * p.y / 2;
}

}  // namespace heis
