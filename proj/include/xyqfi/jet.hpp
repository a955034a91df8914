#ifndef XYQFI_JET_HPP
#define XYQFI_JET_HPP

// Second-order forward-mode scalars ("jets"): value plus first and second
// derivative with respect to a single active parameter (the field h or the
// inverse temperature beta).  Everything downstream of the renormalized
// couplings — quasiparticle energies, Bogoliubov angles, the free entropy —
// is evaluated once on jets and yields machine-accurate d1/d2 without any
// finite differencing.  Only one active parameter is ever needed: the
// estimation problems here are single-parameter.

#include <cmath>
#include <stdexcept>

#include "polygamma.hpp"

namespace xyqfi {

struct Jet2 {
    double v = 0.0;   // value
    double d1 = 0.0;  // d/dalpha
    double d2 = 0.0;  // d^2/dalpha^2

    static Jet2 constant(double c) { return {c, 0.0, 0.0}; }
    static Jet2 variable(double x) { return {x, 1.0, 0.0}; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (b.v == 0.0) throw std::domain_error("jet division by zero value");
    double q = a.v / b.v;
    double q1 = (a.d1 - q * b.d1) / b.v;
    double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
    return {q, q1, q2};
}

inline Jet2 operator+(const Jet2& a, double c) { return {a.v + c, a.d1, a.d2}; }
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { return {a.v - c, a.d1, a.d2}; }
inline Jet2 operator-(double c, const Jet2& a) { return {c - a.v, -a.d1, -a.d2}; }
inline Jet2 operator*(const Jet2& a, double c) { return {a.v * c, a.d1 * c, a.d2 * c}; }
inline Jet2 operator*(double c, const Jet2& a) { return a * c; }
inline Jet2 operator/(const Jet2& a, double c) { return {a.v / c, a.d1 / c, a.d2 / c}; }
inline Jet2 operator/(double c, const Jet2& a) { return Jet2::constant(c) / a; }

// univariate chain rule: f(a) with given f(v), f'(v), f''(v)
inline Jet2 jet_chain(const Jet2& a, double f, double fp, double fpp) {
    return {f, fp * a.d1, fpp * a.d1 * a.d1 + fp * a.d2};
}

inline Jet2 jet_exp(const Jet2& a) {
    double e = std::exp(a.v);
    return jet_chain(a, e, e, e);
}

inline Jet2 jet_log(const Jet2& a) {
    if (!(a.v > 0.0)) throw std::domain_error("jet_log: requires positive value");
    return jet_chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}

inline Jet2 jet_sqrt(const Jet2& a) {
    if (!(a.v > 0.0)) throw std::domain_error("jet_sqrt: requires positive value");
    double r = std::sqrt(a.v);
    return jet_chain(a, r, 0.5 / r, -0.25 / (r * a.v));
}

inline Jet2 jet_sin(const Jet2& a) { return jet_chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet2 jet_cos(const Jet2& a) { return jet_chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Jet2 jet_sinh(const Jet2& a) { return jet_chain(a, std::sinh(a.v), std::cosh(a.v), std::sinh(a.v)); }
inline Jet2 jet_cosh(const Jet2& a) { return jet_chain(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v)); }

inline Jet2 jet_tanh(const Jet2& a) {
    double t = std::tanh(a.v);
    double s = 1.0 - t * t;  // sech^2
    return jet_chain(a, t, s, -2.0 * t * s);
}

// angle of the point (x, y); the Bogoliubov angle is atan2 of the pairing
// and hopping amplitudes, and its parametric derivative drives the quantum
// part of the Fisher information
inline Jet2 jet_atan2(const Jet2& y, const Jet2& x) {
    double r2 = x.v * x.v + y.v * y.v;
    if (r2 == 0.0) throw std::domain_error("jet_atan2: undefined at the origin");
    double th = std::atan2(y.v, x.v);
    // theta' = (y'x - x'y)/r^2 ;  theta'' differentiates both numerator and r^2
    double u = y.d1 * x.v - x.d1 * y.v;
    double up = y.d2 * x.v - x.d2 * y.v;  // cross terms y'x' cancel
    double r2p = 2.0 * (x.v * x.d1 + y.v * y.d1);
    double th1 = u / r2;
    double th2 = up / r2 - u * r2p / (r2 * r2);
    return {th, th1, th2};
}

// trigamma of a jet; the chain rule pulls in the next two polygamma orders
inline Jet2 jet_polygamma1(const Jet2& a) {
    if (!(a.v > 0.0)) throw std::domain_error("jet_polygamma1: requires positive value");
    return jet_chain(a, polygamma(1, a.v), polygamma(2, a.v), polygamma(3, a.v));
}

// log(2cosh x) on jets, overflow-safe for any |x|
inline Jet2 jet_log_2cosh(const Jet2& x) {
    double t = std::tanh(x.v);
    double s = 1.0 - t * t;
    double a = std::fabs(x.v);
    double v = a + std::log1p(std::exp(-2.0 * a));
    return {v, t * x.d1, s * x.d1 * x.d1 + t * x.d2};
}

}  // namespace xyqfi

#endif
