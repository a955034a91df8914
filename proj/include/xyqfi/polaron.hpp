#ifndef XYQFI_POLARON_HPP
#define XYQFI_POLARON_HPP

// Polaron dressing of the chain by an Ohmic bath with exponential cutoff,
// spectral density K(w) = g * w * exp(-w/w_c).  Each bond/field operator is
// dressed by the thermal average of the displacement cloud,
//   <C> = exp(-2 * Int_0^inf dw K(w)/w^2 * coth(beta w / 2)),
// which closes to exp(2g - 4g z^2 psi'(z)) with z = 1/(beta w_c) and psi'
// the trigamma function.  The renormalized chain keeps the XY form with
//   h_flat = <C> h,   J_flat gamma_flat^{+,-} rewritten through
//   hop  = J/2 [(1+gamma) + <C>^2 (1-gamma)],
//   pair = J/2 [(1+gamma) - <C>^2 (1-gamma)].
// Because <C> depends on beta, thermometry derivatives need the beta-jets of
// these couplings; they are produced here once and reused everywhere.

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "chain.hpp"
#include "jet.hpp"
#include "polygamma.hpp"

namespace xyqfi {

struct BathParams {
    double g = 0.0;        // dimensionless coupling strength
    double omega_c = 1.0;  // cutoff frequency

    void validate() const {
        if (g < 0.0) throw std::invalid_argument("BathParams: g must be >= 0");
        if (omega_c <= 0.0) throw std::invalid_argument("BathParams: omega_c must be > 0");
    }
};

// closed-form decay factor with derivatives in whatever parameter the beta
// jet carries; g = 0 gives the exact constant 1
inline Jet2 decay_factor(const BathParams& b, Jet2 beta) {
    if (beta.v <= 0.0) throw std::invalid_argument("decay_factor: beta must be > 0");
    if (b.g == 0.0) return Jet2::constant(1.0);
    Jet2 z = 1.0 / (beta * b.omega_c);
    Jet2 expo = 2.0 * b.g - 4.0 * b.g * z * z * jet_polygamma1(z);
    return jet_exp(expo);
}

// independent oracle: numerical quadrature of the defining integral.  The
// integrand g*(w/w_c^2) e^{-w/w_c} coth(beta w/2) has the finite limit
// 2g/(beta w_c^2) at w -> 0, substituted analytically below 1e-8 w_c; the
// tail beyond 50 w_c is dropped, bounded by ~51 g e^{-50}/w_c < 1e-19 on the
// exponent for any g <= 1.
inline double decay_factor_quadrature(const BathParams& b, double beta) {
    if (beta <= 0.0) throw std::invalid_argument("decay_factor_quadrature: beta must be > 0");
    if (b.g == 0.0) return 1.0;
    const double wc = b.omega_c;
    auto f = [&](double w) {
        if (w < 1e-8 * wc) return 2.0 * b.g / (beta * wc * wc);
        return b.g * (w / (wc * wc)) * std::exp(-w / wc) / std::tanh(0.5 * beta * w);
    };
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    double I = gauss_kronrod<double, 31>::integrate(f, 0.0, 50.0 * wc, 12, 1e-13, &err);
    return std::exp(-2.0 * I);
}

// couplings of the renormalized chain plus the derivative coefficients that
// feed the internal-energy and heat-capacity operators:
//   h1 = h d<C>/dbeta,            j1 = J d<C>^2/dbeta,
//   h_beta2 = h d^2(beta <C>)/dbeta^2,  j_beta2 = J d^2(beta <C>^2)/dbeta^2
struct RenormalizedParams {
    Jet2 c_avg;
    Jet2 h_flat;
    Jet2 j_flat;
    Jet2 gamma_flat;
    double h1 = 0.0;
    double j1 = 0.0;
    double h_beta2 = 0.0;
    double j_beta2 = 0.0;
};

// beta enters as a jet so the caller chooses the active parameter: a variable
// jet for thermometry (all coefficients populated), a constant jet for
// magnetometry (coefficients vanish along with d<C>/dalpha)
inline RenormalizedParams renormalize(const ChainParams& p, const BathParams& b, Jet2 beta) {
    p.validate();
    b.validate();
    RenormalizedParams r;
    r.c_avg = decay_factor(b, beta);
    Jet2 c2 = r.c_avg * r.c_avg;
    r.h_flat = r.c_avg * p.h;
    r.j_flat = 0.5 * p.j * ((1.0 + p.gamma) + c2 * (1.0 - p.gamma));
    Jet2 pair = 0.5 * p.j * ((1.0 + p.gamma) - c2 * (1.0 - p.gamma));
    r.gamma_flat = pair / r.j_flat;
    r.h1 = p.h * r.c_avg.d1;
    r.j1 = p.j * c2.d1;
    r.h_beta2 = p.h * (beta * r.c_avg).d2;
    r.j_beta2 = p.j * (beta * c2).d2;
    return r;
}

// effective couplings for the spectrum; h_seed carries the field jet so that
// magnetometry derivatives flow (pass Jet2::variable(h) for alpha = h)
inline CouplingJets renormalized_couplings(const ChainParams& p, const RenormalizedParams& r, Jet2 h_seed) {
    Jet2 c2 = r.c_avg * r.c_avg;
    Jet2 hop = 0.5 * p.j * ((1.0 + p.gamma) + c2 * (1.0 - p.gamma));
    Jet2 pair = 0.5 * p.j * ((1.0 + p.gamma) - c2 * (1.0 - p.gamma));
    return {r.c_avg * h_seed, hop, pair};
}

}  // namespace xyqfi

#endif
