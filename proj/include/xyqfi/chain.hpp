#ifndef XYQFI_CHAIN_HPP
#define XYQFI_CHAIN_HPP

// Finite periodic anisotropic XY chain in a transverse field,
//   H = -J/2 * sum_n [(1+gamma) sx sx + (1-gamma) sy sy] - h sum_n sz,
// mapped to free fermions.  Translation symmetry splits the problem into
// parity sectors with distinct momentum grids: the even-parity (antiperiodic)
// sector uses half-odd-integer modes, the odd-parity (periodic) sector uses
// integer modes including the unpaired k = 0 and k = pi, whose energies keep
// their sign (epsilon_0 = 2(h-J) is negative in the ordered phase).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "jet.hpp"

namespace xyqfi {

struct ChainParams {
    int n = 2;           // site count, even
    double j = 1.0;      // exchange
    double gamma = 1.0;  // anisotropy, [0, 1]
    double h = 0.0;      // transverse field

    void validate() const {
        if (n < 2 || n % 2 != 0) throw std::invalid_argument("ChainParams: N must be even and >= 2");
        if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("ChainParams: gamma must lie in [0, 1]");
        if (h < 0.0) throw std::invalid_argument("ChainParams: h must be >= 0");
    }
};

struct ModeTable {
    std::vector<double> k_plus_half;   // (2l+1)pi/N, l = 0 .. N/2-1
    std::vector<double> k_minus_half;  // 2l pi/N,    l = 1 .. N/2-1
    std::vector<double> K_plus;        // +-k_plus_half, size N
    std::vector<double> K_minus;       // +-k_minus_half plus {0, pi}, size N
};

inline ModeTable momentum_sets(int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("momentum_sets: N must be even and >= 2");
    ModeTable t;
    const double pi = std::numbers::pi;
    for (int l = 0; l < n / 2; ++l) t.k_plus_half.push_back((2 * l + 1) * pi / n);
    for (int l = 1; l < n / 2; ++l) t.k_minus_half.push_back(2 * l * pi / n);
    for (double k : t.k_plus_half) { t.K_plus.push_back(k); t.K_plus.push_back(-k); }
    for (double k : t.k_minus_half) { t.K_minus.push_back(k); t.K_minus.push_back(-k); }
    t.K_minus.push_back(0.0);
    t.K_minus.push_back(pi);
    return t;
}

namespace detail {
inline bool is_zero_mode(double k) { return std::fabs(k) < 1e-12; }
inline bool is_pi_mode(double k) { return std::fabs(std::fabs(k) - std::numbers::pi) < 1e-12; }
}  // namespace detail

// paired modes: eps_k = 2 sqrt((h - J cos k)^2 + J^2 gamma^2 sin^2 k);
// unpaired:     eps_0 = 2(h - J), eps_pi = 2(h + J), signs preserved
inline double quasiparticle_energy(const ChainParams& p, double k) {
    if (detail::is_zero_mode(k)) return 2.0 * (p.h - p.j);
    if (detail::is_pi_mode(k)) return 2.0 * (p.h + p.j);
    double a = p.h - p.j * std::cos(k);
    double b = p.j * p.gamma * std::sin(k);
    return 2.0 * std::hypot(a, b);
}

// Bogoliubov angle, branch fixed by eps cos(theta) = 2(h - J cos k) and
// eps sin(theta) = 2 J gamma sin k; two-argument arctangent covers the
// h < J cos k quadrants where a principal-branch arctan would be off by pi
inline double bogoliubov_angle(const ChainParams& p, double k) {
    if (detail::is_zero_mode(k) || detail::is_pi_mode(k))
        throw std::invalid_argument("bogoliubov_angle: unpaired mode has no rotation");
    double a = p.h - p.j * std::cos(k);
    double b = p.j * p.gamma * std::sin(k);
    if (a == 0.0 && b == 0.0) return 0.0;  // degenerate closure; angle undefined, fixed by convention
    return std::atan2(b, a);
}

// Effective couplings fed to the spectrum.  At weak coupling these are the
// bare (h, J, J*gamma); the polaron-renormalized path supplies
//   field = <C> h,
//   hop   = J/2 [(1+gamma) + <C>^2 (1-gamma)],
//   pair  = J/2 [(1+gamma) - <C>^2 (1-gamma)],
// as jets in the active parameter so all derivatives flow through.
struct CouplingJets {
    Jet2 field;
    Jet2 hop;
    Jet2 pair;
};

inline CouplingJets bare_couplings(const ChainParams& p, Jet2 h_seed) {
    return {h_seed, Jet2::constant(p.j), Jet2::constant(p.j * p.gamma)};
}

struct ModeJet {
    double k = 0.0;
    Jet2 eps;    // quasiparticle energy (signed for unpaired modes)
    Jet2 theta;  // Bogoliubov angle; zero jet for unpaired modes
    bool paired = true;
};

inline ModeJet spectrum_jets(const CouplingJets& c, double k) {
    ModeJet m;
    m.k = k;
    if (detail::is_zero_mode(k)) {
        m.eps = 2.0 * (c.field - c.hop);
        m.paired = false;
        return m;
    }
    if (detail::is_pi_mode(k)) {
        m.eps = 2.0 * (c.field + c.hop);
        m.paired = false;
        return m;
    }
    Jet2 a = c.field - c.hop * std::cos(k);
    Jet2 b = c.pair * std::sin(k);
    if (a.v == 0.0 && b.v == 0.0) {
        // exactly closed gap (isotropic chain at its critical mode); both the
        // energy and the angle are non-differentiable here — pin the
        // conventional values and zero derivatives
        return m;
    }
    m.eps = 2.0 * jet_sqrt(a * a + b * b);
    m.theta = jet_atan2(b, a);
    return m;
}

enum class Sector { even, odd };  // even = antiperiodic modes, odd = periodic incl. 0 and pi

// Full mode list of one parity sector with +-k partners adjacent; theta is
// odd in k, eps even, so the mirror entries reuse the +k jets.
inline std::vector<ModeJet> sector_spectrum_jets(const CouplingJets& c, const ModeTable& t, Sector s) {
    std::vector<ModeJet> out;
    const auto& half = (s == Sector::even) ? t.k_plus_half : t.k_minus_half;
    for (double k : half) {
        ModeJet m = spectrum_jets(c, k);
        out.push_back(m);
        ModeJet mm = m;
        mm.k = -k;
        mm.theta = -m.theta;
        out.push_back(mm);
    }
    if (s == Sector::odd) {
        out.push_back(spectrum_jets(c, 0.0));
        out.push_back(spectrum_jets(c, std::numbers::pi));
    }
    return out;
}

}  // namespace xyqfi

#endif
