#ifndef XYQFI_FISHER_HPP
#define XYQFI_FISHER_HPP

// Quantum Fisher information of the thermal chain with respect to the field
// or the inverse temperature, decomposed as
//   F = psi'' + tilde_c + F^q,
// where psi'' is the curvature of ln Z, tilde_c collects the drift of the
// single-particle spectrum through the parameter (it vanishes only when the
// mode energies are linear in the parameter after multiplication by beta),
// and F^q is the genuinely quantum part fed by the parameter dependence of
// the Bogoliubov angles.  All three pieces are assembled from the parity-
// resolved sector products, so the decomposition matches the projected
// ensemble exactly at finite N; agreement with dense diagonalization is the
// acceptance gate for every formula in this header.
//
// Also here: the thermodynamic observables built from the same moments
// (internal energy / entropy / free energy of the dressed chain), the
// finite-size subdivision regression and the phenomenological estimator it
// feeds, the relative-entropy consistency check, and the phase-boundary
// locator for the dressed transition.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "partition.hpp"

namespace xyqfi {

struct QfiOptions {
    bool finite_size = true;
    bool include_prefactor = false;
    // alternative normalization of the quantum term (extra 9/2 e^{-2 beta eps}
    // per pair); kept only for side-by-side comparison, fails the oracle
    bool printed_quantum_variant = false;
};

struct QfiBreakdown {
    double psi_dd = 0.0;   // d2 ln Z / d alpha^2
    double tilde_c = 0.0;  // spectral drift term sum_j (beta eps_j)'' mu_j
    double quantum = 0.0;  // Bogoliubov-angle term, nonnegative
    double total = 0.0;    // exact sum of the three
    Alpha alpha = Alpha::field;
    Regime regime = Regime::weak;
    bool finite_size = true;
};

// <O> for O = -cyy sum_n Y_n Y_{n+1} - cz sum_n Z_n under the parity-split
// thermal ensemble.  Rotating O into the Bogoliubov frame of the *thermal*
// Hamiltonian leaves per-mode weights
//   D_k = Delta_k cos(theta_k) + btilde_k sin(theta_k),
//   Delta_k = 2(cz - cyy cos k),  btilde_k = -2 cyy sin k,
// paired with the mode moments mu_k; unpaired levels carry Delta_k alone.
inline double dressed_operator_expectation(const SpectrumContext& ctx, double cyy, double cz) {
    const double beta = ctx.beta_jet.v;
    const double lnz = parity_log_partitions(ctx).lnz_total;
    double out = 0.0;
    for (const auto* sec : {&ctx.even, &ctx.odd}) {
        Sector tag = (sec == &ctx.even) ? Sector::even : Sector::odd;
        std::vector<double> mu = sector_moments(*sec, tag, beta, lnz);
        for (size_t j = 0; j < sec->size(); ++j) {
            const ModeJet& m = (*sec)[j];
            double delta = 2.0 * (cz - cyy * std::cos(m.k));
            double d = m.paired
                           ? delta * std::cos(m.theta.v) - 2.0 * cyy * std::sin(m.k) * std::sin(m.theta.v)
                           : delta;
            out += d * mu[j];
        }
    }
    return out;
}

// heat-capacity correction operator <d^2(beta H_flat)/d beta^2>; identically
// zero at weak coupling where the couplings do not move with temperature
inline double tilde_classical(const ChainParams& p, const BathParams& b, double beta, Regime regime) {
    SpectrumContext ctx = build_spectrum(p, b, beta, Alpha::temperature, regime);
    if (regime == Regime::weak) return 0.0;
    double cyy = 0.5 * ctx.renorm.j_beta2 * (1.0 - p.gamma);
    return dressed_operator_expectation(ctx, cyy, ctx.renorm.h_beta2);
}

// microscopic subdivision energy -beta <dH_flat/dbeta>
inline double microscopic_subdivision(const ChainParams& p, const BathParams& b, double beta, Regime regime) {
    SpectrumContext ctx = build_spectrum(p, b, beta, Alpha::temperature, regime);
    if (regime == Regime::weak) return 0.0;
    double cyy = 0.5 * ctx.renorm.j1 * (1.0 - p.gamma);
    return -beta * dressed_operator_expectation(ctx, cyy, ctx.renorm.h1);
}

namespace detail {

// G = sum_j (beta eps_j)'' mu_j over both sectors (or the product-state
// moments -tanh(x)/2 over the antiperiodic grid alone)
inline double spectral_drift_term(const SpectrumContext& ctx, bool finite_size, double lnz_phys) {
    const double beta = ctx.beta_jet.v;
    double g = 0.0;
    if (!finite_size) {
        for (const ModeJet& m : ctx.even) {
            double wdd = (ctx.beta_jet * m.eps).d2;
            g += wdd * (-0.5 * std::tanh(0.5 * beta * m.eps.v));
        }
        return g;
    }
    for (const auto* sec : {&ctx.even, &ctx.odd}) {
        Sector tag = (sec == &ctx.even) ? Sector::even : Sector::odd;
        std::vector<double> mu = sector_moments(*sec, tag, beta, lnz_phys);
        for (size_t j = 0; j < sec->size(); ++j) g += (ctx.beta_jet * (*sec)[j].eps).d2 * mu[j];
    }
    return g;
}

// F^q: per paired half-set mode, (theta')^2 sinh(beta eps) tanh(beta eps)
// against the pair-reduced sector bracket, normalized by the full Z.  The
// bracket keeps the sector's own relative sign; since cosh dominates sinh
// factor by factor it stays positive, making every term nonnegative.
inline double quantum_term(const SpectrumContext& ctx, double lnz_phys, bool printed_variant) {
    const double beta = ctx.beta_jet.v;
    double out = 0.0;
    for (const auto* sec : {&ctx.even, &ctx.odd}) {
        Sector tag = (sec == &ctx.even) ? Sector::even : Sector::odd;
        for (size_t i = 0; i + 1 < sec->size(); i += 2) {
            const ModeJet& m = (*sec)[i];
            if (!m.paired) break;  // unpaired entries trail the odd list
            double thp = m.theta.d1;
            if (thp == 0.0) continue;
            double y = beta * m.eps.v;
            SignedLog sh = log_2sinh(y);
            if (sh.sign <= 0) continue;  // closed gap: zero thermal weight
            double logw = (sh.log_mag - std::numbers::ln2) - log_coth_abs(y);  // log(sinh y tanh y)
            SignedLog bracket = reduced_sector_product(*sec, tag, beta, i, i + 1);
            double term = thp * thp * bracket.sign * std::exp(bracket.log_mag + logw - lnz_phys);
            if (printed_variant) term *= 4.5 * std::exp(-2.0 * y);
            out += term;
        }
    }
    return out;
}

// product-state quantum term: 2 (theta')^2 sinh^2(x) / cosh(2x) per pair
inline double quantum_term_ppa(const SpectrumContext& ctx) {
    const double beta = ctx.beta_jet.v;
    double out = 0.0;
    for (size_t i = 0; i + 1 < ctx.even.size(); i += 2) {
        const ModeJet& m = ctx.even[i];
        double thp = m.theta.d1;
        if (thp == 0.0) continue;
        double x = 0.5 * beta * m.eps.v;
        SignedLog sh = log_2sinh(x);
        if (sh.sign <= 0) continue;
        out += thp * thp * std::exp(2.0 * sh.log_mag - log_2cosh(2.0 * x));
    }
    return out;
}

}  // namespace detail

inline QfiBreakdown qfi_total(const ChainParams& p, const BathParams& b, double beta, Alpha alpha,
                              Regime regime, const QfiOptions& opt = {}) {
    SpectrumContext ctx = build_spectrum(p, b, beta, alpha, regime);
    LogPartitionOptions lopt{opt.finite_size, opt.include_prefactor};
    Jet2 psi = free_entropy_jet(ctx, lopt);
    // moments and brackets normalize against the physical Z (no gauge term)
    double lnz_phys = log_partition(ctx, {opt.finite_size, false});

    QfiBreakdown r;
    r.alpha = alpha;
    r.regime = regime;
    r.finite_size = opt.finite_size;
    r.psi_dd = psi.d2;
    r.tilde_c = detail::spectral_drift_term(ctx, opt.finite_size, lnz_phys);
    if (opt.include_prefactor) {
        // the gauge term moves N (beta h_flat)'' from the drift sum into
        // psi''; subtract it back so the total stays the physical QFI
        r.tilde_c -= double(p.n) * (ctx.beta_jet * ctx.h_flat).d2;
    }
    r.quantum = opt.finite_size ? detail::quantum_term(ctx, lnz_phys, opt.printed_quantum_variant)
                                : detail::quantum_term_ppa(ctx);
    r.total = r.psi_dd + r.tilde_c + r.quantum;
    return r;
}

// standalone quantum term (the eigenvector part of the QFI); the default
// normalization is the one that survives the dense-diagonalization gate,
// printed_variant selects the rejected alternative for comparison
inline double quantum_contribution(const ChainParams& p, const BathParams& b, double beta, Alpha alpha,
                                   Regime regime, bool printed_variant = false) {
    SpectrumContext ctx = build_spectrum(p, b, beta, alpha, regime);
    return detail::quantum_term(ctx, log_partition(ctx), printed_variant);
}

// ratio of the product-state approximation to the exact parity-projected QFI
inline double ratio_ppa(const ChainParams& p, const BathParams& b, double beta, Alpha alpha, Regime regime) {
    double exact = qfi_total(p, b, beta, alpha, regime, {true, false, false}).total;
    if (std::fabs(exact) < 1e-12)
        throw std::domain_error("ratio_ppa: exact QFI vanishes at this point");
    double approx = qfi_total(p, b, beta, alpha, regime, {false, false, false}).total;
    return approx / exact;
}

struct MfgThermo {
    double f_star;  // -ln Z / beta
    double u_star;  // <H_flat> + beta <dH_flat/dbeta>
    double s_star;  // S_vN + beta^2 <dH_flat/dbeta>
};

// thermodynamic triple of the dressed chain; F* = U* - S*/beta holds
// identically, and each ingredient is built from the mode moments rather
// than from ln Z derivatives, so the identity cross-checks the moments
inline MfgThermo mfg_thermo(const ChainParams& p, const BathParams& b, double beta, Regime regime) {
    SpectrumContext ctx = build_spectrum(p, b, beta, Alpha::temperature, regime);
    double lnz = log_partition(ctx);
    double eh = 0.0;
    for (const auto* sec : {&ctx.even, &ctx.odd}) {
        Sector tag = (sec == &ctx.even) ? Sector::even : Sector::odd;
        std::vector<double> mu = sector_moments(*sec, tag, beta, lnz);
        for (size_t j = 0; j < sec->size(); ++j) eh += (*sec)[j].eps.v * mu[j];
    }
    double eo1 = 0.0;
    if (regime == Regime::strong) {
        double cyy = 0.5 * ctx.renorm.j1 * (1.0 - p.gamma);
        eo1 = dressed_operator_expectation(ctx, cyy, ctx.renorm.h1);
    }
    MfgThermo t;
    t.f_star = -lnz / beta;
    t.u_star = eh + beta * eo1;
    t.s_star = beta * eh + lnz + beta * beta * eo1;
    return t;
}

enum class SubdivisionSource { bare, effective, microscopic };

struct SubdivisionResult {
    double f_bulk = 0.0;    // per-site slope of F(N)
    double e_sub = 0.0;     // size-independent offset
    double a_ratio = 0.0;   // e_sub / U at the target size
    double residual = 0.0;  // worst |fit - data| over the fitted sizes
    SubdivisionSource source = SubdivisionSource::bare;
    std::vector<int> sizes;
};

inline const std::vector<int>& default_subdivision_sizes() {
    static const std::vector<int> sizes{4, 6, 8, 10, 12};
    return sizes;
}

namespace detail {

struct LinFit {
    double slope = 0.0, intercept = 0.0, residual = 0.0;
};

// centered ordinary least squares; for data that is exactly linear with
// representable values this reproduces slope and a zero intercept bit for bit
inline LinFit linear_fit(const std::vector<int>& n, const std::vector<double>& f) {
    if (n.size() != f.size() || n.size() < 2)
        throw std::invalid_argument("linear_fit: need matching lists of size >= 2");
    double nbar = 0.0, fbar = 0.0;
    for (size_t i = 0; i < n.size(); ++i) {
        nbar += n[i];
        fbar += f[i];
    }
    nbar /= double(n.size());
    fbar /= double(n.size());
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n.size(); ++i) {
        sxx += (n[i] - nbar) * (n[i] - nbar);
        sxy += (n[i] - nbar) * (f[i] - fbar);
    }
    if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate size list");
    LinFit r;
    r.slope = sxy / sxx;
    r.intercept = fbar - r.slope * nbar;
    for (size_t i = 0; i < n.size(); ++i)
        r.residual = std::max(r.residual, std::fabs(r.slope * n[i] + r.intercept - f[i]));
    return r;
}

// Richardson-extrapolated second central difference (base steps d and 2d)
template <class F>
double five_point_curvature(F&& f, double x0, double d) {
    return (-f(x0 + 2 * d) + 16 * f(x0 + d) - 30 * f(x0) + 16 * f(x0 - d) - f(x0 - 2 * d)) / (12 * d * d);
}

}  // namespace detail

// linear fit F(N) = N f_bulk + e_sub of the total free energy across system
// sizes; e_sub is the additivity violation a subdivided measurement scheme
// has to pay, and a_ratio rescales it against the internal energy of the
// target chain (computed from the exact derivative, not a difference)
inline SubdivisionResult subdivision_regression(const ChainParams& p, const BathParams& b, double beta,
                                                Regime regime,
                                                const std::vector<int>& sizes = default_subdivision_sizes()) {
    std::vector<double> f(sizes.size());
    for (size_t i = 0; i < sizes.size(); ++i) {
        ChainParams q = p;
        q.n = sizes[i];
        f[i] = -log_partition(q, b, beta, regime) / beta;
    }
    detail::LinFit fit = detail::linear_fit(sizes, f);
    SubdivisionResult r;
    r.sizes = sizes;
    r.source = (regime == Regime::weak) ? SubdivisionSource::bare : SubdivisionSource::effective;
    r.f_bulk = fit.slope;
    r.e_sub = fit.intercept;
    r.residual = fit.residual;
    double u = -free_entropy_jet(build_spectrum(p, b, beta, Alpha::temperature, regime)).d1;
    if (std::fabs(u) < 1e-12)
        throw std::domain_error("subdivision_regression: internal energy vanishes, a = e_sub/U undefined");
    r.a_ratio = r.e_sub / u;
    return r;
}

inline constexpr double phenomenological_fd_step = 1e-3;

// phenomenological estimator: curvature of
//   g(alpha) = ln Z(beta(1+a(alpha)); alpha) + beta(alpha) e_sub(alpha)
// with the subdivision fit redone at every stencil point, so the parameter
// dependence of the regression itself is differentiated through.  With
// force_zero_subdivision the fit is bypassed (a = 0, e_sub = 0) and the
// estimator must reduce to the plain stencil curvature of ln Z; keeping the
// code path shared makes that reduction a meaningful consistency probe.
inline double phenomenological_qfi(const ChainParams& p, const BathParams& b, double beta, Alpha alpha,
                                   Regime regime,
                                   const std::vector<int>& sizes = default_subdivision_sizes(),
                                   bool force_zero_subdivision = false) {
    auto g = [&](double x) {
        ChainParams q = p;
        double bb = beta;
        if (alpha == Alpha::field) q.h = x; else bb = x;
        double a = 0.0, e = 0.0;
        if (!force_zero_subdivision) {
            SubdivisionResult sub = subdivision_regression(q, b, bb, regime, sizes);
            a = sub.a_ratio;
            e = sub.e_sub;
        }
        return log_partition(q, b, bb * (1.0 + a), regime) + bb * e;
    };
    double x0 = (alpha == Alpha::field) ? p.h : beta;
    return detail::five_point_curvature(g, x0, phenomenological_fd_step);
}

// relative entropy between the target state and the a-rescaled reference,
//   D = ln Z(beta(1+a)) - ln Z(beta) + a beta U,
// nonnegative and O(a^2) by construction
inline double kl_divergence_check(const ChainParams& p, const BathParams& b, double beta, double a_ratio,
                                  Regime regime) {
    double u = -free_entropy_jet(build_spectrum(p, b, beta, Alpha::temperature, regime)).d1;
    return log_partition(p, b, beta * (1.0 + a_ratio), regime) - log_partition(p, b, beta, regime) +
           a_ratio * beta * u;
}

// field at which the dressed chain closes its k = 0 gap, h* = J_flat / <C>;
// the closed form is cross-checked by bisecting the gap itself
inline double phase_boundary_h(const ChainParams& p, const BathParams& b, double beta) {
    double c = decay_factor(b, Jet2::constant(beta)).v;
    double closed = 0.5 * p.j * ((1.0 + p.gamma) / c + c * (1.0 - p.gamma));
    double j_flat = 0.5 * p.j * ((1.0 + p.gamma) + c * c * (1.0 - p.gamma));
    auto gap = [&](double h) { return c * h - j_flat; };
    double lo = 0.0, hi = 2.0 * closed + 1.0;
    if (gap(lo) > 0.0 || gap(hi) < 0.0) throw std::runtime_error("phase_boundary_h: bracket failed");
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    double bisected = 0.5 * (lo + hi);
    if (std::fabs(bisected - closed) > 1e-10 * std::max(1.0, closed))
        throw std::runtime_error("phase_boundary_h: closed form and bisection disagree");
    return closed;
}

}  // namespace xyqfi

#endif
