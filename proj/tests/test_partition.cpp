#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "xyqfi/ed.hpp"
#include "xyqfi/partition.hpp"

using namespace xyqfi;

namespace {

template <class F>
double fd1(F f, double x, double d) {
    return (-f(x + 2 * d) + 8 * f(x + d) - 8 * f(x - d) + f(x - 2 * d)) / (12 * d);
}
template <class F>
double fd2(F f, double x, double d) {
    return (-f(x + 2 * d) + 16 * f(x + d) - 30 * f(x) + 16 * f(x - d) - f(x - 2 * d)) / (12 * d * d);
}

double canon(std::mt19937_64& rng) { return (rng() >> 11) / 9007199254740992.0; }

}  // namespace

TEST_CASE("precomputed partition references") {
    SpectrumContext c1 = build_spectrum(ChainParams{2, 1.0, 0.25, 0.7}, BathParams{0.0, 1.0}, 1.3,
                                        Alpha::field, Regime::weak);
    CHECK(log_partition(c1) == Catch::Approx(3.0248130187041911).epsilon(1e-13));
    ParityPartitions pp = parity_log_partitions(c1);
    CHECK(std::exp(pp.lnz_plus) == Catch::Approx(7.0521427642746239).epsilon(1e-13));
    CHECK(std::exp(pp.lnz_minus) == Catch::Approx(13.538011613216025).epsilon(1e-13));

    SpectrumContext c2 = build_spectrum(ChainParams{4, 1.0, 1.0, 1.1}, BathParams{0.0, 1.0}, 2.0,
                                        Alpha::field, Regime::weak);
    CHECK(log_partition(c2) == Catch::Approx(11.300811255417234).epsilon(1e-13));

    SpectrumContext c3 = build_spectrum(ChainParams{4, 1.0, 0.25, 0.8}, BathParams{0.2, 1.0}, 1.7,
                                        Alpha::field, Regime::strong);
    CHECK(log_partition(c3) == Catch::Approx(5.5285939308517245).epsilon(1e-13));

    SpectrumContext c4 = build_spectrum(ChainParams{6, 0.8, 0.6, 1.2}, BathParams{0.3, 2.0}, 0.9,
                                        Alpha::field, Regime::strong);
    CHECK(log_partition(c4) == Catch::Approx(5.5541816528044334).epsilon(1e-13));
}

TEST_CASE("partition sums agree with dense diagonalization") {
    std::mt19937_64 rng(20240);
    for (int trial = 0; trial < 24; ++trial) {
        ChainParams p;
        p.n = 2 * (1 + int(canon(rng) * 4));  // 2..8
        p.j = 0.2 + 1.0 * canon(rng);
        p.gamma = canon(rng);
        p.h = 2.0 * canon(rng);
        double beta = 0.2 + 4.8 * canon(rng);
        bool strong = (trial % 2 == 1);
        BathParams b{strong ? 0.2 : 0.0, 1.0};
        Regime reg = strong ? Regime::strong : Regime::weak;

        SpectrumContext ctx = build_spectrum(p, b, beta, Alpha::field, reg);
        Eigen::MatrixXd H = strong ? ed::hamiltonian_dressed(p, b, beta) : ed::hamiltonian(p);
        ed::Spectral s = ed::diagonalize(H);

        double lnz_a = log_partition(ctx);
        double lnz_e = ed::log_partition(s, beta);
        CHECK(std::fabs(lnz_a - lnz_e) < 1e-11 * std::max(1.0, std::fabs(lnz_e)));

        ParityPartitions pa = parity_log_partitions(ctx);
        auto [lzp_e, lzm_e] = ed::parity_log_partitions(s, p.n, beta);
        CHECK(std::fabs(std::expm1(pa.lnz_plus - lzp_e)) < 1e-11);
        CHECK(std::fabs(std::expm1(pa.lnz_minus - lzm_e)) < 1e-11);
    }
}

TEST_CASE("odd sector survives the low-temperature cancellation") {
    // deep in the disordered phase at large beta, P3 and P4 agree to many
    // digits and the naive difference would be pure roundoff
    ChainParams p{8, 1.0, 0.25, 1.8};
    SpectrumContext ctx = build_spectrum(p, BathParams{0.0, 1.0}, 30.0, Alpha::field, Regime::weak);
    PartitionTerms t = partition_terms(ctx);
    CHECK(t.p4.sign == 1.0);                       // all levels positive beyond h = J
    CHECK(t.p3.log_mag - t.p4.log_mag < 1e-8);     // the two logs nearly coincide
    ParityPartitions pp = parity_log_partitions(ctx);
    ed::Spectral s = ed::diagonalize(ed::hamiltonian(p));
    auto [lzp_e, lzm_e] = ed::parity_log_partitions(s, p.n, 30.0);
    CHECK(std::fabs(std::expm1(pp.lnz_minus - lzm_e)) < 1e-10);
    CHECK(std::fabs(std::expm1(pp.lnz_plus - lzp_e)) < 1e-10);

    // ordered side: the unpaired k = 0 level is negative, P4 flips sign and
    // the odd bracket turns into a sum
    ChainParams q{8, 1.0, 0.25, 0.4};
    SpectrumContext ctq = build_spectrum(q, BathParams{0.0, 1.0}, 30.0, Alpha::field, Regime::weak);
    CHECK(partition_terms(ctq).p4.sign == -1.0);
    ParityPartitions pq = parity_log_partitions(ctq);
    ed::Spectral sq = ed::diagonalize(ed::hamiltonian(q));
    auto [lzp_q, lzm_q] = ed::parity_log_partitions(sq, q.n, 30.0);
    CHECK(std::fabs(std::expm1(pq.lnz_minus - lzm_q)) < 1e-10);
    CHECK(std::fabs(std::expm1(pq.lnz_plus - lzp_q)) < 1e-10);
}

TEST_CASE("jet value path and stable value path coincide") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 16; ++trial) {
        ChainParams p;
        p.n = 2 * (1 + int(canon(rng) * 6));
        p.j = 0.2 + 1.0 * canon(rng);
        p.gamma = canon(rng);
        p.h = 2.0 * canon(rng);
        double beta = 0.2 + 9.8 * canon(rng);
        Regime reg = (trial % 2 == 1) ? Regime::strong : Regime::weak;
        SpectrumContext ctx = build_spectrum(p, BathParams{0.2, 1.0}, beta, Alpha::temperature, reg);
        CHECK(free_entropy_jet(ctx).v == Catch::Approx(log_partition(ctx)).epsilon(1e-13));
    }
}

TEST_CASE("ln Z jets against high-order finite differences") {
    std::mt19937_64 rng(20240);
    int done = 0;
    while (done < 30) {
        ChainParams p;
        p.n = 2 * (1 + int(canon(rng) * 4));
        p.j = 0.2 + 1.0 * canon(rng);
        p.gamma = 0.1 + 0.9 * canon(rng);
        p.h = 0.1 + 1.9 * canon(rng);
        double beta = 0.3 + 4.0 * canon(rng);
        Regime reg = (done % 2 == 1) ? Regime::strong : Regime::weak;
        BathParams b{0.2, 1.0};

        auto lnz_of_h = [&](double h) {
            ChainParams q = p;
            q.h = h;
            return log_partition(build_spectrum(q, b, beta, Alpha::field, reg));
        };
        auto lnz_of_beta = [&](double bb) {
            return log_partition(build_spectrum(p, b, bb, Alpha::field, reg));
        };

        Jet2 jh = free_entropy_jet(build_spectrum(p, b, beta, Alpha::field, reg));
        Jet2 jb = free_entropy_jet(build_spectrum(p, b, beta, Alpha::temperature, reg));
        const double d = 1e-3;
        double scale_h = std::max(1.0, std::fabs(jh.d2));
        double scale_b = std::max(1.0, std::fabs(jb.d2));
        CHECK(std::fabs(jh.d1 - fd1(lnz_of_h, p.h, d)) < 1e-7 * std::max(1.0, std::fabs(jh.d1)));
        CHECK(std::fabs(jh.d2 - fd2(lnz_of_h, p.h, d)) < 1e-6 * scale_h);
        CHECK(std::fabs(jb.d1 - fd1(lnz_of_beta, beta, d)) < 1e-7 * std::max(1.0, std::fabs(jb.d1)));
        CHECK(std::fabs(jb.d2 - fd2(lnz_of_beta, beta, d)) < 1e-6 * scale_b);
        ++done;
    }
}

TEST_CASE("internal energy from the jet matches the oracle") {
    // weak coupling: -d lnZ / d beta is the plain thermal energy
    ChainParams p{8, 1.0, 0.25, 1.0};
    SpectrumContext ctx = build_spectrum(p, BathParams{0.0, 1.0}, 2.0, Alpha::temperature, Regime::weak);
    double u = -free_entropy_jet(ctx).d1;
    ed::Spectral s = ed::diagonalize(ed::hamiltonian(p));
    CHECK(std::fabs(u - ed::energy_moment(s, 2.0, 1)) < 1e-9);

    // dressed chain: -d lnZ/d beta picks up the coupling drift <dH/dbeta>
    ChainParams p3{4, 1.0, 0.25, 0.8};
    SpectrumContext c3 = build_spectrum(p3, BathParams{0.2, 1.0}, 1.7, Alpha::temperature, Regime::strong);
    CHECK(-free_entropy_jet(c3).d1 == Catch::Approx(-2.8116304434423016).epsilon(1e-11));
}

TEST_CASE("antiperiodic product-state approximation") {
    ChainParams p{8, 1.0, 0.25, 1.0};
    BathParams b{0.0, 1.0};
    SpectrumContext ctx = build_spectrum(p, b, 5.0, Alpha::field, Regime::weak);
    LogPartitionOptions ppa{false, false};
    double lnz_ppa = log_partition(ctx, ppa);
    double lnz = log_partition(ctx);
    // visibly different at this size and temperature
    CHECK(std::fabs(lnz_ppa - lnz) > 1e-6);
    CHECK(free_entropy_jet(ctx, ppa).v == Catch::Approx(lnz_ppa).epsilon(1e-14));

    // per-site gap closes monotonically with system size
    double prev = 1e9;
    for (int n : {4, 8, 12, 16}) {
        ChainParams q{n, 1.0, 0.25, 1.0};
        SpectrumContext cq = build_spectrum(q, b, 5.0, Alpha::field, Regime::weak);
        double gap = std::fabs(log_partition(cq, ppa) - log_partition(cq)) / n;
        CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("field prefactor gauge shifts ln Z by N beta h_flat") {
    for (Regime reg : {Regime::weak, Regime::strong}) {
        SpectrumContext ctx = build_spectrum(ChainParams{6, 1.0, 0.25, 1.2}, BathParams{0.2, 1.0}, 2.0,
                                             Alpha::temperature, reg);
        LogPartitionOptions on{true, true};
        double shift = ctx.chain.n * ctx.beta_jet.v * ctx.h_flat.v;
        CHECK(log_partition(ctx, on) == Catch::Approx(log_partition(ctx) + shift).epsilon(1e-14));
        Jet2 a = free_entropy_jet(ctx);
        Jet2 g = free_entropy_jet(ctx, on);
        Jet2 extra = double(ctx.chain.n) * (ctx.beta_jet * ctx.h_flat);
        CHECK(g.v == Catch::Approx(a.v + extra.v).epsilon(1e-14));
        CHECK(g.d1 == Catch::Approx(a.d1 + extra.d1).margin(1e-12));
        CHECK(g.d2 == Catch::Approx(a.d2 + extra.d2).margin(1e-12));
        CHECK(partition_terms(ctx).field_prefactor_log == Catch::Approx(shift).epsilon(1e-15));
    }
}

TEST_CASE("sector moments resum to the internal energy") {
    // U = sum_j eps_j mu_j over both sectors when the spectrum itself is
    // temperature independent
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        ChainParams p;
        p.n = 2 * (1 + int(canon(rng) * 5));
        p.j = 0.3 + canon(rng);
        p.gamma = canon(rng);
        p.h = 2.0 * canon(rng);
        double beta = 0.3 + 6.0 * canon(rng);
        SpectrumContext ctx = build_spectrum(p, BathParams{0.0, 1.0}, beta, Alpha::temperature, Regime::weak);
        double lnz = log_partition(ctx);
        double u_from_moments = 0.0;
        auto mu_even = sector_moments(ctx.even, Sector::even, beta, lnz);
        auto mu_odd = sector_moments(ctx.odd, Sector::odd, beta, lnz);
        for (size_t j = 0; j < ctx.even.size(); ++j) u_from_moments += ctx.even[j].eps.v * mu_even[j];
        for (size_t j = 0; j < ctx.odd.size(); ++j) u_from_moments += ctx.odd[j].eps.v * mu_odd[j];
        double u_jet = -free_entropy_jet(ctx).d1;
        CHECK(std::fabs(u_from_moments - u_jet) < 1e-11 * std::max(1.0, std::fabs(u_jet)));
        for (double m : mu_even) CHECK(std::fabs(m) <= 0.5 + 1e-12);
        for (double m : mu_odd) CHECK(std::fabs(m) <= 0.5 + 1e-12);
    }
}

TEST_CASE("reduced sector products against direct evaluation") {
    ChainParams p{6, 0.9, 0.5, 0.8};
    double beta = 1.6;
    SpectrumContext ctx = build_spectrum(p, BathParams{0.0, 1.0}, beta, Alpha::field, Regime::weak);
    for (const auto* sec : {&ctx.even, &ctx.odd}) {
        Sector tag = (sec == &ctx.even) ? Sector::even : Sector::odd;
        double s = (tag == Sector::even) ? 1.0 : -1.0;
        for (size_t a = 0; a + 1 < sec->size(); a += 2) {
            double pc = 1.0, ps = 1.0;
            for (size_t l = 0; l < sec->size(); ++l) {
                if (l == a || l == a + 1) continue;
                double x = 0.5 * beta * (*sec)[l].eps.v;
                pc *= 2.0 * std::cosh(x);
                ps *= 2.0 * std::sinh(x);
            }
            double direct = pc + s * ps;
            SignedLog got = reduced_sector_product(*sec, tag, beta, a, a + 1);
            CHECK(sl_decode(got) == Catch::Approx(direct).epsilon(1e-12));
        }
    }
}
