#ifndef XYQFI_ED_HPP
#define XYQFI_ED_HPP

// Brute-force oracle: dense diagonalization of the spin Hamiltonian in the
// full 2^N basis.  Everything the analytic free-fermion pipeline produces
// (partition sums, parity-resolved traces, Fisher information, operator
// expectations) is recomputed here independently, so the two can only agree
// if the momentum grids, parity projectors and Bogoliubov branches are right.
//
// H = -sum_n [cxx X_n X_{n+1} + cyy Y_n Y_{n+1}] - cz sum_n Z_n, periodic.
// Basis state i: bit s set means spin down at site s (sz eigenvalue -1).
// The Hamiltonian is real symmetric: -cyy Y Y = +cyy (iY)(iY) with iY real,
// so the whole computation stays in real arithmetic.

#include <cmath>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "chain.hpp"
#include "polaron.hpp"

namespace xyqfi::ed {

inline Eigen::MatrixXd coupling_hamiltonian(int n, double cxx, double cyy, double cz) {
    if (n < 2 || n > 14) throw std::invalid_argument("coupling_hamiltonian: need 2 <= N <= 14");
    const int dim = 1 << n;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        double mz = 0.0;
        for (int s = 0; s < n; ++s) mz += 1.0 - 2.0 * ((i >> s) & 1);
        H(i, i) -= cz * mz;
        for (int s = 0; s < n; ++s) {
            // N = 2 visits the single bond from both sides, doubling it —
            // exactly what the momentum-space treatment produces there
            int t = (s + 1) % n;
            int flipped = i ^ ((1 << s) | (1 << t));
            bool aligned = ((i >> s) & 1) == ((i >> t) & 1);
            // <flipped| X X |i> = 1;  <flipped| Y Y |i> = -1 if the two bits
            // agree (00 <-> 11), +1 if they differ (01 <-> 10)
            H(flipped, i) += -cxx + (aligned ? cyy : -cyy);
        }
    }
    return H;
}

inline Eigen::MatrixXd hamiltonian(const ChainParams& p) {
    return coupling_hamiltonian(p.n, 0.5 * p.j * (1.0 + p.gamma), 0.5 * p.j * (1.0 - p.gamma), p.h);
}

// dressed chain at a given inverse temperature (couplings themselves carry
// the decay factor, so the matrix must be rebuilt when beta moves)
inline Eigen::MatrixXd hamiltonian_dressed(const ChainParams& p, const BathParams& b, double beta) {
    double c = decay_factor(b, Jet2::constant(beta)).v;
    return coupling_hamiltonian(p.n, 0.5 * p.j * (1.0 + p.gamma), 0.5 * p.j * (1.0 - p.gamma) * c * c, p.h * c);
}

struct Spectral {
    Eigen::VectorXd e;  // eigenvalues, ascending
    Eigen::MatrixXd v;  // eigenvectors in columns
};

inline Spectral diagonalize(const Eigen::MatrixXd& H) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

inline double log_partition(const Spectral& s, double beta) {
    double e0 = s.e.minCoeff();
    double acc = 0.0;
    for (int i = 0; i < s.e.size(); ++i) acc += std::exp(-beta * (s.e(i) - e0));
    return -beta * e0 + std::log(acc);
}

// normalized Boltzmann weights in the eigenbasis
inline Eigen::VectorXd boltzmann(const Spectral& s, double beta) {
    double e0 = s.e.minCoeff();
    Eigen::VectorXd p(s.e.size());
    for (int i = 0; i < s.e.size(); ++i) p(i) = std::exp(-beta * (s.e(i) - e0));
    p /= p.sum();
    return p;
}

inline Eigen::MatrixXd thermal_density(const Spectral& s, double beta) {
    Eigen::VectorXd p = boltzmann(s, beta);
    return s.v * p.asDiagonal() * s.v.transpose();
}

inline double expectation(const Spectral& s, const Eigen::MatrixXd& op, double beta) {
    Eigen::VectorXd p = boltzmann(s, beta);
    Eigen::MatrixXd M = op * s.v;
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i) acc += p(i) * s.v.col(i).dot(M.col(i));
    return acc;
}

// raw thermal moment <H^power> from the eigenvalues
inline double energy_moment(const Spectral& s, double beta, int power) {
    Eigen::VectorXd p = boltzmann(s, beta);
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i) acc += p(i) * std::pow(s.e(i), power);
    return acc;
}

inline double entropy(const Spectral& s, double beta) {
    Eigen::VectorXd p = boltzmann(s, beta);
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i)
        if (p(i) > 0.0) acc -= p(i) * std::log(p(i));
    return acc;
}

// log of the parity-resolved partition sums.  Spin-flip parity prod_n Z_n is
// diagonal with eigenvalue (-1)^popcount(i); it weights each eigenstate by
// its even/odd overlap, and both weights are manifestly nonnegative, so no
// cancellation enters even when the odd trace is exponentially small.
inline std::pair<double, double> parity_log_partitions(const Spectral& s, int n, double beta) {
    const int dim = 1 << n;
    if (s.e.size() != dim) throw std::invalid_argument("parity_log_partitions: size mismatch");
    double e0 = s.e.minCoeff();
    double zp = 0.0, zm = 0.0;
    for (int col = 0; col < dim; ++col) {
        double wp = 0.0, wm = 0.0;
        for (int i = 0; i < dim; ++i) {
            double a = s.v(i, col) * s.v(i, col);
            if (__builtin_popcount(unsigned(i)) % 2 == 0) wp += a; else wm += a;
        }
        double bw = std::exp(-beta * (s.e(col) - e0));
        zp += wp * bw;
        zm += wm * bw;
    }
    return {-beta * e0 + std::log(zp), -beta * e0 + std::log(zm)};
}

// SLD Fisher information of the thermal family alpha -> rho(H(alpha), beta(alpha)),
// with d rho by symmetric differences.  family(alpha) returns {H, beta}.
template <class Family>
double qfi_thermal(Family family, double alpha0) {
    const double d = 1e-5 * (std::fabs(alpha0) + 1.0);
    auto rho_at = [&](double a) {
        auto [H, beta] = family(a);
        return thermal_density(diagonalize(H), beta);
    };
    Eigen::MatrixXd drho = (rho_at(alpha0 + d) - rho_at(alpha0 - d)) / (2.0 * d);
    drho = 0.5 * (drho + drho.transpose()).eval();
    auto [H0, beta0] = family(alpha0);
    Spectral s0 = diagonalize(H0);
    Eigen::VectorXd p = boltzmann(s0, beta0);
    Eigen::MatrixXd M = s0.v.transpose() * drho * s0.v;
    double F = 0.0;
    for (int a = 0; a < p.size(); ++a) {
        for (int b = 0; b < p.size(); ++b) {
            double sum = p(a) + p(b);
            if (sum > 1e-12) F += 2.0 * M(a, b) * M(a, b) / sum;
        }
    }
    return F;
}

// relative entropy D(rho_beta1 || rho_beta2) for one Hamiltonian, summed
// state by state over the spectrum
inline double kl_divergence(const Spectral& s, double beta1, double beta2) {
    double lnz1 = log_partition(s, beta1);
    double lnz2 = log_partition(s, beta2);
    Eigen::VectorXd p = boltzmann(s, beta1);
    double acc = 0.0;
    for (int i = 0; i < p.size(); ++i)
        acc += p(i) * ((beta2 - beta1) * s.e(i) + lnz2 - lnz1);
    return acc;
}

}  // namespace xyqfi::ed

#endif
