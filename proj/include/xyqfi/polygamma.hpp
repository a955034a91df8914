#ifndef XYQFI_POLYGAMMA_HPP
#define XYQFI_POLYGAMMA_HPP

// Polygamma psi^(n) for n = 1, 2, 3 on x > 0.
//
// The bath decay factor needs psi^(1)(1/(beta*omega_c)); its first and second
// beta-derivatives pull in psi^(2) and psi^(3).  Strategy: upward recurrence
//   psi^(n)(x) = psi^(n)(x+1) + (-1)^{n+1} n! / x^{n+1}
// until the argument reaches 10, then the asymptotic Bernoulli series
//   psi^(n)(x) ~ (-1)^{n-1} [ (n-1)!/x^n + n!/(2x^{n+1})
//                             + sum_k B_{2k} (2k+n-1)!/((2k)! x^{2k+n}) ]
// truncated after B_20, which leaves relative error well below 1e-13 at x>=10.

#include <cmath>
#include <stdexcept>

namespace xyqfi {

namespace detail {

// B_2, B_4, ..., B_20
inline constexpr double kBernoulli2k[10] = {
    1.0 / 6.0,      -1.0 / 30.0,     1.0 / 42.0,      -1.0 / 30.0,
    5.0 / 66.0,     -691.0 / 2730.0, 7.0 / 6.0,       -3617.0 / 510.0,
    43867.0 / 798.0, -174611.0 / 330.0};

inline double polygamma_asymptotic(int n, double x) {
    // leading (n-1)!/x^n and n!/(2 x^{n+1}) terms
    double fact_nm1 = 1.0;
    for (int i = 2; i < n; ++i) fact_nm1 *= i;  // (n-1)!
    double inv = 1.0 / x;
    double s = fact_nm1 * std::pow(inv, n) + (fact_nm1 * n) * 0.5 * std::pow(inv, n + 1);
    // Bernoulli tail: B_{2k} (2k+n-1)! / ((2k)! x^{2k+n})
    double x2 = inv * inv;
    double pw = std::pow(inv, n);  // will track x^{-(2k+n)}
    for (int k = 1; k <= 10; ++k) {
        pw *= x2;
        // (2k+n-1)! / (2k)!  ==  product of (2k+1) .. (2k+n-1)
        double ratio = 1.0;
        for (int i = 2 * k + 1; i <= 2 * k + n - 1; ++i) ratio *= i;
        s += kBernoulli2k[k - 1] * ratio * pw;
    }
    return ((n % 2) ? 1.0 : -1.0) * s;  // sign (-1)^{n-1}
}

}  // namespace detail

inline double polygamma(int order, double x) {
    if (order < 1 || order > 3) throw std::invalid_argument("polygamma: order must be 1, 2 or 3");
    if (!(x > 0.0)) throw std::domain_error("polygamma: requires x > 0");
    // recurrence accumulation: psi^(n)(x) = psi^(n)(x + m) + sum over shifted poles
    double acc = 0.0;
    double fact_n = (order == 1) ? 1.0 : (order == 2) ? 2.0 : 6.0;  // n!
    double sign = (order % 2) ? 1.0 : -1.0;                         // (-1)^{n+1}
    while (x < 10.0) {
        acc += sign * fact_n / std::pow(x, order + 1);
        x += 1.0;
    }
    return acc + detail::polygamma_asymptotic(order, x);
}

}  // namespace xyqfi

#endif
