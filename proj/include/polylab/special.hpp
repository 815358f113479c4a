#pragma once

#include <cmath>
#include <stdexcept>

namespace polylab {

inline double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

// Vol(B_2^d) = pi^{d/2} / Gamma(d/2 + 1).
inline double ball_volume(int d) {
    if (d < 0) throw std::invalid_argument("ball_volume: d must be >= 0");
    return std::pow(3.14159265358979323846, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("binomial: need 0 <= k <= n");
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// binom(d,j) * Vol(B^d) / (Vol(B^j) Vol(B^{d-j})), the normalizer of Kubota-type
// mean section/projection formulas.
inline double ball_binomial(int d, int j) {
    if (j < 0 || d < 0 || j > d) throw std::invalid_argument("ball_binomial: need 0 <= j <= d");
    return binomial(d, j) * ball_volume(d) / (ball_volume(j) * ball_volume(d - j));
}

// Equivalent Beta-function form; kept separate so the two routes can be
// checked against each other. Only valid for 0 < j < d.
inline double ball_binomial_beta(int d, int j) {
    if (j <= 0 || j >= d) throw std::invalid_argument("ball_binomial_beta: need 0 < j < d");
    return 0.5 * beta_fn(0.5 * j, 0.5 * (d - j)) / beta_fn(static_cast<double>(j), static_cast<double>(d - j));
}

}  // namespace polylab
