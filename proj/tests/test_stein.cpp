#include <cmath>
#include <vector>

#include "doctest.h"
#include "polylab/stein.hpp"

using namespace polylab;

namespace {
std::shared_ptr<SmoothBody> disc1() { return std::make_shared<SmoothBody>(SmoothBody::disc(1.0)); }

// Numeric-integration oracle for W1(empirical, N(0,1)): fine Simpson of
// |F_R - Phi| over [-12, 12].
double w1_oracle(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const auto F = [&](double t) {
        size_t k = 0;
        while (k < x.size() && x[k] <= t) ++k;
        return static_cast<double>(k) / static_cast<double>(x.size());
    };
    const int n = 400000;
    double s = 0.0;
    const double a = -12.0, b = 12.0, h = (b - a) / n;
    for (int i = 0; i <= n; ++i) {
        const double t = a + i * h;
        const double v = std::abs(F(t) - normal_cdf(t));
        s += (i == 0 || i == n) ? v : ((i % 2) ? 4.0 * v : 2.0 * v);
    }
    return s * h / 3.0;
}

std::vector<Vec2> sample_n(const WeightFunction& w, int n, Rng& rng) {
    std::vector<Vec2> pts(n);
    for (auto& p : pts) p = w.sample(rng);
    return pts;
}
}  // namespace

TEST_CASE("wasserstein: two-point sample against the numeric oracle") {
    const std::vector<double> two{-1.0, 1.0};
    const double oracle = w1_oracle(two);
    // Frozen from the oracle; the closed-form path must agree.
    CHECK(oracle == doctest::Approx(0.535377).epsilon(2e-4));
    CHECK(wasserstein1_to_normal(two) == doctest::Approx(0.5353773).epsilon(1e-6));
    CHECK(wasserstein1_to_normal(two) == doctest::Approx(oracle).epsilon(1e-4));

    // Random multi-point sample: exact path vs oracle.
    Rng rng(3);
    std::vector<double> x(17);
    for (auto& v : x) v = rng.normal() * 1.3 + 0.2;
    CHECK(wasserstein1_to_normal(x) == doctest::Approx(w1_oracle(x)).epsilon(1e-3));
}

TEST_CASE("wasserstein: calibration and shift") {
    Rng rng(5);
    std::vector<double> x(2000);
    for (auto& v : x) v = rng.normal();
    CHECK(wasserstein1_to_normal(x) < 0.05);

    std::vector<double> y(100000);
    for (auto& v : y) v = rng.normal() + 1.0;
    CHECK(wasserstein1_to_normal(y) == doctest::Approx(1.0).epsilon(0.02));

    // Permutation invariance and positivity.
    std::vector<double> z{0.3, -1.2, 0.7, 2.2};
    std::vector<double> zp{2.2, 0.3, 0.7, -1.2};
    CHECK(wasserstein1_to_normal(z) == wasserstein1_to_normal(zp));
    CHECK(wasserstein1_to_normal(z) > 0.0);
}

TEST_CASE("normality summary") {
    std::vector<double> constant(100, 0.0);
    CHECK(normality_summary(constant).ks == doctest::Approx(0.5).epsilon(1e-12));

    Rng rng(7);
    std::vector<double> x(2000);
    for (auto& v : x) v = rng.normal();
    const auto s = normality_summary(x);
    CHECK(s.ks <= 0.035);
    CHECK(std::abs(s.skewness) < 0.2);
    CHECK(std::abs(s.excess_kurtosis) < 0.4);

    // Exponential draws: skewness 2, excess kurtosis 6.
    std::vector<double> e(100000);
    for (auto& v : e) v = -std::log(1.0 - rng.uniform());
    const auto se = normality_summary(e);
    CHECK(se.skewness == doctest::Approx(2.0).epsilon(0.1));

    std::vector<double> tiny(4, 0.1);
    CHECK_THROWS(normality_summary(tiny));
}

TEST_CASE("difference operators: exact zeros and positivity") {
    auto K = disc1();
    auto uni = WeightFunction::uniform(K);
    Functional f{K, &uni, &uni, 64, 0.0};
    Rng rng(11);
    auto pts = sample_n(uni, 64, rng);

    const Polytope hull = convex_hull2(pts);
    // Non-vertex points give exactly zero.
    int checked = 0;
    for (int i = 0; i < 64 && checked < 20; ++i) {
        const bool is_vertex = std::find(hull.provenance.begin(), hull.provenance.end(), i) != hull.provenance.end();
        if (!is_vertex) {
            CHECK(diff1(f, pts, i) == 0.0);
            ++checked;
        }
    }
    CHECK(checked > 0);

    // A unique extreme outlier has strictly positive first difference.
    pts.push_back({1.6, 0.0});
    CHECK(diff1(f, pts, 64) > 0.0);

    // Interior pair: second difference exactly zero; symmetry is bit-exact.
    int a = -1, b = -1;
    for (int i = 0; i < 64 && b < 0; ++i) {
        if (std::find(hull.provenance.begin(), hull.provenance.end(), i) == hull.provenance.end()) {
            if (a < 0)
                a = i;
            else
                b = i;
        }
    }
    REQUIRE(b >= 0);
    CHECK(diff2(f, pts, a, b) == 0.0);
    CHECK(diff2(f, pts, 5, 17) == diff2(f, pts, 17, 5));

    // |D_{i,j} f| <= |D_i f(x)| + |D_i f(x_{~j})| (definitional).
    for (int j : {3, 9, 40}) {
        const double dij = std::abs(diff2(f, pts, 2, j));
        std::vector<Vec2> without_j;
        for (size_t k = 0; k < pts.size(); ++k)
            if (static_cast<int>(k) != j) without_j.push_back(pts[k]);
        const double bound = std::abs(diff1(f, pts, 2)) + std::abs(diff1(f, without_j, 2));
        CHECK(dij <= bound + 1e-15);
    }
}

TEST_CASE("difference operators never see the centering constant") {
    auto K = disc1();
    auto uni = WeightFunction::uniform(K);
    Functional f0{K, &uni, &uni, 48, 0.0};
    Functional f1{K, &uni, &uni, 48, 0.777};
    Rng rng(55);
    const auto pts = sample_n(uni, 48, rng);
    for (int i : {0, 7, 23}) CHECK(diff1(f0, pts, i) == diff1(f1, pts, i));
    CHECK(diff2(f0, pts, 2, 9) == diff2(f1, pts, 2, 9));
    // While the functional itself does shift.
    CHECK(f0.value(pts) - f1.value(pts) == doctest::Approx(0.777).epsilon(1e-12));
}

TEST_CASE("telescoping identities") {
    auto K = disc1();
    auto uni = WeightFunction::uniform(K);
    Functional f{K, &uni, &uni, 48, 0.37};  // E_n cancels in differences
    Rng rng(13);
    const auto pts = sample_n(uni, 48, rng);

    // Chain sum of one-point increments equals the total increment.
    double chain = 0.0;
    for (int k = 4; k <= 48; ++k)
        chain += f.psi_of(std::span<const Vec2>(pts.data(), k)) - f.psi_of(std::span<const Vec2>(pts.data(), k - 1));
    const double total = f.psi_of(pts) - f.psi_of(std::span<const Vec2>(pts.data(), 3));
    CHECK(std::abs(chain - total) < 1e-10);

    // E[D_1 f] matches E Psi(K(n)) - E Psi(K(n-1)) within 3 sigma.
    const int n = 64, R = 1500;
    Functional fn{K, &uni, &uni, n, 0.0};
    double sum_d = 0.0, sum_d2 = 0.0, sum_g = 0.0, sum_g2 = 0.0;
    for (int rep = 0; rep < R; ++rep) {
        Rng r2(derive_seed(99, "telescope", n, rep));
        const auto x = sample_n(uni, n, r2);
        const double d = diff1(fn, x, 0);
        sum_d += d;
        sum_d2 += d * d;
        const double g = fn.psi_of(x) - fn.psi_of(std::span<const Vec2>(x.data(), n - 1));
        sum_g += g;
        sum_g2 += g * g;
    }
    const double md = sum_d / R, mg = sum_g / R;
    const double sed = std::sqrt((sum_d2 / R - md * md) / R);
    const double seg = std::sqrt((sum_g2 / R - mg * mg) / R);
    CHECK(std::abs(md - mg) <= 3.0 * std::sqrt(sed * sed + seg * seg) + 1e-12);
}

TEST_CASE("gamma moments: consistency, Lyapunov, and the wet restriction") {
    auto K = disc1();
    auto uni = WeightFunction::uniform(K);
    Functional f{K, &uni, &uni, 64, 0.0};

    const auto plain_small = gamma_moments(f, 600, 21);
    const auto plain_big = gamma_moments(f, 2400, 21);
    const double pooled = std::sqrt(plain_small.g3.std_error * plain_small.g3.std_error
                                  + plain_big.g3.std_error * plain_big.g3.std_error);
    CHECK(std::abs(plain_small.g3.value - plain_big.g3.value) <= 2.5 * pooled);

    // Lyapunov: E|D|^3 <= (E|D|^4)^{3/4}, exact for the weighted empirical law.
    CHECK(plain_big.g3.value <= std::pow(plain_big.g4.value, 0.75) + 1e-15);

    // Restricted estimator agrees with the plain one within 3 sigma.
    FloatingBodySolver solver(K, uni, 180);
    const auto restriction = make_wet_restriction(solver, 64, 0.25);
    REQUIRE(restriction.has_value());
    CHECK(restriction->wet_mass > 0.0);
    CHECK(restriction->wet_mass < 1.0);
    const auto restricted = gamma_moments(f, 2400, 22, &*restriction);
    const double pooled2 = std::sqrt(restricted.g3.std_error * restricted.g3.std_error
                                   + plain_big.g3.std_error * plain_big.g3.std_error);
    CHECK(std::abs(restricted.g3.value - plain_big.g3.value) <= 3.0 * pooled2);
    // Variance reduction: the restricted estimator needs fewer replications.
    CHECK(restricted.g3.std_error < plain_big.g3.std_error);
}

TEST_CASE("recombination estimates: indicator monotonicity and stability report") {
    auto K = disc1();
    auto uni = WeightFunction::uniform(K);
    Functional f{K, &uni, &uni, 48, 0.0};

    // Pointwise: adding an indicator cannot increase the product.
    Rng rng(31);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<Vec2> x = sample_n(uni, 48, rng), x2 = sample_n(uni, 48, rng), x3 = sample_n(uni, 48, rng);
        // A recombination: swap a few coordinates between copies.
        std::vector<Vec2> y = x;
        for (int k = 0; k < 48; k += 3) y[k] = x2[k];
        const double ind_a = diff2(f, y, 0, 1) != 0.0 ? 1.0 : 0.0;
        const double ind_b = diff2(f, x2, 0, 2) != 0.0 ? 1.0 : 0.0;
        const double d2 = diff1(f, x3, 1);
        const double d3 = diff1(f, x, 2);
        const double prod = d2 * d2 * d3 * d3;
        CHECK(ind_a * ind_b * prod <= ind_a * prod + 1e-18);
    }

    const auto est_s = gamma_recombination_estimates(f, 220, 4, 77);
    const auto est_2s = gamma_recombination_estimates(f, 220, 8, 77);
    MESSAGE("gamma2 surrogate S=4: " << est_s.g2.value << "  S=8: " << est_2s.g2.value);
    // Doubling S can only raise the maximum when the first tuples coincide.
    CHECK(est_2s.g2.value >= est_s.g2.value - 1e-18);
    CHECK(est_s.g2.replications == 220);
}

TEST_CASE("assembled bound formula") {
    // n = 4, V = 1: bound = 2 (sqrt(16 g1) + sqrt(4 g2) + 2 g3 + sqrt(g4)).
    const double b = assembled_normal_bound(4, 1.0, 0.25, 1.0, 0.5, 4.0);
    CHECK(b == doctest::Approx(2.0 * (2.0 + 2.0 + 1.0 + 2.0)).epsilon(1e-14));
}
