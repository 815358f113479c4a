#pragma once

#include <functional>
#include <vector>

namespace polylab {

// Gauss-Legendre rule on [-1, 1]. Nodes/weights are computed once per order by
// Newton iteration on the Legendre recurrence and cached process-wide.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

// \int_a^b f, one Gauss panel.
template <typename F>
double gauss_panel(const F& f, double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
}

// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
template <typename F>
double integrate(const F& f, double a, double b, int panels, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) s += gauss_panel(f, a + p * h, a + (p + 1) * h, rule);
    return s;
}

// Adaptive Simpson, used as an independent oracle in tests and for the few
// 1D integrals without a natural panel structure.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 40);

}  // namespace polylab
