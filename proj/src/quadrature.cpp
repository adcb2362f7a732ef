#include "zeno/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zeno::quad {

GaussLegendre::GaussLegendre(int n) : nodes_(n), weights_(n) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: n must be >= 1");
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes_[i] = x;
        weights_[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

const GaussLegendre& gauss16() {
    static const GaussLegendre rule(16);
    return rule;
}

std::vector<Node> composite_nodes(double a, double b, std::span<const double> breakpoints, int panels) {
    std::vector<double> cuts{a};
    for (double x : breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    const auto& rule = gauss16();
    std::vector<Node> out;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double width = (cuts[s + 1] - cuts[s]) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = cuts[s] + (p + 0.5) * width;
            for (std::size_t i = 0; i < rule.nodes().size(); ++i)
                out.push_back({mid + 0.5 * width * rule.nodes()[i], 0.5 * width * rule.weights()[i]});
        }
    }
    return out;
}

double trapezoid(std::span<const double> samples, double step) {
    if (samples.size() < 2) return 0.0;
    double sum = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) sum += samples[i];
    return sum * step;
}

}  // namespace zeno::quad
