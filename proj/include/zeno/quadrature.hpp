#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace zeno::quad {

/// n-point Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
public:
    explicit GaussLegendre(int n);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
        return half * sum;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Shared 16-point rule.
const GaussLegendre& gauss16();

/// Composite Gauss-Legendre on [a, b]: the interval is first cut at every
/// breakpoint inside it, then each segment into `panels` equal panels.
template <class F>
double integrate(F&& f, double a, double b, std::span<const double> breakpoints, int panels = 16) {
    std::vector<double> cuts{a};
    for (double x : breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    const auto& rule = gauss16();
    double sum = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double width = (cuts[s + 1] - cuts[s]) / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = cuts[s] + p * width;
            sum += rule.integrate(f, lo, lo + width);
        }
    }
    return sum;
}

struct Node {
    double x;
    double w;
};

/// Nodes and weights of the composite rule used by `integrate`, for
/// integrands that are evaluated many times with a fixed kernel.
std::vector<Node> composite_nodes(double a, double b, std::span<const double> breakpoints, int panels = 16);

/// Composite trapezoid for uniformly spaced samples.
double trapezoid(std::span<const double> samples, double step);

}  // namespace zeno::quad
