#include "zeno/wells.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace zeno {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kScanBrackets = 1000;
constexpr double kEnergyTolerance = 1e-12;
constexpr double kResidualTolerance = 1e-9;

double wrap_phase(double phase) {
    phase = std::remainder(phase, 2.0 * kPi);
    if (phase <= -kPi) phase += 2.0 * kPi;
    return phase;
}

// Monotone phase form of the matching condition; bound states sit where it
// crosses an integer multiple of pi.
double phase_condition(const WellSpec& spec, double energy) {
    const double kin = std::sqrt(2.0 * spec.mass * (energy - spec.depth));
    const double kappa = std::sqrt(std::max(0.0, -2.0 * spec.mass * energy));
    if (spec.kind == WellKind::WallAdjacentWell) {
        return kin * spec.width - std::atan2(kappa, kin) - 0.5 * kPi;
    }
    const double gap = spec.center - spec.width;
    // kappa * coth(kappa * gap) -> 1 / gap as kappa -> 0
    const double left = kappa > 0.0 ? kappa / std::tanh(kappa * gap) : 1.0 / gap;
    return 2.0 * kin * spec.width - std::atan2(kappa, kin) - std::atan2(left, kin);
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int iter = 0; iter < 200 && hi - lo > kEnergyTolerance; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double piece_value(const StationaryState::Piece& p, double u) {
    const double x = u - p.origin;
    switch (p.shape) {
        case StationaryState::Shape::Zero: return 0.0;
        case StationaryState::Shape::Sine: return p.amplitude * std::sin(p.wavenumber * x + p.phase);
        case StationaryState::Shape::Decay: return p.amplitude * std::exp(-p.wavenumber * x);
        case StationaryState::Shape::Sinh: return p.amplitude * std::sinh(p.wavenumber * x);
    }
    return 0.0;
}

double piece_derivative(const StationaryState::Piece& p, double u) {
    const double x = u - p.origin;
    const double k = p.wavenumber;
    switch (p.shape) {
        case StationaryState::Shape::Zero: return 0.0;
        case StationaryState::Shape::Sine: return p.amplitude * k * std::cos(k * x + p.phase);
        case StationaryState::Shape::Decay: return -p.amplitude * k * std::exp(-k * x);
        case StationaryState::Shape::Sinh: return p.amplitude * k * std::cosh(k * x);
    }
    return 0.0;
}

// Antiderivative of the squared piece (up to a constant).
double piece_square_primitive(const StationaryState::Piece& p, double u) {
    const double x = u - p.origin;
    const double k = p.wavenumber;
    const double a2 = p.amplitude * p.amplitude;
    switch (p.shape) {
        case StationaryState::Shape::Zero: return 0.0;
        case StationaryState::Shape::Sine:
            return a2 * (0.5 * x - std::sin(2.0 * (k * x + p.phase)) / (4.0 * k));
        case StationaryState::Shape::Decay: return -a2 * std::exp(-2.0 * k * x) / (2.0 * k);
        case StationaryState::Shape::Sinh: return a2 * (std::sinh(2.0 * k * x) / (4.0 * k) - 0.5 * x);
    }
    return 0.0;
}

}  // namespace

WellSpec WellSpec::box(double mass, double width) {
    return {WellKind::InfiniteBox, mass, width, 0.0, 0.0};
}

WellSpec WellSpec::wall_adjacent(double mass, double width, double depth) {
    return {WellKind::WallAdjacentWell, mass, width, depth, 0.0};
}

WellSpec WellSpec::offset(double mass, double half_width, double depth, double center) {
    return {WellKind::OffsetWell, mass, half_width, depth, center};
}

void WellSpec::validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("WellSpec: mass must be positive");
    if (!(width > 0.0)) throw std::invalid_argument("WellSpec: width must be positive");
    if (!(depth <= 0.0)) throw std::invalid_argument("WellSpec: depth must be <= 0");
    if (kind == WellKind::InfiniteBox && depth != 0.0)
        throw std::invalid_argument("WellSpec: infinite box has zero depth");
    if (kind == WellKind::OffsetWell && !(center - width > 0.0))
        throw std::invalid_argument("WellSpec: offset well must not touch the wall at the origin");
}

double WellSpec::lower_edge() const { return kind == WellKind::OffsetWell ? center - width : 0.0; }

double WellSpec::upper_edge() const { return kind == WellKind::OffsetWell ? center + width : width; }

StationaryState::StationaryState(StateKind kind, double energy, std::vector<Piece> pieces)
    : kind_(kind), energy_(energy), pieces_(std::move(pieces)) {
    if (pieces_.empty() || pieces_.front().begin != 0.0)
        throw std::invalid_argument("StationaryState: pieces must start at u = 0");
}

const StationaryState::Piece& StationaryState::piece_at(double u) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), u,
                               [](double x, const Piece& p) { return x < p.begin; });
    return it == pieces_.begin() ? pieces_.front() : *std::prev(it);
}

double StationaryState::operator()(double u) const {
    if (u <= 0.0) return 0.0;
    return piece_value(piece_at(u), u);
}

double StationaryState::derivative(double u) const {
    if (u < 0.0) return 0.0;
    return piece_derivative(piece_at(u), u);
}

std::vector<double> StationaryState::breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].begin);
    return out;
}

double StationaryState::norm_squared(double u_max) const {
    double total = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const Piece& p = pieces_[i];
        const double lo = p.begin;
        if (lo >= u_max) break;
        const double hi = i + 1 < pieces_.size() ? std::min(pieces_[i + 1].begin, u_max) : u_max;
        if (p.shape == Shape::Zero) continue;
        if (std::isinf(hi)) {
            if (p.shape != Shape::Decay)
                return std::numeric_limits<double>::infinity();
            total += -piece_square_primitive(p, lo);
        } else {
            total += piece_square_primitive(p, hi) - piece_square_primitive(p, lo);
        }
    }
    return total;
}

void StationaryState::scale(double factor) {
    for (auto& p : pieces_) p.amplitude *= factor;
}

StationaryState infinite_box_state(int n, const WellSpec& spec) {
    spec.validate();
    if (spec.kind != WellKind::InfiniteBox)
        throw std::invalid_argument("infinite_box_state: spec must be an InfiniteBox");
    if (n < 1) throw std::invalid_argument("infinite_box_state: n must be >= 1");
    const double a = spec.width;
    const double k = n * kPi / a;
    std::vector<StationaryState::Piece> pieces{
        {0.0, StationaryState::Shape::Sine, std::sqrt(2.0 / a), k, 0.0, 0.0},
        {a, StationaryState::Shape::Zero, 0.0, 0.0, 0.0, 0.0},
    };
    StationaryState state(StateKind::Box, k * k / (2.0 * spec.mass), std::move(pieces));
    state.quantum_number_ = n;
    state.mass_ = spec.mass;
    return state;
}

double matching_residual(const WellSpec& spec, double energy) {
    const double kin = std::sqrt(2.0 * spec.mass * (energy - spec.depth));
    const double kappa = std::sqrt(std::max(0.0, -2.0 * spec.mass * energy));
    if (spec.kind == WellKind::WallAdjacentWell) {
        return kin / std::tan(kin * spec.width) + kappa;
    }
    if (spec.kind == WellKind::OffsetWell) {
        const double gap = spec.center - spec.width;
        const double left = kappa > 0.0 ? kappa / std::tanh(kappa * gap) : 1.0 / gap;
        // interior phase fixed by the left edge, log-derivative tested at the right edge
        const double theta = kin * spec.width + 0.5 * kPi - std::atan2(left, kin);
        return kin / std::tan(kin * spec.width + theta) + kappa;
    }
    throw std::invalid_argument("matching_residual: no matching condition for an infinite box");
}

std::vector<StationaryState> solve_bound_states(const WellSpec& spec) {
    spec.validate();
    if (spec.kind == WellKind::InfiniteBox)
        throw std::invalid_argument("solve_bound_states: use infinite_box_state for boxes");
    if (!(spec.depth < 0.0)) throw std::invalid_argument("solve_bound_states: depth must be negative");

    const auto condition = [&spec](double e) { return phase_condition(spec, e); };
    std::vector<double> energies;
    const double step = -spec.depth / kScanBrackets;
    double lo = spec.depth;
    double glo = condition(lo);
    for (int i = 1; i <= kScanBrackets; ++i) {
        const double hi = i == kScanBrackets ? 0.0 : spec.depth + i * step;
        const double ghi = condition(hi);
        // crossings of j*pi, j >= 0; the function is continuous and increasing
        const double jlo = std::floor(glo / kPi);
        const double jhi = std::floor(ghi / kPi);
        for (double j = std::max(jlo + 1.0, 0.0); j <= jhi; j += 1.0) {
            if (hi == 0.0 && ghi == j * kPi) continue;  // zero-energy threshold, not bound
            const double root = bisect([&](double e) { return condition(e) - j * kPi; }, lo, hi);
            energies.push_back(root);
        }
        lo = hi;
        glo = ghi;
    }

    std::vector<StationaryState> states;
    using Piece = StationaryState::Piece;
    using Shape = StationaryState::Shape;
    for (double energy : energies) {
        const double residual = matching_residual(spec, energy);
        if (!(std::abs(residual) < kResidualTolerance))
            throw std::runtime_error("solve_bound_states: root refinement did not converge (residual " +
                                     std::to_string(residual) + ")");
        const double kin = std::sqrt(2.0 * spec.mass * (energy - spec.depth));
        const double kappa = std::sqrt(-2.0 * spec.mass * energy);
        std::vector<Piece> pieces;
        if (spec.kind == WellKind::WallAdjacentWell) {
            const double a = spec.width;
            pieces.push_back({0.0, Shape::Sine, 1.0, kin, 0.0, 0.0});
            pieces.push_back({a, Shape::Decay, std::sin(kin * a), kappa, a, 0.0});
        } else {
            const double a = spec.width;
            const double c = spec.center;
            const double gap = c - a;
            const double theta = 0.5 * kPi + std::atan2(kappa, kin) - kin * a;
            pieces.push_back({0.0, Shape::Sinh, std::sin(theta - kin * a) / std::sinh(kappa * gap), kappa,
                              0.0, 0.0});
            pieces.push_back({gap, Shape::Sine, 1.0, kin, c, theta});
            pieces.push_back({c + a, Shape::Decay, std::sin(kin * a + theta), kappa, c + a, 0.0});
        }
        StationaryState state(StateKind::Bound, energy, std::move(pieces));
        state.mass_ = spec.mass;
        state.scale(1.0 / std::sqrt(state.norm_squared(std::numeric_limits<double>::infinity())));
        // sign convention: positive slope leaving the wall
        if (state.pieces().front().amplitude < 0.0) state.scale(-1.0);
        states.push_back(std::move(state));
    }
    return states;
}

StationaryState continuum_state(const WellSpec& spec, double energy) {
    spec.validate();
    if (spec.kind != WellKind::WallAdjacentWell)
        throw std::invalid_argument("continuum_state: only WallAdjacentWell is supported");
    if (!(energy > 0.0)) throw std::invalid_argument("continuum_state: energy must be above threshold (E > 0)");
    const double a = spec.width;
    const double k = std::sqrt(2.0 * spec.mass * energy);
    const double kin = std::sqrt(2.0 * spec.mass * (energy - spec.depth));
    const double outer = std::sqrt(2.0 * spec.mass / (kPi * k));
    const double s = std::sin(kin * a);
    const double c = std::cos(kin * a);
    const double theta = std::atan2(k * s, kin * c);
    const double inner = outer * k / std::hypot(k * s, kin * c);
    const double delta = wrap_phase(theta - k * a);

    using Piece = StationaryState::Piece;
    using Shape = StationaryState::Shape;
    std::vector<Piece> pieces{
        {0.0, Shape::Sine, inner, kin, 0.0, 0.0},
        {a, Shape::Sine, outer, k, 0.0, delta},
    };
    StationaryState state(StateKind::Continuum, energy, std::move(pieces));
    state.phase_shift_ = delta;
    state.mass_ = spec.mass;
    return state;
}

std::vector<double> sample_state(const StationaryState& state, std::span<const double> points) {
    std::vector<double> out;
    out.reserve(points.size());
    for (double u : points) out.push_back(state(u));
    return out;
}

double well_potential(const WellSpec& spec, double u) {
    if (spec.kind == WellKind::InfiniteBox) return 0.0;
    return (u >= spec.lower_edge() && u < spec.upper_edge()) ? spec.depth : 0.0;
}

std::vector<double> cell_averaged_potential(const WellSpec& spec, double h, int intervals) {
    std::vector<double> out(intervals + 1, 0.0);
    if (spec.kind == WellKind::InfiniteBox) return out;
    const double lo = spec.lower_edge();
    const double hi = spec.upper_edge();
    for (int k = 0; k <= intervals; ++k) {
        const double u = k * h;
        const double covered = std::min(u + 0.5 * h, hi) - std::max(u - 0.5 * h, lo);
        out[k] = covered > 0.0 ? spec.depth * covered / h : 0.0;
    }
    return out;
}

}  // namespace zeno
