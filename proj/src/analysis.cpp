#include "zeno/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "zeno/spline.hpp"

namespace zeno {

using cplx = std::complex<double>;

void TimeSeries::validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("TimeSeries: step must be positive");
    if (values.empty()) throw std::invalid_argument("TimeSeries: no samples");
}

std::vector<double> TimeSeries::times() const {
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = time(j);
    return out;
}

RatioResult ratio_D(const TimeSeries& q, const TimeSeries& q0, double floor) {
    q.validate();
    q0.validate();
    if (q.size() != q0.size() || std::abs(q.step - q0.step) > 1e-12 * q.step)
        throw std::invalid_argument("ratio_D: q and q0 are sampled on different time grids");
    RatioResult out;
    out.D.step = q.step;
    out.D.values.reserve(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (!(std::abs(q0.values[j]) > floor)) {
            out.truncated = true;
            out.truncation_time = q.time(j);
            break;
        }
        out.D.values.push_back(q.values[j] / q0.values[j]);
    }
    if (out.D.values.empty()) throw std::invalid_argument("ratio_D: |q0(0)| is below the floor");
    return out;
}

TimeSeries analytic_q0(std::span<const double> packet_spectrum, const EnergyGrid& grid, double E0_Z, double step,
                       std::size_t count) {
    if (packet_spectrum.size() != static_cast<std::size_t>(grid.count))
        throw std::invalid_argument("analytic_q0: spectrum does not match the energy grid");
    if (!(step > 0.0) || count == 0) throw std::invalid_argument("analytic_q0: need step > 0 and count >= 1");
    std::vector<double> weight(packet_spectrum.size());
    double mass = 0.0;
    for (std::size_t j = 0; j < weight.size(); ++j) {
        const double w = (j + 1 == weight.size() ? 0.5 : 1.0) * grid.step;
        weight[j] = w * packet_spectrum[j] * packet_spectrum[j];
        mass += weight[j];
    }
    if (std::abs(mass - 1.0) > 0.02) {
        std::ostringstream msg;
        msg << "analytic_q0: spectral mass " << mass << " misses 1 by more than 2%; raise the energy grid maximum";
        throw SpectralMassError(msg.str());
    }
    TimeSeries out;
    out.step = step;
    out.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = step * static_cast<double>(i);
        cplx sum = 0.0;
        for (std::size_t j = 0; j < weight.size(); ++j) sum += weight[j] * std::polar(1.0, -grid.at(static_cast<int>(j)) * t);
        out.values[i] = std::polar(1.0, -E0_Z * t) * sum;
    }
    return out;
}

EnergyWindow EnergyWindow::symmetric(double span, double step) {
    if (!(span > 0.0) || !(step > 0.0)) throw std::invalid_argument("EnergyWindow: span and step must be positive");
    const auto half = static_cast<std::size_t>(std::ceil(span / step));
    return {-static_cast<double>(half) * step, step, 2 * half + 1};
}

EnergyWindow default_delta_window(const TimeSeries& D) {
    D.validate();
    double t_char = D.t_max();
    for (std::size_t j = 0; j < D.size(); ++j)
        if (std::abs(D.values[j]) < std::exp(-1.0)) {
            t_char = D.time(j);
            break;
        }
    double span = 50.0;
    if (t_char > 0.0) span = std::max(span, 4.0 / t_char);
    span = std::max(span, std::numbers::pi / (2.0 * D.step));
    const double step = D.t_max() > 0.0 ? std::min(std::numbers::pi / (4.0 * D.t_max()), 0.5) : 0.5;
    return EnergyWindow::symmetric(span, step);
}

double SpectralFunction::at(double energy) const {
    if (density.empty() || energy < window.first || energy > window.last()) return 0.0;
    const double x = (energy - window.first) / window.step;
    auto j = static_cast<std::size_t>(x);
    if (j + 1 >= density.size()) return density.back();
    const double f = x - static_cast<double>(j);
    return (1.0 - f) * density[j] + f * density[j + 1];
}

double SpectralFunction::mass_above(double energy) const {
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < density.size(); ++j) {
        const double a = window.at(j), b = window.at(j + 1);
        if (b <= energy) continue;
        if (a >= energy) {
            sum += 0.5 * (density[j] + density[j + 1]) * (b - a);
        } else {
            const double mid = at(energy);
            sum += 0.5 * (mid + density[j + 1]) * (b - energy);
        }
    }
    return sum;
}

SpectralFunction spreading_function(const TimeSeries& D, const EnergyWindow& window, double tail_threshold) {
    D.validate();
    if (D.size() < 2) throw std::invalid_argument("spreading_function: need at least two samples of D");
    if (window.count < 2 || !(window.step > 0.0)) throw std::invalid_argument("spreading_function: bad energy window");
    const CubicSpline spline(D.step, D.values);
    SpectralFunction out;
    out.window = window;
    out.tail = std::abs(D.values.back());
    out.converged = out.tail < tail_threshold;
    out.density.resize(window.count);
    for (std::size_t j = 0; j < window.count; ++j)
        out.density[j] = spline.fourier_integral(window.at(j)).real() / std::numbers::pi;
    double mass = 0.0;
    for (std::size_t j = 0; j + 1 < window.count; ++j) mass += 0.5 * (out.density[j] + out.density[j + 1]);
    out.mass = mass * window.step;
    return out;
}

double gamma_perturbed(const SpectralFunction& delta, const EnergyGrid& grid, std::span<const double> M_of_E,
                       double E_fin) {
    if (M_of_E.size() != static_cast<std::size_t>(grid.count))
        throw std::invalid_argument("gamma_perturbed: M(E) does not match the energy grid");
    if (!delta.converged) throw UnconvergedDeltaError("gamma_perturbed: Delta(E) is not converged");
    double sum = 0.0;
    for (std::size_t j = 0; j < M_of_E.size(); ++j) {
        const double w = (j + 1 == M_of_E.size() ? 0.5 : 1.0) * grid.step;
        sum += w * M_of_E[j] * delta.at(grid.at(static_cast<int>(j)) - E_fin);
    }
    return std::max(0.0, 2.0 * std::numbers::pi * sum);
}

std::vector<DecayResult> sweep_final_energy(const EmitterStates& states, const DecayVertex& vertex,
                                            const SpectralFunction& delta, std::span<const double> m_X_values) {
    std::vector<DecayResult> out;
    out.reserve(m_X_values.size());
    for (double m : m_X_values) {
        if (!(m > 0.0)) throw std::invalid_argument("sweep_final_energy: m_X must be positive");
        const WellSpec box = WellSpec::box(m, states.x_box.width);
        DecayResult r;
        r.m_X = m;
        r.omega0 = infinite_box_state(2, box).energy() - infinite_box_state(1, box).energy();
        r.E_fin = final_energy(r.omega0, states.y_bound.energy(), vertex.deltaV0);
        if (r.E_fin > 0.0) {
            const double v = matrix_element_v(r.E_fin, states, vertex.v0);
            r.gamma0 = 2.0 * std::numbers::pi * v * v;
        }
        r.delta_converged = delta.converged;
        r.gamma = delta.converged ? gamma_perturbed(delta, vertex.grid, vertex.M_of_E, r.E_fin) : r.gamma0;
        out.push_back(r);
    }
    return out;
}

TimeSeries survival_curve(const Evolution& evolution) {
    evolution.P_sur.validate();
    return evolution.P_sur;
}

}  // namespace zeno
