#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "zeno/packet.hpp"
#include "zeno/propagator.hpp"
#include "zeno/timeseries.hpp"

namespace zeno {

struct RatioResult {
    TimeSeries D;
    bool truncated = false;
    double truncation_time = -1.0;  // first time |q0| fell to the floor
};

/// D(t) = q(t) / q0(t), cut before the first sample where |q0| <= floor.
RatioResult ratio_D(const TimeSeries& q, const TimeSeries& q0, double floor = 1e-6);

class SpectralMassError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// q0(t) = exp(-i E0_Z t) integral |c(E)|^2 exp(-i E t) dE by the trapezoid
/// rule on the energy grid (c = 0 at threshold). Throws SpectralMassError
/// when the spectral mass misses 1 by more than 2%.
TimeSeries analytic_q0(std::span<const double> packet_spectrum, const EnergyGrid& grid, double E0_Z, double step,
                       std::size_t count);

/// Uniform energy window [first, first + (count - 1) step].
struct EnergyWindow {
    double first = -50.0;
    double step = 0.5;
    std::size_t count = 201;

    static EnergyWindow symmetric(double span, double step);
    double at(std::size_t j) const { return first + step * static_cast<double>(j); }
    double last() const { return at(count - 1); }
};

/// Window with half-width max(50, 4 / T_char, pi / (2 dt_rec)) and step
/// min(pi / (4 T_max), 0.5). T_char is the first time |D| drops below 1/e
/// (T_max if it never does).
EnergyWindow default_delta_window(const TimeSeries& D);

struct SpectralFunction {
    EnergyWindow window;
    std::vector<double> density;
    double mass = 0.0;  // trapezoid integral of the density
    bool converged = false;
    double tail = 0.0;  // |D(T_max)|

    double at(double energy) const;  // linear interpolation, 0 outside the window
    double mass_above(double energy) const;
};

/// Delta(E) = (1/pi) Re integral_0^T_max D(t) exp(-i E t) dt with D replaced
/// by its natural cubic spline, integrated exactly piece by piece.
SpectralFunction spreading_function(const TimeSeries& D, const EnergyWindow& window, double tail_threshold = 0.02);

class UnconvergedDeltaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gamma = 2 pi integral_0^E_max M(E) Delta(E - E_fin) dE (trapezoid, M = 0 at
/// threshold). Throws UnconvergedDeltaError if Delta is not converged and
/// std::invalid_argument if M does not match the grid.
double gamma_perturbed(const SpectralFunction& delta, const EnergyGrid& grid, std::span<const double> M_of_E,
                       double E_fin);

struct DecayResult {
    double m_X = 0.0;
    double omega0 = 0.0;
    double E_fin = 0.0;
    double gamma0 = 0.0;
    double gamma = 0.0;
    bool delta_converged = false;

    double ratio() const { return gamma0 > 0.0 ? gamma / gamma0 : 0.0; }
};

/// One DecayResult per m_X. The box wavefunctions do not depend on m_X, so
/// v(E), M(E) and delta V0 are taken from `vertex`; only omega0 changes.
/// With an unconverged Delta the result reports gamma = gamma0.
std::vector<DecayResult> sweep_final_energy(const EmitterStates& states, const DecayVertex& vertex,
                                            const SpectralFunction& delta, std::span<const double> m_X_values);

/// P_sur(t) as a real-valued series in the real part.
TimeSeries survival_curve(const Evolution& evolution);

}  // namespace zeno
