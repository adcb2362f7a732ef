#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "zeno/wells.hpp"

namespace zeno {

/// The three eigenstates that enter the decay vertex, plus the emitter well
/// needed to build its continuum.
struct EmitterStates {
    WellSpec x_box;
    WellSpec y_well;
    StationaryState x_ground;   // box level n = 1
    StationaryState x_excited;  // box level n = 2
    StationaryState y_bound;
};

/// Builds X_g, X_e from the box and the single bound state of the emitter
/// well. Throws std::runtime_error unless the emitter well binds exactly one
/// state.
EmitterStates make_emitter_states(const WellSpec& x_box, const WellSpec& y_well);

/// Uniform energy grid E_j = j * step, j = 1..count (the threshold E = 0 is
/// implicit, where every continuum amplitude vanishes).
struct EnergyGrid {
    double step = 0.05;
    int count = 40000;

    static EnergyGrid up_to(double e_max, int count);
    double max() const { return step * count; }
    double at(int j) const { return step * (j + 1); }
    std::vector<double> values() const;
};

struct DecayVertex {
    double v0 = 1.0;
    EnergyGrid grid;
    std::vector<double> v_of_E;
    std::vector<double> M_of_E;
    double deltaV0 = 0.0;
    double omega0 = 0.0;
    double E_fin = 0.0;
    double v_at_fin = 0.0;  // v(E_fin), 0 below threshold
};

/// v(E) = v0 * integral X_g X_e Y_E Y0 over the box. The projector term of
/// the renormalized interaction drops out because <X_g|X_e> = 0.
double matrix_element_v(double energy, const EmitterStates& states, double v0);

/// Same integral on many energies with the fixed part of the integrand
/// evaluated once.
std::vector<double> matrix_elements(std::span<const double> energies, const EmitterStates& states, double v0);

double delta_v0(const EmitterStates& states, double v0);

double final_energy(double omega0, double E0_Y, double deltaV0);

DecayVertex make_vertex(const EmitterStates& states, double v0, const EnergyGrid& grid);

/// 2 pi |v(E_fin)|^2 above threshold, 0 otherwise.
double golden_rule_gamma0(const DecayVertex& vertex);

class DegeneratePacketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SourcePacket {
    std::vector<double> grid;
    std::vector<std::complex<double>> amplitudes;
    double norm_constant = 0.0;
    double projection_constant = 0.0;  // C
    double step = 0.0;
};

/// Virtual-emission packet N Y0(y) [X_g(y) X_e(y) - C] on a uniform grid
/// starting at 0. C and N use the grid trapezoid so that the packet is
/// orthogonal to Y0 and unit-normalized in the grid inner product.
SourcePacket build_source_packet(const EmitterStates& states, std::span<const double> grid);

/// Normalization constant N of the packet in the continuum (L2 on the
/// half-line, Gauss-Legendre).
double packet_norm_constant(const EmitterStates& states);

/// c(E) = <Y_E|Ytilde> = N v(E) / v0 for the continuum packet.
std::vector<double> packet_spectrum(const EmitterStates& states, const EnergyGrid& grid);

/// Grid inner product <f|packet> with the trapezoid rule.
std::complex<double> project(const SourcePacket& packet, std::span<const double> f);

}  // namespace zeno
