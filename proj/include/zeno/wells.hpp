#pragma once

#include <span>
#include <vector>

namespace zeno {

enum class WellKind { InfiniteBox, WallAdjacentWell, OffsetWell };

/// One-dimensional rectangular well on the half-line u >= 0 with an
/// impenetrable wall at u = 0. Units: hbar = 1, m_Y = 1.
///
/// `width` is the full width for InfiniteBox and WallAdjacentWell and the
/// half-width for OffsetWell. `center` is only used by OffsetWell.
struct WellSpec {
    WellKind kind = WellKind::InfiniteBox;
    double mass = 1.0;
    double width = 1.0;
    double depth = 0.0;
    double center = 0.0;

    static WellSpec box(double mass, double width);
    static WellSpec wall_adjacent(double mass, double width, double depth);
    static WellSpec offset(double mass, double half_width, double depth, double center);

    /// Throws std::invalid_argument if an invariant is violated.
    void validate() const;

    /// Region where the potential equals `depth`.
    double lower_edge() const;
    double upper_edge() const;
};

enum class StateKind { Bound, Box, Continuum };

/// Eigenfunction stored as a list of analytic pieces on consecutive
/// intervals. The last piece extends to infinity.
class StationaryState {
public:
    enum class Shape {
        Zero,  // 0
        Sine,  // A sin(k (u - u0) + phase)
        Decay, // A exp(-k (u - u0))
        Sinh,  // A sinh(k (u - u0))
    };

    struct Piece {
        double begin = 0.0;
        Shape shape = Shape::Zero;
        double amplitude = 0.0;
        double wavenumber = 0.0;
        double origin = 0.0;
        double phase = 0.0;
    };

    StationaryState(StateKind kind, double energy, std::vector<Piece> pieces);

    StateKind kind() const { return kind_; }
    double energy() const { return energy_; }
    double phase_shift() const { return phase_shift_; }
    int quantum_number() const { return quantum_number_; }
    double mass() const { return mass_; }

    double operator()(double u) const;
    double derivative(double u) const;

    /// Points where the analytic form changes; quadratures split there.
    std::vector<double> breakpoints() const;

    /// Closed-form integral of |psi|^2 over [0, u_max] (u_max may be +inf).
    double norm_squared(double u_max) const;

    const std::vector<Piece>& pieces() const { return pieces_; }

private:
    friend StationaryState infinite_box_state(int, const WellSpec&);
    friend std::vector<StationaryState> solve_bound_states(const WellSpec&);
    friend StationaryState continuum_state(const WellSpec&, double);

    const Piece& piece_at(double u) const;
    void scale(double factor);

    StateKind kind_;
    double energy_;
    std::vector<Piece> pieces_;
    double phase_shift_ = 0.0;
    int quantum_number_ = 0;
    double mass_ = 1.0;
};

StationaryState infinite_box_state(int n, const WellSpec& spec);

/// Bound states in (depth, 0) ordered by energy. Empty when the well is too
/// shallow to bind. Throws std::runtime_error if a root fails to converge.
std::vector<StationaryState> solve_bound_states(const WellSpec& spec);

/// Energy-normalized scattering state of a WallAdjacentWell:
/// asymptotically sqrt(2m/(pi k)) sin(k u + delta).
StationaryState continuum_state(const WellSpec& spec, double energy);

/// Residual of the transcendental matching condition at `energy`
/// (k' cot(k' a) + kappa for WallAdjacentWell; log-derivative mismatch at
/// the outer edge for OffsetWell).
double matching_residual(const WellSpec& spec, double energy);

std::vector<double> sample_state(const StationaryState& state, std::span<const double> points);

/// Potential of the well at coordinate u (0 for InfiniteBox inside the box).
double well_potential(const WellSpec& spec, double u);

/// Cell-averaged potential on nodes u_k = k h: depth times the fraction of
/// [u_k - h/2, u_k + h/2] covered by the well.
std::vector<double> cell_averaged_potential(const WellSpec& spec, double h, int intervals);

}  // namespace zeno
