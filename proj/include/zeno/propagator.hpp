#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "zeno/sine_transform.hpp"
#include "zeno/timeseries.hpp"

namespace zeno {

/// Rectangular grid for the Y (rows) x Z (columns) system. Nodes are
/// y_k = k h, z_l = l h with k = 0..N_Y and l = 0..N_Z.
struct GridSpec {
    int N_Y = 1024;
    int N_Z = 1024;
    double L_Y = 36.0;
    double L_Z = 36.0;
    double dt = 5e-4;
    double T_max = 1.0;
    int record_every = 2;

    double h() const { return L_Y / N_Y; }
    double h_z() const { return L_Z / N_Z; }
    int steps() const;
    double record_step() const { return dt * record_every; }
    std::vector<double> y_nodes() const;
    std::vector<double> z_nodes() const;

    /// Checks equal steps on both axes, L >= 5 z0 for the detector center
    /// z0, and k h < pi/4 for the largest wavenumber that has to be resolved.
    /// Throws std::invalid_argument naming every violated condition.
    void validate(double detector_center, double max_wavenumber) const;
};

class WaveField {
public:
    explicit WaveField(const GridSpec& grid);

    /// Psi_kl = y_k z_l with boundary rows and columns forced to zero.
    static WaveField product(const GridSpec& grid, std::span<const std::complex<double>> y,
                             std::span<const double> z);

    const GridSpec& grid() const { return grid_; }
    int rows() const { return grid_.N_Y + 1; }
    int cols() const { return grid_.N_Z + 1; }

    std::complex<double>& operator()(int k, int l) { return values_[index(k, l)]; }
    const std::complex<double>& operator()(int k, int l) const { return values_[index(k, l)]; }

    std::span<std::complex<double>> values() { return values_; }
    std::span<const std::complex<double>> values() const { return values_; }

    /// sum |Psi|^2 h^2
    double norm() const;
    bool boundaries_zero() const;

private:
    std::size_t index(int k, int l) const { return static_cast<std::size_t>(k) * cols() + l; }

    GridSpec grid_;
    ComplexBuffer values_;
};

/// W(d) = w0 exp(-d^2 / (2 sigma^2)), d = z - y.
struct GaussianCoupling {
    double w0 = 0.0;
    double sigma = 1.0;
    double operator()(double d) const;
};

struct PotentialSet {
    std::vector<double> U_Y;  // on y nodes
    std::vector<double> U_Z;  // on z nodes
    GaussianCoupling W;
    bool project_ground = false;
};

struct Masses {
    double m_Y = 1.0;
    double m_Z = 1.0;
};

/// F_mn *= exp(-i [(m pi / L_Y)^2 / (2 m_Y) + (n pi / L_Z)^2 / (2 m_Z)] dt)
void kinetic_phase(std::span<std::complex<double>> coefficients, const GridSpec& grid, double dt, Masses masses);

/// Psi_kl *= exp(-i [U_Y(y_k) + U_Z(z_l) + W(z_l - y_k)] dt)
void potential_phase(std::span<std::complex<double>> values, const GridSpec& grid, double dt,
                     const PotentialSet& potentials);

/// Psi -= <Y0 Z0|Psi> Y0 Z0 with grid-normalized real Y0, Z0.
void project_out_ground(std::span<std::complex<double>> values, const GridSpec& grid, std::span<const double> Y0,
                        std::span<const double> Z0);

enum class Splitting { Lie, Strang };

/// Everything a propagation needs, sampled on the grid nodes.
struct Problem {
    GridSpec grid;
    PotentialSet potentials;
    Masses masses;
    std::vector<std::complex<double>> packet;  // Ytilde(y_k)
    std::vector<double> detector_ground;       // Z0(z_l), grid-normalized
    std::vector<double> emitter_ground;        // Y0(y_k), grid-normalized
};

struct EvolveOptions {
    Splitting splitting = Splitting::Lie;
    int threads = 1;
    double norm_tolerance = 1e-6;
    double boundary_threshold = 1e-6;
    int boundary_margin = 5;
    std::vector<double> snapshot_times;
    std::function<void(double, const WaveField&)> on_snapshot;
};

struct Evolution {
    TimeSeries q;
    TimeSeries P_sur;  // real values stored in the real part
    std::vector<double> norm;
    int steps = 0;
    double max_norm_drift = 0.0;
    bool boundary_warning = false;
    double boundary_time = -1.0;  // first recorded time above the threshold
    double max_boundary_weight = 0.0;
};

class NormDriftError : public std::runtime_error {
public:
    NormDriftError(double time, double norm, double reference);
    double time() const { return time_; }
    double norm() const { return norm_; }

private:
    double time_;
    double norm_;
};

/// Propagates Ytilde x Z0 under H0_YZ + W, recording q, P_sur, and the norm
/// every `record_every` steps starting at t = 0. Throws NormDriftError when
/// the norm leaves 1 by more than `norm_tolerance` (projection off) or grows
/// at all (projection on).
Evolution evolve(const Problem& problem, const EvolveOptions& options = {});

/// Same pipeline with w0 = 0 and no projection.
Evolution evolve_free(const Problem& problem, const EvolveOptions& options = {});

}  // namespace zeno
