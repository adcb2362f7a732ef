#include "zeno/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace zeno {

namespace {

using cplx = std::complex<double>;

std::vector<double> nodes(int intervals, double length) {
    std::vector<double> out(intervals + 1);
    const double h = length / intervals;
    for (int k = 0; k <= intervals; ++k) out[k] = k * h;
    return out;
}

std::vector<cplx> kinetic_factors(int intervals, double length, double mass, double dt, double scale) {
    std::vector<cplx> out(intervals + 1, 0.0);
    for (int m = 1; m < intervals; ++m) {
        const double k = m * std::numbers::pi / length;
        out[m] = std::polar(scale, -k * k / (2.0 * mass) * dt);
    }
    return out;
}

void check_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) + " values, got " +
                                    std::to_string(got));
}

struct Sample {
    cplx q;
    double P_sur;
    double norm;
};

Sample measure(const WaveField& psi, std::span<const cplx> packet, std::span<const double> Z0) {
    const GridSpec& g = psi.grid();
    const double h = g.h();
    Sample s{0.0, 0.0, 0.0};
    for (int k = 1; k < g.N_Y; ++k) {
        cplx a = 0.0;
        double row = 0.0;
        for (int l = 1; l < g.N_Z; ++l) {
            const cplx v = psi(k, l);
            a += v * Z0[l];
            row += std::norm(v);
        }
        a *= h;
        s.q += std::conj(packet[k]) * a;
        s.P_sur += std::norm(a);
        s.norm += row;
    }
    s.q *= h;
    s.P_sur *= h;
    s.norm *= h * h;
    return s;
}

double boundary_weight(const WaveField& psi, int margin) {
    const GridSpec& g = psi.grid();
    const int k0 = std::max(1, g.N_Y - margin);
    const int l0 = std::max(1, g.N_Z - margin);
    double sum = 0.0;
    for (int k = 1; k < g.N_Y; ++k) {
        const int start = k >= k0 ? 1 : l0;
        for (int l = start; l < g.N_Z; ++l) sum += std::norm(psi(k, l));
    }
    return sum * g.h() * g.h();
}

}  // namespace

int GridSpec::steps() const { return static_cast<int>(std::llround(T_max / dt)); }

std::vector<double> GridSpec::y_nodes() const { return nodes(N_Y, L_Y); }
std::vector<double> GridSpec::z_nodes() const { return nodes(N_Z, L_Z); }

void GridSpec::validate(double detector_center, double max_wavenumber) const {
    std::vector<std::string> problems;
    if (N_Y < 2) problems.push_back("numerics.N_Y must be >= 2");
    if (N_Z < 2) problems.push_back("numerics.N_Z must be >= 2");
    if (!(L_Y > 0.0)) problems.push_back("numerics.L_Y must be positive");
    if (!(L_Z > 0.0)) problems.push_back("numerics.L_Z must be positive");
    if (!(dt > 0.0)) problems.push_back("numerics.dt must be positive");
    if (!(T_max > 0.0)) problems.push_back("numerics.T_max must be positive");
    if (record_every < 1) problems.push_back("numerics.record_every must be >= 1");
    if (problems.empty()) {
        if (std::abs(h() - h_z()) > 1e-12 * h())
            problems.push_back("grid steps differ: L_Y/N_Y = " + std::to_string(h()) +
                               ", L_Z/N_Z = " + std::to_string(h_z()));
        if (L_Y < 5.0 * detector_center || L_Z < 5.0 * detector_center)
            problems.push_back("domain lengths must be at least 5 z0 = " + std::to_string(5.0 * detector_center));
        if (!(max_wavenumber * h() < std::numbers::pi / 4))
            problems.push_back("k h = " + std::to_string(max_wavenumber * h()) + " is not below pi/4");
        if (steps() < 1) problems.push_back("T_max / dt must give at least one step");
    }
    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid grid:";
        for (const auto& p : problems) msg << "\n  " << p;
        throw std::invalid_argument(msg.str());
    }
}

WaveField::WaveField(const GridSpec& grid) : grid_(grid) {
    if (grid.N_Y < 2 || grid.N_Z < 2) throw std::invalid_argument("WaveField: need at least 2 intervals per axis");
    values_.assign(static_cast<std::size_t>(rows()) * cols(), 0.0);
}

WaveField WaveField::product(const GridSpec& grid, std::span<const std::complex<double>> y,
                             std::span<const double> z) {
    WaveField f(grid);
    check_size(y.size(), static_cast<std::size_t>(f.rows()), "WaveField::product (y factor)");
    check_size(z.size(), static_cast<std::size_t>(f.cols()), "WaveField::product (z factor)");
    for (int k = 1; k < grid.N_Y; ++k)
        for (int l = 1; l < grid.N_Z; ++l) f(k, l) = y[k] * z[l];
    return f;
}

double WaveField::norm() const {
    double sum = 0.0;
    for (const auto& v : values_) sum += std::norm(v);
    return sum * grid_.h() * grid_.h();
}

bool WaveField::boundaries_zero() const {
    for (int l = 0; l < cols(); ++l)
        if ((*this)(0, l) != 0.0 || (*this)(grid_.N_Y, l) != 0.0) return false;
    for (int k = 0; k < rows(); ++k)
        if ((*this)(k, 0) != 0.0 || (*this)(k, grid_.N_Z) != 0.0) return false;
    return true;
}

double GaussianCoupling::operator()(double d) const { return w0 * std::exp(-d * d / (2.0 * sigma * sigma)); }

void kinetic_phase(std::span<std::complex<double>> coefficients, const GridSpec& grid, double dt, Masses masses) {
    const std::size_t cols = grid.N_Z + 1;
    check_size(coefficients.size(), (grid.N_Y + 1) * cols, "kinetic_phase");
    const auto fy = kinetic_factors(grid.N_Y, grid.L_Y, masses.m_Y, dt, 1.0);
    const auto fz = kinetic_factors(grid.N_Z, grid.L_Z, masses.m_Z, dt, 1.0);
    for (int m = 1; m < grid.N_Y; ++m)
        for (int n = 1; n < grid.N_Z; ++n) coefficients[m * cols + n] *= fy[m] * fz[n];
}

void potential_phase(std::span<std::complex<double>> values, const GridSpec& grid, double dt,
                     const PotentialSet& potentials) {
    const std::size_t cols = grid.N_Z + 1;
    check_size(values.size(), (grid.N_Y + 1) * cols, "potential_phase");
    check_size(potentials.U_Y.size(), grid.N_Y + 1, "potential_phase (U_Y)");
    check_size(potentials.U_Z.size(), cols, "potential_phase (U_Z)");
    const double h = grid.h();
    for (int k = 1; k < grid.N_Y; ++k)
        for (int l = 1; l < grid.N_Z; ++l) {
            const double u = potentials.U_Y[k] + potentials.U_Z[l] + potentials.W((l - k) * h);
            values[k * cols + l] *= std::polar(1.0, -u * dt);
        }
}

void project_out_ground(std::span<std::complex<double>> values, const GridSpec& grid, std::span<const double> Y0,
                        std::span<const double> Z0) {
    const std::size_t cols = grid.N_Z + 1;
    check_size(values.size(), (grid.N_Y + 1) * cols, "project_out_ground");
    check_size(Y0.size(), grid.N_Y + 1, "project_out_ground (Y0)");
    check_size(Z0.size(), cols, "project_out_ground (Z0)");
    const double h = grid.h();
    cplx overlap = 0.0;
    for (int k = 1; k < grid.N_Y; ++k) {
        cplx row = 0.0;
        for (int l = 1; l < grid.N_Z; ++l) row += Z0[l] * values[k * cols + l];
        overlap += Y0[k] * row;
    }
    overlap *= h * h;
    for (int k = 1; k < grid.N_Y; ++k) {
        const cplx c = overlap * Y0[k];
        for (int l = 1; l < grid.N_Z; ++l) values[k * cols + l] -= c * Z0[l];
    }
}

NormDriftError::NormDriftError(double time, double norm, double reference)
    : std::runtime_error([&] {
          std::ostringstream msg;
          msg.precision(17);
          msg << "norm drift at t = " << time << ": norm = " << norm << " against reference " << reference
              << " (time step too large or reflections from the domain edge)";
          return msg.str();
      }()),
      time_(time),
      norm_(norm) {}

Evolution evolve(const Problem& problem, const EvolveOptions& options) {
    const GridSpec& g = problem.grid;
    const std::size_t rows = g.N_Y + 1;
    const std::size_t cols = g.N_Z + 1;
    check_size(problem.packet.size(), rows, "evolve (packet)");
    check_size(problem.detector_ground.size(), cols, "evolve (detector ground state)");
    const PotentialSet& pot = problem.potentials;
    check_size(pot.U_Y.size(), rows, "evolve (U_Y)");
    check_size(pot.U_Z.size(), cols, "evolve (U_Z)");
    if (pot.project_ground) check_size(problem.emitter_ground.size(), rows, "evolve (emitter ground state)");
    if (!(g.dt > 0.0) || g.record_every < 1 || g.steps() < 1)
        throw std::invalid_argument("evolve: need dt > 0, record_every >= 1 and at least one step");

    const SineTransform2D dst(g.N_Y, g.N_Z, options.threads);
    WaveField psi = WaveField::product(g, problem.packet, problem.detector_ground);
    auto values = psi.values();

    // Both raw transforms together carry 4 N_Y N_Z; the kinetic factors
    // absorb the normalization.
    const double scale = 1.0 / (4.0 * g.N_Y * g.N_Z);
    const auto ky = kinetic_factors(g.N_Y, g.L_Y, problem.masses.m_Y, g.dt, scale);
    const auto kz = kinetic_factors(g.N_Z, g.L_Z, problem.masses.m_Z, g.dt, 1.0);

    const double potential_dt = options.splitting == Splitting::Strang ? 0.5 * g.dt : g.dt;
    const std::size_t inner = g.N_Z - 1;
    ComplexBuffer phase(static_cast<std::size_t>(g.N_Y - 1) * inner);
    const double h = g.h();
    for (int k = 1; k < g.N_Y; ++k)
        for (int l = 1; l < g.N_Z; ++l) {
            const double u = pot.U_Y[k] + pot.U_Z[l] + pot.W((l - k) * h);
            phase[(k - 1) * inner + (l - 1)] = std::polar(1.0, -u * potential_dt);
        }

    auto apply_potential = [&] {
        for (int k = 1; k < g.N_Y; ++k) {
            cplx* row = values.data() + k * cols + 1;
            const cplx* ph = phase.data() + (k - 1) * inner;
            for (std::size_t l = 0; l < inner; ++l) row[l] *= ph[l];
        }
    };
    auto apply_kinetic = [&] {
        for (int m = 1; m < g.N_Y; ++m) {
            cplx* row = values.data() + m * cols;
            const cplx a = ky[m];
            for (int n = 1; n < g.N_Z; ++n) row[n] *= a * kz[n];
        }
    };

    std::vector<std::size_t> snapshot_steps;
    if (options.on_snapshot)
        for (double t : options.snapshot_times) snapshot_steps.push_back(static_cast<std::size_t>(std::llround(t / g.dt)));

    Evolution out;
    out.steps = g.steps();
    out.q.step = g.record_step();
    out.P_sur.step = g.record_step();
    double reference = 0.0;
    double previous = 0.0;

    auto record = [&](int step) {
        const double t = step * g.dt;
        const Sample s = measure(psi, problem.packet, problem.detector_ground);
        if (step == 0) {
            reference = s.norm;
            previous = s.norm;
        }
        const double drift = std::abs(s.norm - reference) / reference;
        out.max_norm_drift = std::max(out.max_norm_drift, drift);
        if (pot.project_ground) {
            if (s.norm > previous + 1e-12) throw NormDriftError(t, s.norm, previous);
        } else if (drift > options.norm_tolerance) {
            throw NormDriftError(t, s.norm, reference);
        }
        previous = s.norm;
        out.q.values.push_back(s.q);
        out.P_sur.values.emplace_back(s.P_sur, 0.0);
        out.norm.push_back(s.norm);

        const double edge = boundary_weight(psi, options.boundary_margin);
        out.max_boundary_weight = std::max(out.max_boundary_weight, edge);
        if (!out.boundary_warning && edge > options.boundary_threshold) {
            out.boundary_warning = true;
            out.boundary_time = t;
        }
    };
    auto maybe_snapshot = [&](int step) {
        if (std::find(snapshot_steps.begin(), snapshot_steps.end(), static_cast<std::size_t>(step)) !=
            snapshot_steps.end())
            options.on_snapshot(step * g.dt, psi);
    };

    record(0);
    maybe_snapshot(0);
    for (int step = 1; step <= out.steps; ++step) {
        if (options.splitting == Splitting::Strang) apply_potential();
        dst.raw(values);
        apply_kinetic();
        dst.raw(values);
        apply_potential();
        if (pot.project_ground) project_out_ground(values, g, problem.emitter_ground, problem.detector_ground);
        if (step % g.record_every == 0) record(step);
        maybe_snapshot(step);
    }
    return out;
}

Evolution evolve_free(const Problem& problem, const EvolveOptions& options) {
    Problem free = problem;
    free.potentials.W.w0 = 0.0;
    free.potentials.project_ground = false;
    return evolve(free, options);
}

}  // namespace zeno
