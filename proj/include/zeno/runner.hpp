#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zeno/analysis.hpp"
#include "zeno/config.hpp"
#include "zeno/packet.hpp"
#include "zeno/propagator.hpp"
#include "zeno/wells.hpp"

namespace zeno {

/// Eigenstates, decay vertex, packet and grid problem for one config.
struct Model {
    EmitterStates emitter;
    WellSpec detector_well;
    StationaryState detector_ground;
    DecayVertex vertex;
    SourcePacket packet;
    std::vector<double> spectrum;  // c(E) on vertex.grid
    Problem problem;
};

Model build_model(const RunConfig& config);

/// Problem on a different grid for the same physics.
Problem build_problem(const Model& model, const RunConfig& config, const GridSpec& grid);

EvolveOptions evolve_options(const RunConfig& config);

struct Simulation {
    Evolution coupled;
    TimeSeries q0;
    RatioResult ratio;
    SpectralFunction delta;
};

/// evolve, q0 (numeric or analytic per config), D and Delta. A precomputed
/// free series may be passed in; it is cut to the coupled run's length.
/// `on_snapshot` receives the coupled field at config.snapshot_times.
Simulation simulate(const Model& model, const RunConfig& config, const TimeSeries* free_q0 = nullptr,
                    const std::function<void(double, const WaveField&)>& on_snapshot = {});

std::vector<DecayResult> decay_curve(const Model& model, const Simulation& sim, const std::vector<double>& m_X);

struct ConvergenceCase {
    std::string label;
    GridSpec grid;
    TimeSeries q;
};

struct ConvergenceReport {
    std::vector<ConvergenceCase> cases;  // dt, 2 dt, 4 dt at h, then dt at h/2
    std::complex<double> q_T(std::size_t i) const { return cases[i].q.values.back(); }
    double dt_order() const;                 // from q(T_max)
    double dt_order_sup() const;             // from max_t |q_a - q_b| on the shared times
    double h_change_relative() const;        // |q_h(T) - q_{h/2}(T)| / |q_h(T)|
    double h_change_sup() const;             // max_t |q_h - q_{h/2}| (q(0) = 1 sets the scale)
};

ConvergenceReport convergence_study(const Model& model, const RunConfig& config);

struct CrosscheckReport {
    TimeSeries numeric;
    TimeSeries analytic;
    double max_deviation = 0.0;
    double time_of_max = 0.0;
};

CrosscheckReport q0_crosscheck(const Model& model, const RunConfig& config, const TimeSeries* free_q0 = nullptr);

struct Check {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct RunReport {
    std::vector<Check> checks;
    std::vector<std::string> warnings;
    bool ok() const;
    std::string first_failure() const;
};

/// Runs the configured mode and writes manifest.txt, summary.txt and the
/// CSV files into config.output_dir.
RunReport run(const RunConfig& config);

/// Calls task(i) for i in [0, count) on up to `threads` workers. The first
/// exception by index is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

}  // namespace zeno
