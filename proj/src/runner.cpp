#include "zeno/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "zeno/csv.hpp"

namespace zeno {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> grid_normalized(const StationaryState& state, std::span<const double> nodes, double h) {
    auto out = sample_state(state, nodes);
    out.front() = 0.0;
    out.back() = 0.0;
    double sum = 0.0;
    for (double v : out) sum += v * v;
    const double scale = 1.0 / std::sqrt(sum * h);
    for (double& v : out) v *= scale;
    return out;
}

TimeSeries prefix(const TimeSeries& s, std::size_t count) {
    if (s.size() < count) throw std::invalid_argument("precomputed series is shorter than the run");
    TimeSeries out;
    out.step = s.step;
    out.values.assign(s.values.begin(), s.values.begin() + static_cast<std::ptrdiff_t>(count));
    return out;
}

std::string fmt(double x) { return format_number(x); }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("error while writing '" + path.string() + "'");
}

void write_timeseries(const std::filesystem::path& path, const Simulation& sim) {
    CsvWriter csv(path.string(), {"t", "re_q", "im_q", "re_q0", "im_q0", "P_sur", "norm", "re_D", "im_D", "abs_D"});
    const auto& q = sim.coupled.q;
    for (std::size_t j = 0; j < q.size(); ++j) {
        const bool has_D = j < sim.ratio.D.size();
        const auto D = has_D ? sim.ratio.D.values[j] : std::complex<double>(kNaN, kNaN);
        csv.row({q.time(j), q.values[j].real(), q.values[j].imag(), sim.q0.values[j].real(), sim.q0.values[j].imag(),
                 sim.coupled.P_sur.values[j].real(), sim.coupled.norm[j], D.real(), D.imag(),
                 has_D ? std::abs(D) : kNaN});
    }
    csv.close();
}

void write_delta(const std::filesystem::path& path, const SpectralFunction& delta) {
    CsvWriter csv(path.string(), {"E", "Delta", "converged"});
    for (std::size_t j = 0; j < delta.density.size(); ++j)
        csv.row({delta.window.at(j), delta.density[j], delta.converged ? 1.0 : 0.0});
    csv.close();
}

void write_sweep(const std::filesystem::path& path, const std::vector<DecayResult>& results) {
    CsvWriter csv(path.string(), {"m_X", "omega0", "E_fin", "Gamma0", "Gamma", "Gamma_over_Gamma0", "delta_converged"});
    for (const auto& r : results)
        csv.row({r.m_X, r.omega0, r.E_fin, r.gamma0, r.gamma, r.gamma0 > 0.0 ? r.ratio() : kNaN,
                 r.delta_converged ? 1.0 : 0.0});
    csv.close();
}

void write_vertex(const std::filesystem::path& path, const Model& model) {
    CsvWriter csv(path.string(), {"E", "v", "M", "c"});
    const auto& v = model.vertex;
    for (int j = 0; j < v.grid.count; ++j) csv.row({v.grid.at(j), v.v_of_E[j], v.M_of_E[j], model.spectrum[j]});
    csv.close();
}

void write_packet(const std::filesystem::path& path, const Model& model) {
    CsvWriter csv(path.string(), {"y", "re_Ytilde", "im_Ytilde", "Y0", "Z0"});
    const auto& p = model.packet;
    for (std::size_t k = 0; k < p.grid.size(); ++k)
        csv.row({p.grid[k], p.amplitudes[k].real(), p.amplitudes[k].imag(), model.problem.emitter_ground[k],
                 k < model.problem.detector_ground.size() ? model.problem.detector_ground[k] : kNaN});
    csv.close();
}

void write_snapshot(const std::filesystem::path& dir, double t, const WaveField& psi, int stride) {
    std::ostringstream name;
    name << "snapshot_t" << std::fixed;
    name.precision(4);
    name << t << ".csv";
    CsvWriter csv((dir / name.str()).string(), {"y", "z", "density"});
    const double h = psi.grid().h();
    for (int k = 0; k < psi.rows(); k += stride)
        for (int l = 0; l < psi.cols(); l += stride) csv.row({k * h, l * h, std::norm(psi(k, l))});
    csv.close();
}

Check check(std::string name, bool passed, std::string detail) { return {std::move(name), passed, std::move(detail)}; }

}  // namespace

Problem build_problem(const Model& model, const RunConfig& config, const GridSpec& grid) {
    const double h = grid.h();
    const auto y = grid.y_nodes();
    const auto z = grid.z_nodes();
    Problem p;
    p.grid = grid;
    p.masses = {config.model.m_Y, config.model.m_Z};
    p.potentials.U_Y = cell_averaged_potential(model.emitter.y_well, h, grid.N_Y);
    p.potentials.U_Z = cell_averaged_potential(model.detector_well, h, grid.N_Z);
    p.potentials.W = {config.model.w0, config.model.sigma_W};
    p.potentials.project_ground = config.numerics.project_ground;
    p.packet = build_source_packet(model.emitter, y).amplitudes;
    p.detector_ground = grid_normalized(model.detector_ground, z, h);
    p.emitter_ground = grid_normalized(model.emitter.y_bound, y, h);
    return p;
}

Model build_model(const RunConfig& config) {
    validate(config);
    const ModelParams& m = config.model;
    const WellSpec x_box = WellSpec::box(m.m_X, m.a_X);
    const WellSpec y_well = WellSpec::wall_adjacent(m.m_Y, m.a_Y, m.U0_Y);
    const WellSpec z_well = WellSpec::offset(m.m_Z, m.a_Z, m.U0_Z, m.z0);
    auto z_states = solve_bound_states(z_well);
    if (z_states.size() != 1)
        throw std::runtime_error("detector well must bind exactly one state, found " + std::to_string(z_states.size()));

    const int count = static_cast<int>(std::llround(config.numerics.E_max / config.numerics.E_step));
    Model model{make_emitter_states(x_box, y_well),
                z_well,
                std::move(z_states.front()),
                {},
                {},
                {},
                {}};
    model.vertex = make_vertex(model.emitter, m.v0, EnergyGrid::up_to(config.numerics.E_max, count));
    const double n = packet_norm_constant(model.emitter);
    model.spectrum.resize(model.vertex.v_of_E.size());
    for (std::size_t j = 0; j < model.spectrum.size(); ++j) model.spectrum[j] = n * model.vertex.v_of_E[j] / m.v0;
    model.packet = build_source_packet(model.emitter, config.numerics.grid.y_nodes());
    model.problem = build_problem(model, config, config.numerics.grid);
    return model;
}

EvolveOptions evolve_options(const RunConfig& config) {
    EvolveOptions o;
    o.splitting = config.numerics.splitting;
    o.threads = config.numerics.fft_threads;
    return o;
}

Simulation simulate(const Model& model, const RunConfig& config, const TimeSeries* free_q0,
                    const std::function<void(double, const WaveField&)>& on_snapshot) {
    EvolveOptions options = evolve_options(config);
    if (on_snapshot) {
        options.snapshot_times = config.snapshot_times;
        options.on_snapshot = on_snapshot;
    }
    Simulation sim;
    sim.coupled = evolve(model.problem, options);
    const auto& q = sim.coupled.q;
    if (free_q0) {
        if (std::abs(free_q0->step - q.step) > 1e-12 * q.step)
            throw std::invalid_argument("simulate: precomputed q0 uses a different time step");
        sim.q0 = prefix(*free_q0, q.size());
    } else if (config.numerics.q0_source == Q0Source::Numeric) {
        sim.q0 = evolve_free(model.problem, evolve_options(config)).q;
    } else {
        sim.q0 = analytic_q0(model.spectrum, model.vertex.grid, model.detector_ground.energy(), q.step, q.size());
    }
    sim.ratio = ratio_D(q, sim.q0, config.numerics.q_floor);
    sim.delta = spreading_function(sim.ratio.D, default_delta_window(sim.ratio.D), config.numerics.tail_threshold);
    return sim;
}

std::vector<DecayResult> decay_curve(const Model& model, const Simulation& sim, const std::vector<double>& m_X) {
    return sweep_final_energy(model.emitter, model.vertex, sim.delta, m_X);
}

double ConvergenceReport::dt_order() const {
    const double e1 = std::abs(q_T(0) - q_T(1));
    const double e2 = std::abs(q_T(1) - q_T(2));
    return std::log2(e2 / e1);
}

namespace {

double sup_difference(const TimeSeries& a, const TimeSeries& b) {
    const std::size_t n = std::min(a.size(), b.size());
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(a.values[j] - b.values[j]));
    return m;
}

}  // namespace

double ConvergenceReport::dt_order_sup() const {
    return std::log2(sup_difference(cases[1].q, cases[2].q) / sup_difference(cases[0].q, cases[1].q));
}

double ConvergenceReport::h_change_relative() const { return std::abs(q_T(0) - q_T(3)) / std::abs(q_T(0)); }

double ConvergenceReport::h_change_sup() const { return sup_difference(cases[0].q, cases[3].q); }

ConvergenceReport convergence_study(const Model& model, const RunConfig& config) {
    const GridSpec base = config.numerics.grid;
    ConvergenceReport report;
    auto make = [&](std::string label, int scale_h, int scale_dt) {
        GridSpec g = base;
        g.N_Y = base.N_Y * scale_h;
        g.N_Z = base.N_Z * scale_h;
        g.dt = base.dt * scale_dt;
        g.record_every = 4 / scale_dt;
        if (g.steps() % g.record_every != 0)
            throw std::invalid_argument("convergence_study: T_max must be a multiple of 4 dt");
        report.cases.push_back({std::move(label), g, {}});
    };
    make("dt", 1, 1);
    make("2dt", 1, 2);
    make("4dt", 1, 4);
    make("h/2", 2, 1);

    const EvolveOptions options = evolve_options(config);
    parallel_for(report.cases.size(), config.threads, [&](std::size_t i) {
        const GridSpec& g = report.cases[i].grid;
        const Problem p = g.N_Y == base.N_Y && g.N_Z == base.N_Z ? [&] {
            Problem copy = model.problem;
            copy.grid = g;
            return copy;
        }()
                                                                 : build_problem(model, config, g);
        report.cases[i].q = evolve(p, options).q;
    });
    return report;
}

CrosscheckReport q0_crosscheck(const Model& model, const RunConfig& config, const TimeSeries* free_q0) {
    CrosscheckReport r;
    if (free_q0) {
        r.numeric = *free_q0;
    } else {
        r.numeric = evolve_free(model.problem, evolve_options(config)).q;
    }
    r.analytic = analytic_q0(model.spectrum, model.vertex.grid, model.detector_ground.energy(), r.numeric.step,
                             r.numeric.size());
    for (std::size_t j = 0; j < r.numeric.size(); ++j) {
        const double d = std::abs(r.numeric.values[j] - r.analytic.values[j]);
        if (d > r.max_deviation) {
            r.max_deviation = d;
            r.time_of_max = r.numeric.time(j);
        }
    }
    return r;
}

bool RunReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string RunReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.passed) return c.name + ": " + c.detail;
    return {};
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto n = static_cast<std::size_t>(std::max(1, threads));
    if (n == 1 || count <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < std::min(n, count); ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

RunReport run(const RunConfig& config) {
    validate(config);
    namespace fs = std::filesystem;
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    write_text(dir / "manifest.txt", manifest_text(config));

    RunReport report;
    std::ostringstream summary;
    summary.precision(10);
    summary << "mode: " << mode_name(config.mode) << "\npreset: " << config.preset << "\n";

    const Model model = build_model(config);
    const auto& v = model.vertex;
    summary << "E0_Y: " << model.emitter.y_bound.energy() << "\nE0_Z: " << model.detector_ground.energy()
            << "\nomega0: " << v.omega0 << "\ndeltaV0: " << v.deltaV0 << "\nE_fin: " << v.E_fin << "\n";
    write_vertex(dir / "vertex.csv", model);
    write_packet(dir / "packet.csv", model);

    if (config.mode == Mode::Single || config.mode == Mode::Sweep) {
        Simulation sim;
        try {
            std::function<void(double, const WaveField&)> snapshot;
            if (!config.snapshot_times.empty())
                snapshot = [&](double t, const WaveField& psi) { write_snapshot(dir, t, psi, config.snapshot_stride); };
            sim = simulate(model, config, nullptr, snapshot);
        } catch (const NormDriftError& e) {
            report.checks.push_back(check("norm conservation", false, e.what()));
            summary << "status: FAILED\nfirst_failure: " << report.first_failure() << "\n";
            write_text(dir / "summary.txt", summary.str());
            return report;
        }
        report.checks.push_back(check("norm conservation", true,
                                      "max relative drift " + fmt(sim.coupled.max_norm_drift)));
        const auto q0 = sim.coupled.q.values.front();
        report.checks.push_back(check("q(0) = 1", std::abs(q0 - 1.0) < 1e-8, "q(0) = " + fmt(q0.real())));
        const double p0 = sim.coupled.P_sur.values.front().real();
        report.checks.push_back(check("P_sur(0) = 1", std::abs(p0 - 1.0) < 1e-8, "P_sur(0) = " + fmt(p0)));
        if (sim.delta.converged)
            report.checks.push_back(check("Delta mass", std::abs(sim.delta.mass - 1.0) < 0.02,
                                          "mass " + fmt(sim.delta.mass)));
        if (sim.coupled.boundary_warning)
            report.warnings.push_back("boundary contamination: weight " + fmt(sim.coupled.max_boundary_weight) +
                                      " within " + std::to_string(EvolveOptions{}.boundary_margin) +
                                      " grid points of the outer edges, first at t = " +
                                      fmt(sim.coupled.boundary_time));
        if (sim.ratio.truncated)
            report.warnings.push_back("D(t) truncated at t = " + fmt(sim.ratio.truncation_time) +
                                      " where |q0| reached the floor");

        const std::vector<double> masses =
            config.mode == Mode::Sweep ? config.sweep.values() : std::vector<double>{config.model.m_X};
        const auto results = decay_curve(model, sim, masses);
        write_timeseries(dir / "timeseries.csv", sim);
        write_delta(dir / "delta.csv", sim.delta);
        write_sweep(dir / "sweep.csv", results);

        summary << "D(T_max): " << std::abs(sim.ratio.D.values.back()) << "\n";
        summary << "Delta_converged: " << (sim.delta.converged ? "true" : "false") << "\n";
        summary << "Delta_mass: " << sim.delta.mass << "\n";
        summary << "Delta_mass_above_0: " << sim.delta.mass_above(0.0) << "\n";
        summary << "P_sur(T_max): " << sim.coupled.P_sur.values.back().real() << "\n";
        summary << "norm(T_max): " << sim.coupled.norm.back() << "\n";
        if (!sim.delta.converged)
            summary << "note: Delta unconverged; Gamma ~ Gamma0 path taken (Gamma reported equal to Gamma0)\n";
        for (const auto& r : results) {
            summary << "m_X = " << r.m_X << ": E_fin = " << r.E_fin << ", Gamma0 = " << r.gamma0
                    << ", Gamma = " << r.gamma;
            if (r.gamma0 > 0.0) summary << ", Gamma/Gamma0 = " << r.ratio();
            summary << "\n";
        }
    } else if (config.mode == Mode::Convergence) {
        const auto conv = convergence_study(model, config);
        CsvWriter csv((dir / "convergence.csv").string(), {"N_Y", "N_Z", "h", "dt", "re_q_T", "im_q_T", "abs_q_T"});
        for (std::size_t i = 0; i < conv.cases.size(); ++i) {
            const auto& g = conv.cases[i].grid;
            const auto qT = conv.q_T(i);
            csv.row({double(g.N_Y), double(g.N_Z), g.h(), g.dt, qT.real(), qT.imag(), std::abs(qT)});
            summary << "case " << conv.cases[i].label << ": h = " << g.h() << ", dt = " << g.dt
                    << ", q(T_max) = " << qT.real() << (qT.imag() < 0 ? " - " : " + ") << std::abs(qT.imag())
                    << "i\n";
        }
        csv.close();
        const double order = conv.dt_order();
        const double h_rel = conv.h_change_relative();
        summary << "dt_order_q_T: " << order << "\ndt_order_sup: " << conv.dt_order_sup()
                << "\nh_change_relative_q_T: " << h_rel << "\nh_change_sup: " << conv.h_change_sup() << "\n";
        report.checks.push_back(check("first-order splitting in dt", order > 0.8 && order < 1.2,
                                      "observed order " + fmt(order)));
        report.checks.push_back(check("spatial convergence", h_rel < 1e-3,
                                      "relative change of q(T_max) under h/2 " + fmt(h_rel)));
    } else {
        const auto cc = q0_crosscheck(model, config);
        CsvWriter csv((dir / "timeseries.csv").string(),
                      {"t", "re_q0_numeric", "im_q0_numeric", "re_q0_analytic", "im_q0_analytic", "abs_difference"});
        for (std::size_t j = 0; j < cc.numeric.size(); ++j) {
            const auto a = cc.numeric.values[j], b = cc.analytic.values[j];
            csv.row({cc.numeric.time(j), a.real(), a.imag(), b.real(), b.imag(), std::abs(a - b)});
        }
        csv.close();
        summary << "max_abs_q0_deviation: " << cc.max_deviation << "\nat_t: " << cc.time_of_max << "\n";
        report.checks.push_back(check("q0 numeric vs analytic", cc.max_deviation < 1e-3,
                                      "max deviation " + fmt(cc.max_deviation)));
    }

    for (const auto& c : report.checks)
        summary << "check " << c.name << ": " << (c.passed ? "pass" : "FAIL") << " (" << c.detail << ")\n";
    for (const auto& w : report.warnings) summary << "warning: " << w << "\n";
    summary << "status: " << (report.ok() ? "ok" : "FAILED") << "\n";
    if (!report.ok()) summary << "first_failure: " << report.first_failure() << "\n";
    write_text(dir / "summary.txt", summary.str());
    return report;
}

}  // namespace zeno
