#include "zeno/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace zeno {

namespace {

std::string format_double(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_int(const std::string& text, int& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

struct Field {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    // Returns an error message, empty on success.
    std::function<std::string(RunConfig&, const std::string&)> set;
};

template <class Access>
Field real_field(std::string key, Access access) {
    return {key,
            [access](const RunConfig& c) { return format_double(*access(c)); },
            [access](RunConfig& c, const std::string& v) -> std::string {
                double x;
                if (!parse_double(v, x)) return "expected a real number, got '" + v + "'";
                *access(c) = x;
                return {};
            }};
}

template <class Access>
Field int_field(std::string key, Access access) {
    return {key,
            [access](const RunConfig& c) { return std::to_string(*access(c)); },
            [access](RunConfig& c, const std::string& v) -> std::string {
                int x;
                if (!parse_int(v, x)) return "expected an integer, got '" + v + "'";
                *access(c) = x;
                return {};
            }};
}

template <class Access>
Field list_field(std::string key, Access access) {
    return {key,
            [access](const RunConfig& c) {
                std::string out;
                const auto& list = *access(c);
                for (std::size_t i = 0; i < list.size(); ++i) out += (i ? "," : "") + format_double(list[i]);
                return out;
            },
            [access](RunConfig& c, const std::string& v) -> std::string {
                std::vector<double> values;
                std::stringstream in(v);
                std::string item;
                while (std::getline(in, item, ',')) {
                    double x;
                    if (!parse_double(trim(item), x)) return "expected a comma-separated list of reals, got '" + v + "'";
                    values.push_back(x);
                }
                *access(c) = std::move(values);
                return {};
            }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(real_field("model.a_X", [](auto& c) { return &c.model.a_X; }));
        f.push_back(real_field("model.m_X", [](auto& c) { return &c.model.m_X; }));
        f.push_back(real_field("model.m_Y", [](auto& c) { return &c.model.m_Y; }));
        f.push_back(real_field("model.a_Y", [](auto& c) { return &c.model.a_Y; }));
        f.push_back(real_field("model.U0_Y", [](auto& c) { return &c.model.U0_Y; }));
        f.push_back(real_field("model.z0", [](auto& c) { return &c.model.z0; }));
        f.push_back(real_field("model.a_Z", [](auto& c) { return &c.model.a_Z; }));
        f.push_back(real_field("model.m_Z", [](auto& c) { return &c.model.m_Z; }));
        f.push_back(real_field("model.U0_Z", [](auto& c) { return &c.model.U0_Z; }));
        f.push_back(real_field("model.sigma_W", [](auto& c) { return &c.model.sigma_W; }));
        f.push_back(real_field("model.w0", [](auto& c) { return &c.model.w0; }));
        f.push_back(real_field("model.v0", [](auto& c) { return &c.model.v0; }));

        f.push_back(int_field("numerics.N_Y", [](auto& c) { return &c.numerics.grid.N_Y; }));
        f.push_back(int_field("numerics.N_Z", [](auto& c) { return &c.numerics.grid.N_Z; }));
        f.push_back(real_field("numerics.L_Y", [](auto& c) { return &c.numerics.grid.L_Y; }));
        f.push_back(real_field("numerics.L_Z", [](auto& c) { return &c.numerics.grid.L_Z; }));
        f.push_back(real_field("numerics.dt", [](auto& c) { return &c.numerics.grid.dt; }));
        f.push_back(real_field("numerics.T_max", [](auto& c) { return &c.numerics.grid.T_max; }));
        f.push_back(int_field("numerics.record_every", [](auto& c) { return &c.numerics.grid.record_every; }));
        f.push_back({"numerics.project_ground",
                     [](const RunConfig& c) { return std::string(c.numerics.project_ground ? "true" : "false"); },
                     [](RunConfig& c, const std::string& v) -> std::string {
                         if (v == "true" || v == "1") c.numerics.project_ground = true;
                         else if (v == "false" || v == "0") c.numerics.project_ground = false;
                         else return "expected true or false, got '" + v + "'";
                         return {};
                     }});
        f.push_back({"numerics.splitting",
                     [](const RunConfig& c) {
                         return std::string(c.numerics.splitting == Splitting::Lie ? "lie" : "strang");
                     },
                     [](RunConfig& c, const std::string& v) -> std::string {
                         if (v == "lie") c.numerics.splitting = Splitting::Lie;
                         else if (v == "strang") c.numerics.splitting = Splitting::Strang;
                         else return "expected lie or strang, got '" + v + "'";
                         return {};
                     }});
        f.push_back(real_field("numerics.E_max", [](auto& c) { return &c.numerics.E_max; }));
        f.push_back(real_field("numerics.E_step", [](auto& c) { return &c.numerics.E_step; }));
        f.push_back(real_field("numerics.resolved_energy", [](auto& c) { return &c.numerics.resolved_energy; }));
        f.push_back(real_field("numerics.tail_threshold", [](auto& c) { return &c.numerics.tail_threshold; }));
        f.push_back(real_field("numerics.q_floor", [](auto& c) { return &c.numerics.q_floor; }));
        f.push_back({"numerics.q0_source",
                     [](const RunConfig& c) {
                         return std::string(c.numerics.q0_source == Q0Source::Numeric ? "numeric" : "analytic");
                     },
                     [](RunConfig& c, const std::string& v) -> std::string {
                         if (v == "numeric") c.numerics.q0_source = Q0Source::Numeric;
                         else if (v == "analytic") c.numerics.q0_source = Q0Source::Analytic;
                         else return "expected numeric or analytic, got '" + v + "'";
                         return {};
                     }});
        f.push_back(int_field("numerics.fft_threads", [](auto& c) { return &c.numerics.fft_threads; }));

        f.push_back(real_field("sweep.m_X_min", [](auto& c) { return &c.sweep.m_X_min; }));
        f.push_back(real_field("sweep.m_X_max", [](auto& c) { return &c.sweep.m_X_max; }));
        f.push_back(int_field("sweep.count", [](auto& c) { return &c.sweep.count; }));
        f.push_back(list_field("sweep.m_X", [](auto& c) { return &c.sweep.m_X; }));

        f.push_back({"run.preset", [](const RunConfig& c) { return c.preset; },
                     [](RunConfig& c, const std::string& v) -> std::string {
                         c.preset = v;
                         return {};
                     }});
        f.push_back({"run.mode", [](const RunConfig& c) { return mode_name(c.mode); },
                     [](RunConfig& c, const std::string& v) -> std::string {
                         if (v == "single") c.mode = Mode::Single;
                         else if (v == "sweep") c.mode = Mode::Sweep;
                         else if (v == "convergence") c.mode = Mode::Convergence;
                         else if (v == "q0-crosscheck") c.mode = Mode::Q0Crosscheck;
                         else return "expected single, sweep, convergence or q0-crosscheck, got '" + v + "'";
                         return {};
                     }});
        f.push_back({"run.output_dir", [](const RunConfig& c) { return c.output_dir; },
                     [](RunConfig& c, const std::string& v) -> std::string {
                         c.output_dir = v;
                         return {};
                     }});
        f.push_back(int_field("run.threads", [](auto& c) { return &c.threads; }));
        f.push_back(list_field("run.snapshot_times", [](auto& c) { return &c.snapshot_times; }));
        f.push_back(int_field("run.snapshot_stride", [](auto& c) { return &c.snapshot_stride; }));
        return f;
    }();
    return table;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error([&] {
          std::string msg = "invalid configuration:";
          for (const auto& p : problems) msg += "\n  " + p;
          return msg;
      }()),
      problems_(std::move(problems)) {}

std::vector<double> SweepSpec::values() const {
    if (!m_X.empty()) return m_X;
    std::vector<double> out;
    if (count < 1) return out;
    if (count == 1) return {m_X_min};
    const double a = std::log(m_X_min), b = std::log(m_X_max);
    for (int i = 0; i < count; ++i) out.push_back(std::exp(a + (b - a) * i / (count - 1)));
    return out;
}

std::vector<std::string> preset_names() { return {"wide", "narrow"}; }

RunConfig preset_config(const std::string& name) {
    RunConfig c;
    c.preset = name;
    if (name == "wide") {
        c.model.sigma_W = 2.548;
        c.model.w0 = 789.2;
        c.numerics.project_ground = true;
        c.numerics.grid.T_max = 1.0;
    } else if (name == "narrow") {
        c.model.sigma_W = 0.2;
        c.model.w0 = 20000.0;
        c.numerics.project_ground = false;
        c.numerics.grid.T_max = 1.5;
    } else {
        throw ConfigError({"unknown preset '" + name + "' (known: wide, narrow)"});
    }
    return c;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> out;
    std::vector<std::string> problems;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(number) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            problems.push_back("line " + std::to_string(number) + ": empty key");
            continue;
        }
        if (out.count(key)) problems.push_back("line " + std::to_string(number) + ": duplicate key " + key);
        out[key] = trim(line.substr(eq + 1));
    }
    if (!problems.empty()) throw ConfigError(problems);
    return out;
}

void apply_overrides(RunConfig& config, const std::map<std::string, std::string>& values) {
    std::vector<std::string> problems;
    for (const auto& [key, value] : values) {
        const Field* field = nullptr;
        for (const auto& f : fields())
            if (f.key == key) field = &f;
        if (!field) {
            problems.push_back(key + ": unknown key");
            continue;
        }
        if (auto err = field->set(config, value); !err.empty()) problems.push_back(key + ": " + err);
    }
    if (!problems.empty()) throw ConfigError(problems);
}

RunConfig load_config(const std::optional<std::string>& preset, const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides) {
    std::map<std::string, std::string> file_values;
    if (path) file_values = parse_key_values(read_file(*path));

    std::vector<std::string> problems;
    std::vector<std::pair<std::string, std::string>> assignments;
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            problems.push_back("override '" + o + "': expected key=value");
            continue;
        }
        assignments.emplace_back(trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
    }
    if (!problems.empty()) throw ConfigError(problems);

    std::string name = "wide";
    if (preset) name = *preset;
    else if (auto it = file_values.find("run.preset"); it != file_values.end()) name = it->second;
    RunConfig config = preset_config(name);
    file_values.erase("run.preset");
    apply_overrides(config, file_values);
    for (const auto& [key, value] : assignments) {
        if (key == "run.preset") throw ConfigError({"run.preset cannot be overridden; use --preset"});
        apply_overrides(config, {{key, value}});
    }
    validate(config);
    return config;
}

std::vector<std::string> validation_errors(const RunConfig& c) {
    std::vector<std::string> p;
    const ModelParams& m = c.model;
    auto positive = [&](double v, const char* key) {
        if (!(v > 0.0)) p.push_back(std::string(key) + ": must be positive, got " + format_double(v));
    };
    auto non_positive = [&](double v, const char* key) {
        if (!(v <= 0.0)) p.push_back(std::string(key) + ": must be <= 0, got " + format_double(v));
    };
    positive(m.a_X, "model.a_X");
    positive(m.m_X, "model.m_X");
    positive(m.m_Y, "model.m_Y");
    positive(m.a_Y, "model.a_Y");
    non_positive(m.U0_Y, "model.U0_Y");
    positive(m.z0, "model.z0");
    positive(m.a_Z, "model.a_Z");
    positive(m.m_Z, "model.m_Z");
    non_positive(m.U0_Z, "model.U0_Z");
    positive(m.sigma_W, "model.sigma_W");
    if (!(m.w0 >= 0.0)) p.push_back("model.w0: must be >= 0, got " + format_double(m.w0));
    positive(m.v0, "model.v0");
    if (m.z0 - m.a_Z <= 0.0) p.push_back("model.z0: detector well must not touch the wall (z0 > a_Z)");

    const Numerics& n = c.numerics;
    positive(n.E_max, "numerics.E_max");
    positive(n.E_step, "numerics.E_step");
    positive(n.resolved_energy, "numerics.resolved_energy");
    positive(n.tail_threshold, "numerics.tail_threshold");
    positive(n.q_floor, "numerics.q_floor");
    if (n.fft_threads < 1) p.push_back("numerics.fft_threads: must be >= 1");
    if (n.E_max > 0.0 && n.E_step > 0.0 && n.E_max / n.E_step > 1e7)
        p.push_back("numerics.E_step: more than 1e7 energy points");
    {
        const bool physical = m.m_Y > 0.0 && n.resolved_energy > 0.0 && m.z0 > 0.0;
        const double center = physical ? m.z0 : 0.0;
        const double k = physical ? std::sqrt(2.0 * m.m_Y * n.resolved_energy) : 0.0;
        try {
            n.grid.validate(center, k);
        } catch (const std::invalid_argument& e) {
            std::istringstream lines(e.what());
            std::string line;
            std::getline(lines, line);
            while (std::getline(lines, line)) p.push_back("numerics: " + trim(line));
        }
    }

    if (c.sweep.m_X.empty()) {
        positive(c.sweep.m_X_min, "sweep.m_X_min");
        positive(c.sweep.m_X_max, "sweep.m_X_max");
        if (c.sweep.count < 1) p.push_back("sweep.count: must be >= 1");
    } else {
        for (double x : c.sweep.m_X)
            if (!(x > 0.0)) p.push_back("sweep.m_X: every mass must be positive, got " + format_double(x));
    }
    if (c.threads < 1) p.push_back("run.threads: must be >= 1");
    if (c.snapshot_stride < 1) p.push_back("run.snapshot_stride: must be >= 1");
    for (double t : c.snapshot_times)
        if (!(t >= 0.0)) p.push_back("run.snapshot_times: times must be >= 0");
    if (c.output_dir.empty()) p.push_back("run.output_dir: must not be empty");
    return p;
}

void validate(const RunConfig& config) {
    if (auto p = validation_errors(config); !p.empty()) throw ConfigError(std::move(p));
}

std::string manifest_text(const RunConfig& config) {
    std::string out;
    for (const auto& f : fields()) out += f.key + " = " + f.get(config) + "\n";
    return out;
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::Single: return "single";
        case Mode::Sweep: return "sweep";
        case Mode::Convergence: return "convergence";
        case Mode::Q0Crosscheck: return "q0-crosscheck";
    }
    return "single";
}

}  // namespace zeno
