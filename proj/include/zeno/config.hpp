#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeno/propagator.hpp"

namespace zeno {

struct ModelParams {
    double a_X = 0.6;
    double m_X = 1.0;
    double m_Y = 1.0;
    double a_Y = 1.0;
    double U0_Y = -5.552;
    double z0 = 4.0;
    double a_Z = 0.5;  // half-width
    double m_Z = 0.9;
    double U0_Z = -2.21;
    double sigma_W = 2.548;
    double w0 = 789.2;
    double v0 = 1.0;
};

enum class Q0Source { Numeric, Analytic };

struct Numerics {
    GridSpec grid;
    bool project_ground = true;
    Splitting splitting = Splitting::Lie;
    double E_max = 2000.0;
    double E_step = 0.05;
    double resolved_energy = 200.0;  // k = sqrt(2 m_Y E) must satisfy k h < pi/4
    double tail_threshold = 0.02;
    double q_floor = 1e-6;
    Q0Source q0_source = Q0Source::Numeric;
    int fft_threads = 1;
};

struct SweepSpec {
    double m_X_min = 0.13;
    double m_X_max = 5.0;
    int count = 40;
    std::vector<double> m_X;  // explicit list; overrides the log-spaced range when not empty

    std::vector<double> values() const;
};

enum class Mode { Single, Sweep, Convergence, Q0Crosscheck };

struct RunConfig {
    std::string preset = "wide";
    ModelParams model;
    Numerics numerics;
    SweepSpec sweep;
    Mode mode = Mode::Single;
    std::string output_dir = "out";
    int threads = 1;
    std::vector<double> snapshot_times;  // |Psi|^2 dumps of the coupled run
    int snapshot_stride = 4;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Reference model parameters with the numerics used for that coupling range.
RunConfig preset_config(const std::string& name);

std::vector<std::string> preset_names();

/// key = value lines, '#' starts a comment. Throws ConfigError on syntax
/// errors with line numbers.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Expands the preset (from `preset`, else from a run.preset key in the
/// file, else "wide"), applies the file, then the overrides in order.
/// Unknown keys and invalid values are all collected into one ConfigError.
RunConfig load_config(const std::optional<std::string>& preset, const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides);

/// Applies `key=value` assignments to a config; throws ConfigError.
void apply_overrides(RunConfig& config, const std::map<std::string, std::string>& values);

/// Lists every violated constraint; empty when the config is valid.
std::vector<std::string> validation_errors(const RunConfig& config);
void validate(const RunConfig& config);

/// Every key with its resolved value, readable by load_config.
std::string manifest_text(const RunConfig& config);

std::string mode_name(Mode mode);

}  // namespace zeno
