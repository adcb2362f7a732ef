#pragma once

#include <complex>
#include <vector>

namespace zeno {

/// Complex samples on the uniform time grid t_j = j * step.
struct TimeSeries {
    double step = 0.0;
    std::vector<std::complex<double>> values;

    std::size_t size() const { return values.size(); }
    double time(std::size_t j) const { return step * static_cast<double>(j); }
    double t_max() const { return values.empty() ? 0.0 : time(values.size() - 1); }
    std::vector<double> times() const;

    /// Throws std::invalid_argument unless step > 0 and at least one sample.
    void validate() const;
};

}  // namespace zeno
