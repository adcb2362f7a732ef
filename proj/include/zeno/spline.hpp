#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace zeno {

/// Natural cubic spline through complex samples on t_j = j * step.
/// Piece j is s(t_j + tau) = a + b tau + c tau^2 + d tau^3 for tau in [0, step].
class CubicSpline {
public:
    struct Piece {
        std::complex<double> a, b, c, d;
    };

    CubicSpline(double step, std::span<const std::complex<double>> samples);

    double step() const { return step_; }
    double t_max() const { return step_ * static_cast<double>(pieces_.size()); }
    std::complex<double> operator()(double t) const;
    const std::vector<Piece>& pieces() const { return pieces_; }

    /// Exact integral of s(t) exp(-i E t) over [0, t_max].
    std::complex<double> fourier_integral(double energy) const;

private:
    double step_;
    std::vector<Piece> pieces_;
};

/// I_n = integral_0^h tau^n exp(-i E tau) dtau for n = 0..3.
std::array<std::complex<double>, 4> exponential_moments(double energy, double h);

}  // namespace zeno
