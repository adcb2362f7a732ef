#include "zeno/spline.hpp"

#include <cmath>
#include <stdexcept>

namespace zeno {

using cplx = std::complex<double>;

CubicSpline::CubicSpline(double step, std::span<const cplx> samples) : step_(step) {
    if (!(step > 0.0)) throw std::invalid_argument("CubicSpline: step must be positive");
    if (samples.size() < 2) throw std::invalid_argument("CubicSpline: need at least two samples");
    const std::size_t n = samples.size() - 1;
    const double h = step;

    // Second derivatives with natural ends, uniform spacing:
    // M_{j-1} + 4 M_j + M_{j+1} = 6 (y_{j+1} - 2 y_j + y_{j-1}) / h^2.
    std::vector<cplx> m(n + 1, 0.0);
    if (n >= 2) {
        std::vector<double> diag(n - 1, 4.0);
        std::vector<cplx> rhs(n - 1);
        for (std::size_t j = 1; j < n; ++j)
            rhs[j - 1] = 6.0 * (samples[j + 1] - 2.0 * samples[j] + samples[j - 1]) / (h * h);
        for (std::size_t i = 1; i < n - 1; ++i) {
            const double w = 1.0 / diag[i - 1];
            diag[i] -= w;
            rhs[i] -= w * rhs[i - 1];
        }
        m[n - 1] = rhs[n - 2] / diag[n - 2];
        for (std::size_t i = n - 2; i-- > 0;) m[i + 1] = (rhs[i] - m[i + 2]) / diag[i];
    }

    pieces_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        Piece& p = pieces_[j];
        p.a = samples[j];
        p.b = (samples[j + 1] - samples[j]) / h - h * (2.0 * m[j] + m[j + 1]) / 6.0;
        p.c = 0.5 * m[j];
        p.d = (m[j + 1] - m[j]) / (6.0 * h);
    }
}

cplx CubicSpline::operator()(double t) const {
    if (t < 0.0 || t > t_max()) throw std::out_of_range("CubicSpline: t outside the sampled range");
    std::size_t j = static_cast<std::size_t>(t / step_);
    if (j >= pieces_.size()) j = pieces_.size() - 1;
    const double tau = t - step_ * static_cast<double>(j);
    const Piece& p = pieces_[j];
    return p.a + tau * (p.b + tau * (p.c + tau * p.d));
}

std::array<cplx, 4> exponential_moments(double energy, double h) {
    std::array<cplx, 4> out{};
    const cplx z(0.0, -energy);
    const double x = std::abs(energy * h);
    if (x < 1.0) {
        // Sum_k (z h)^k / k! * h^{n+1} / (n + k + 1)
        for (int n = 0; n < 4; ++n) {
            cplx term = 1.0;
            cplx sum = 0.0;
            for (int k = 0; k < 40; ++k) {
                sum += term / static_cast<double>(n + k + 1);
                term *= z * h / static_cast<double>(k + 1);
                if (std::abs(term) < 1e-18) break;
            }
            out[n] = sum * std::pow(h, n + 1);
        }
        return out;
    }
    const cplx e = std::exp(z * h);
    out[0] = (e - 1.0) / z;
    double hn = 1.0;
    for (int n = 1; n < 4; ++n) {
        hn *= h;
        out[n] = (hn * e - static_cast<double>(n) * out[n - 1]) / z;
    }
    return out;
}

cplx CubicSpline::fourier_integral(double energy) const {
    const auto I = exponential_moments(energy, step_);
    cplx sum = 0.0;
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
        const Piece& p = pieces_[j];
        const cplx local = p.a * I[0] + p.b * I[1] + p.c * I[2] + p.d * I[3];
        sum += std::polar(1.0, -energy * step_ * static_cast<double>(j)) * local;
    }
    return sum;
}

}  // namespace zeno
