#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "zeno/analysis.hpp"
#include "zeno/quadrature.hpp"
#include "zeno/spline.hpp"

using namespace zeno;
using cplx = std::complex<double>;

namespace {

TimeSeries sample(double step, std::size_t count, const std::function<cplx(double)>& f) {
    TimeSeries s;
    s.step = step;
    for (std::size_t j = 0; j < count; ++j) s.values.push_back(f(step * j));
    return s;
}

double lorentzian(double E, double center, double lambda) {
    return lambda / (std::numbers::pi * (lambda * lambda + (E - center) * (E - center)));
}

SpectralFunction synthetic_delta(const EnergyWindow& w, const std::function<double(double)>& f, bool converged = true) {
    SpectralFunction d;
    d.window = w;
    d.converged = converged;
    for (std::size_t j = 0; j < w.count; ++j) d.density.push_back(f(w.at(j)));
    return d;
}

EmitterStates table_states() {
    return make_emitter_states(WellSpec::box(1.0, 0.6), WellSpec::wall_adjacent(1.0, 1.0, -5.552));
}

}  // namespace

TEST_CASE("D = q / q0 and truncation at the floor") {
    const auto q0 = sample(0.01, 100, [](double t) { return std::exp(cplx(-t, -3.0 * t)); });
    const auto same = ratio_D(q0, q0);
    CHECK_FALSE(same.truncated);
    for (const auto& v : same.D.values) CHECK(std::abs(v - 1.0) < 1e-15);

    const auto q = sample(0.01, 100, [](double t) { return std::exp(cplx(-2.0 * t, 0.0)); });
    const auto dropping = sample(0.01, 100, [](double t) { return cplx(std::exp(-20.0 * t), 0.0); });
    const auto r = ratio_D(q, dropping, 1e-6);
    CHECK(r.truncated);
    // exp(-20 t) = 1e-6 at t = 0.6908
    CHECK(r.truncation_time == doctest::Approx(0.70));
    CHECK(r.D.size() == 70);
    CHECK(std::isfinite(std::abs(r.D.values.back())));
    CHECK(r.D.values[0] == 1.0);

    const auto other = sample(0.02, 100, [](double) { return cplx(1.0); });
    CHECK_THROWS_AS(ratio_D(q, other), std::invalid_argument);
}

TEST_CASE("natural spline interpolates and integrates against exp(-iEt) exactly") {
    const auto s = sample(0.1, 31, [](double t) { return cplx(std::cos(t), std::sin(2.0 * t)); });
    const CubicSpline sp(s.step, s.values);
    for (std::size_t j = 0; j < s.size(); ++j) CHECK(std::abs(sp(s.time(j)) - s.values[j]) < 1e-14);
    // A natural spline reproduces straight lines.
    const auto line = sample(0.25, 9, [](double t) { return cplx(2.0 * t - 1.0, 0.5 * t); });
    const CubicSpline lsp(line.step, line.values);
    CHECK(std::abs(lsp(1.37) - cplx(2.0 * 1.37 - 1.0, 0.5 * 1.37)) < 1e-14);

    const std::vector<double> cuts = [&] {
        std::vector<double> c;
        for (std::size_t j = 1; j + 1 < s.size(); ++j) c.push_back(s.time(j));
        return c;
    }();
    for (double E : {0.0, 0.3, -7.0, 9.99, 10.01, 250.0}) {
        const double re = quad::integrate([&](double t) { return (sp(t) * std::polar(1.0, -E * t)).real(); }, 0.0,
                                          sp.t_max(), cuts, 8);
        const double im = quad::integrate([&](double t) { return (sp(t) * std::polar(1.0, -E * t)).imag(); }, 0.0,
                                          sp.t_max(), cuts, 8);
        CHECK(std::abs(sp.fourier_integral(E) - cplx(re, im)) < 1e-12);
    }
}

TEST_CASE("exponential moments match quadrature on both sides of the series switch") {
    const double h = 0.1;
    for (double E : {0.5, 9.999999, 10.000001, -10.000001, 80.0}) {
        const auto I = exponential_moments(E, h);
        for (int n = 0; n < 4; ++n) {
            const auto f = [&](double t, bool im) {
                const cplx v = std::pow(t, n) * std::polar(1.0, -E * t);
                return im ? v.imag() : v.real();
            };
            const cplx ref(quad::gauss16().integrate([&](double t) { return f(t, false); }, 0.0, h),
                           quad::gauss16().integrate([&](double t) { return f(t, true); }, 0.0, h));
            CHECK(std::abs(I[n] - ref) < 1e-13 * std::pow(h, n + 1));
        }
    }
    const auto zero = exponential_moments(0.0, h);
    for (int n = 0; n < 4; ++n) CHECK(zero[n].real() == doctest::Approx(std::pow(h, n + 1) / (n + 1)));
}

TEST_CASE("exponential D gives a Lorentzian") {
    const auto D = sample(0.005, 6001, [](double t) { return cplx(std::exp(-t), 0.0); });
    const auto delta = spreading_function(D, EnergyWindow{-20.0, 0.05, 801});
    double worst = 0.0;
    for (std::size_t j = 0; j < delta.density.size(); ++j)
        worst = std::max(worst, std::abs(delta.density[j] - lorentzian(delta.window.at(j), 0.0, 1.0)));
    CHECK(worst < 1e-3);
    CHECK(delta.converged);
}

TEST_CASE("a phase factor shifts the Lorentzian to -E1") {
    const double E1 = 7.0;
    const auto D = sample(0.005, 8001, [&](double t) { return std::exp(cplx(-0.5 * t, -E1 * t)); });
    const auto delta = spreading_function(D, EnergyWindow::symmetric(30.0, 0.01));
    std::size_t peak = 0;
    for (std::size_t j = 0; j < delta.density.size(); ++j)
        if (delta.density[j] > delta.density[peak]) peak = j;
    CHECK(delta.window.at(peak) == doctest::Approx(-E1).epsilon(1e-3));
    CHECK(delta.at(-E1) == doctest::Approx(lorentzian(-E1, -E1, 0.5)).epsilon(1e-2));
}

TEST_CASE("Delta is linear in D, real-even for real D, and has unit mass") {
    const auto a = sample(0.01, 2001, [](double t) { return std::exp(cplx(-2.0 * t, 3.0 * t)); });
    const auto b = sample(0.01, 2001, [](double t) { return cplx(std::exp(-t * t), 0.0); });
    TimeSeries sum = a;
    for (std::size_t j = 0; j < sum.size(); ++j) sum.values[j] = 0.3 * a.values[j] + 0.7 * b.values[j];
    const auto w = EnergyWindow::symmetric(100.0, 0.2);
    const auto da = spreading_function(a, w), db = spreading_function(b, w), ds = spreading_function(sum, w);
    for (std::size_t j = 0; j < w.count; ++j)
        CHECK(ds.density[j] == doctest::Approx(0.3 * da.density[j] + 0.7 * db.density[j]).epsilon(1e-12).scale(1e-3));
    for (std::size_t j = 0; j < w.count; ++j)
        CHECK(db.density[j] == doctest::Approx(db.density[w.count - 1 - j]).epsilon(1e-12).scale(1e-3));
    CHECK(db.mass == doctest::Approx(1.0).epsilon(0.02));
    CHECK(da.mass == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("slowly decaying D is flagged unconverged") {
    const auto D = sample(0.01, 101, [](double t) { return cplx(std::cos(3.0 * t), 0.0); });
    const auto delta = spreading_function(D, EnergyWindow::symmetric(50.0, 0.5));
    CHECK_FALSE(delta.converged);
    CHECK(delta.tail == doctest::Approx(std::abs(std::cos(3.0))));
}

TEST_CASE("default energy window") {
    const auto D = sample(1e-3, 1001, [](double t) { return cplx(std::exp(-100.0 * t), 0.0); });
    const auto w = default_delta_window(D);
    CHECK(w.step == doctest::Approx(0.5));
    CHECK(-w.first >= std::numbers::pi / (2.0 * 1e-3));
    CHECK(w.last() == doctest::Approx(-w.first));
    const auto slow = sample(0.1, 101, [](double t) { return cplx(std::exp(-2.0 * t), 0.0); });
    const auto ws = default_delta_window(slow);
    CHECK(ws.step == doctest::Approx(std::numbers::pi / 40.0));
    CHECK(-ws.first >= 50.0);
}

TEST_CASE("analytic q0 from the packet spectrum") {
    const auto s = table_states();
    const EnergyGrid grid = EnergyGrid::up_to(2000.0, 40000);
    const auto c = packet_spectrum(s, grid);
    const auto q0 = analytic_q0(c, grid, -1.0, 0.01, 50);
    CHECK(std::abs(q0.values[0] - 1.0) < 2e-3);
    const auto shifted = analytic_q0(c, grid, -3.0, 0.01, 50);
    for (std::size_t j = 0; j < q0.size(); ++j)
        CHECK(std::abs(q0.values[j]) == doctest::Approx(std::abs(shifted.values[j])).epsilon(1e-12));
    for (const auto& v : q0.values) CHECK(std::abs(v) < 1.0 + 2e-3);

    const EnergyGrid short_grid = EnergyGrid::up_to(100.0, 2000);
    CHECK_THROWS_AS(analytic_q0(packet_spectrum(s, short_grid), short_grid, -1.0, 0.01, 5), SpectralMassError);
    CHECK_THROWS_AS(analytic_q0(c, short_grid, -1.0, 0.01, 5), std::invalid_argument);
}

TEST_CASE("Gamma: delta limit, disjoint support, and error cases") {
    const EnergyGrid grid = EnergyGrid::up_to(200.0, 200000);
    std::vector<double> M(grid.count);
    for (int j = 0; j < grid.count; ++j) M[j] = 0.01 + 0.001 * std::sin(0.05 * grid.at(j));
    const double E_fin = 60.0;
    const double gamma0 = 2.0 * std::numbers::pi * (0.01 + 0.001 * std::sin(0.05 * E_fin));

    double previous = 1e9;
    for (double lambda : {0.5, 0.1, 0.02}) {
        const auto d = synthetic_delta(EnergyWindow::symmetric(300.0, 0.001), [&](double E) {
            return lorentzian(E, 0.0, lambda);
        });
        const double err = std::abs(gamma_perturbed(d, grid, M, E_fin) - gamma0);
        CHECK(err < previous);
        previous = err;
    }
    CHECK(previous / gamma0 < 1e-3);

    const auto left = synthetic_delta(EnergyWindow::symmetric(300.0, 0.5), [&](double E) {
        return E < -E_fin - 5.0 ? std::exp(-(E + 150.0) * (E + 150.0) / 200.0) / std::sqrt(200.0 * std::numbers::pi)
                                : 0.0;
    });
    CHECK(gamma_perturbed(left, grid, M, E_fin) < 1e-12);

    auto unconverged = left;
    unconverged.converged = false;
    CHECK_THROWS_AS(gamma_perturbed(unconverged, grid, M, E_fin), UnconvergedDeltaError);
    std::vector<double> wrong(10, 1.0);
    CHECK_THROWS_AS(gamma_perturbed(left, grid, wrong, E_fin), std::invalid_argument);
}

TEST_CASE("sweep: omega0 ~ 1/m_X, v0 independence of the ratio, forbidden decays") {
    const auto s = table_states();
    const EnergyGrid grid = EnergyGrid::up_to(400.0, 8000);
    const auto v1 = make_vertex(s, 1.0, grid);
    const auto d = synthetic_delta(EnergyWindow::symmetric(400.0, 0.25), [&](double E) {
        return std::exp(-(E + 40.0) * (E + 40.0) / 800.0) / std::sqrt(800.0 * std::numbers::pi);
    });
    const std::vector<double> masses{0.3, 0.6, 1.0, 2.0, 4.0, 40.0};
    const auto r1 = sweep_final_energy(s, v1, d, masses);
    for (std::size_t i = 0; i < masses.size(); ++i) {
        CHECK(r1[i].omega0 * masses[i] == doctest::Approx(r1[0].omega0 * masses[0]).epsilon(1e-14));
        CHECK(r1[i].E_fin == doctest::Approx(s.y_bound.energy() + r1[i].omega0 + v1.deltaV0).epsilon(1e-14));
        CHECK(r1[i].gamma >= 0.0);
    }
    CHECK(r1.back().E_fin < 0.0);
    CHECK(r1.back().gamma0 == 0.0);
    // the measurement-broadened Delta still feeds decay below threshold
    CHECK(r1.back().gamma > 0.0);

    // same E_fin with twice the coupling: move m_X to compensate the doubled delta V0
    const auto v2 = make_vertex(s, 2.0, grid);
    std::vector<double> masses2;
    for (const auto& r : r1) {
        if (r.E_fin <= 0.0) continue;
        const double omega = r.E_fin - s.y_bound.energy() - v2.deltaV0;
        masses2.push_back(3.0 * std::numbers::pi * std::numbers::pi / (2.0 * 0.36 * omega));
    }
    const auto r2 = sweep_final_energy(s, v2, d, masses2);
    for (std::size_t i = 0; i < r2.size(); ++i) {
        CHECK(r2[i].E_fin == doctest::Approx(r1[i].E_fin).epsilon(1e-12));
        CHECK(r2[i].gamma0 == doctest::Approx(4.0 * r1[i].gamma0).epsilon(1e-9));
        CHECK(r2[i].ratio() == doctest::Approx(r1[i].ratio()).epsilon(1e-9));
    }

    auto flat = d;
    flat.converged = false;
    const auto r3 = sweep_final_energy(s, v1, flat, masses);
    for (const auto& r : r3) {
        CHECK_FALSE(r.delta_converged);
        CHECK(r.gamma == r.gamma0);
    }
    CHECK_THROWS_AS(sweep_final_energy(s, v1, d, std::vector<double>{-1.0}), std::invalid_argument);
}

TEST_CASE("Gamma approaches Gamma0 for a narrow Delta on the real vertex") {
    const auto s = table_states();
    const EnergyGrid grid = EnergyGrid::up_to(400.0, 8000);
    const auto v = make_vertex(s, 1.0, grid);
    const auto d = synthetic_delta(EnergyWindow::symmetric(400.0, 0.01), [&](double E) {
        return lorentzian(E, 0.0, 0.05);
    });
    const auto r = sweep_final_energy(s, v, d, std::vector<double>{0.5, 1.0});
    for (const auto& x : r) CHECK(x.ratio() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("survival curve passes P_sur through") {
    Evolution e;
    e.P_sur.step = 0.1;
    e.P_sur.values = {1.0, 0.9, 0.5};
    const auto s = survival_curve(e);
    CHECK(s.values == e.P_sur.values);
    Evolution empty;
    CHECK_THROWS_AS(survival_curve(empty), std::invalid_argument);
}
