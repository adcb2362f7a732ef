#include "zeno/packet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "zeno/quadrature.hpp"

namespace zeno {

namespace {

constexpr int kVertexPanels = 24;

std::vector<double> merged_breakpoints(const EmitterStates& states) {
    std::vector<double> cuts = states.y_bound.breakpoints();
    cuts.push_back(states.y_well.upper_edge());
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

double x_product(const EmitterStates& s, double u) {
    if (u >= s.x_box.width) return 0.0;
    return s.x_ground(u) * s.x_excited(u);
}

}  // namespace

EmitterStates make_emitter_states(const WellSpec& x_box, const WellSpec& y_well) {
    auto bound = solve_bound_states(y_well);
    if (bound.size() != 1)
        throw std::runtime_error("make_emitter_states: emitter well must bind exactly one state, found " +
                                 std::to_string(bound.size()));
    return {x_box, y_well, infinite_box_state(1, x_box), infinite_box_state(2, x_box), std::move(bound.front())};
}

EnergyGrid EnergyGrid::up_to(double e_max, int count) {
    if (!(e_max > 0.0) || count < 1) throw std::invalid_argument("EnergyGrid: need e_max > 0 and count >= 1");
    return {e_max / count, count};
}

std::vector<double> EnergyGrid::values() const {
    std::vector<double> out(count);
    for (int j = 0; j < count; ++j) out[j] = at(j);
    return out;
}

std::vector<double> matrix_elements(std::span<const double> energies, const EmitterStates& states, double v0) {
    const auto cuts = merged_breakpoints(states);
    const auto nodes = quad::composite_nodes(0.0, states.x_box.width, cuts, kVertexPanels);
    std::vector<double> kernel(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        kernel[i] = nodes[i].w * x_product(states, nodes[i].x) * states.y_bound(nodes[i].x);

    std::vector<double> out;
    out.reserve(energies.size());
    for (double e : energies) {
        if (!(e > 0.0)) throw std::invalid_argument("matrix_element_v: energy must be above threshold (E > 0)");
        const StationaryState cont = continuum_state(states.y_well, e);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += kernel[i] * cont(nodes[i].x);
        out.push_back(v0 * sum);
    }
    return out;
}

double matrix_element_v(double energy, const EmitterStates& states, double v0) {
    const double e[] = {energy};
    return matrix_elements(e, states, v0).front();
}

double delta_v0(const EmitterStates& states, double v0) {
    const auto cuts = merged_breakpoints(states);
    const double integral = quad::integrate(
        [&](double u) {
            const double xe = states.x_excited(u);
            const double y = states.y_bound(u);
            return xe * xe * y * y;
        },
        0.0, states.x_box.width, cuts, kVertexPanels);
    return v0 * integral;
}

double final_energy(double omega0, double E0_Y, double deltaV0) { return E0_Y + omega0 + deltaV0; }

DecayVertex make_vertex(const EmitterStates& states, double v0, const EnergyGrid& grid) {
    DecayVertex vertex;
    vertex.v0 = v0;
    vertex.grid = grid;
    const auto energies = grid.values();
    vertex.v_of_E = matrix_elements(energies, states, v0);
    vertex.M_of_E.resize(vertex.v_of_E.size());
    std::transform(vertex.v_of_E.begin(), vertex.v_of_E.end(), vertex.M_of_E.begin(),
                   [](double v) { return v * v; });
    vertex.deltaV0 = delta_v0(states, v0);
    vertex.omega0 = states.x_excited.energy() - states.x_ground.energy();
    vertex.E_fin = final_energy(vertex.omega0, states.y_bound.energy(), vertex.deltaV0);
    vertex.v_at_fin = vertex.E_fin > 0.0 ? matrix_element_v(vertex.E_fin, states, v0) : 0.0;
    return vertex;
}

double golden_rule_gamma0(const DecayVertex& vertex) {
    if (!(vertex.E_fin > 0.0)) return 0.0;
    return 2.0 * std::numbers::pi * vertex.v_at_fin * vertex.v_at_fin;
}

SourcePacket build_source_packet(const EmitterStates& states, std::span<const double> grid) {
    if (grid.size() < 3) throw std::invalid_argument("build_source_packet: grid too small");
    const double step = grid[1] - grid[0];
    if (grid.front() != 0.0 || !(step > 0.0))
        throw std::invalid_argument("build_source_packet: grid must be uniform and start at 0");

    std::vector<double> y0(grid.size()), xx(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        y0[k] = states.y_bound(grid[k]);
        xx[k] = x_product(states, grid[k]);
    }
    y0.back() = 0.0;

    double weight = 0.0, overlap = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        weight += y0[k] * y0[k];
        overlap += y0[k] * y0[k] * xx[k];
    }
    const double c = overlap / weight;

    std::vector<double> raw(grid.size());
    double norm2 = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        raw[k] = y0[k] * (xx[k] - c);
        norm2 += raw[k] * raw[k];
    }
    norm2 *= step;
    if (!(norm2 > 1e-24))
        throw DegeneratePacketError("build_source_packet: bracket X_g X_e - C vanishes on the grid");

    SourcePacket packet;
    packet.grid.assign(grid.begin(), grid.end());
    packet.norm_constant = 1.0 / std::sqrt(norm2);
    packet.projection_constant = c;
    packet.step = step;
    packet.amplitudes.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) packet.amplitudes[k] = packet.norm_constant * raw[k];
    return packet;
}

double packet_norm_constant(const EmitterStates& states) {
    const auto cuts = merged_breakpoints(states);
    const double c = quad::integrate(
        [&](double u) {
            const double y = states.y_bound(u);
            return y * y * x_product(states, u);
        },
        0.0, states.x_box.width, cuts, kVertexPanels);
    // |Y0 (XX - C)|^2 = Y0^2 XX^2 - 2 C Y0^2 XX + C^2 Y0^2, with |Y0| = 1
    const double xx2 = quad::integrate(
        [&](double u) {
            const double y = states.y_bound(u);
            const double p = x_product(states, u);
            return y * y * p * p;
        },
        0.0, states.x_box.width, cuts, kVertexPanels);
    const double norm2 = xx2 - 2.0 * c * c + c * c;
    if (!(norm2 > 0.0)) throw DegeneratePacketError("packet_norm_constant: packet vanishes");
    return 1.0 / std::sqrt(norm2);
}

std::vector<double> packet_spectrum(const EmitterStates& states, const EnergyGrid& grid) {
    const double n = packet_norm_constant(states);
    auto c = matrix_elements(grid.values(), states, 1.0);
    for (double& x : c) x *= n;
    return c;
}

std::complex<double> project(const SourcePacket& packet, std::span<const double> f) {
    if (f.size() != packet.amplitudes.size()) throw std::invalid_argument("project: size mismatch");
    std::complex<double> sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) sum += f[k] * packet.amplitudes[k];
    return sum * packet.step;
}

}  // namespace zeno
