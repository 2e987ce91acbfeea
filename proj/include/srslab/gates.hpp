#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "srslab/raman.hpp"
#include "srslab/scattering.hpp"

// Scattering-limited gate-error figures: single-qubit pi-pulse scatter
// probability, two-qubit scaling through the Lamb-Dicke parameter, and the
// search for the manifold pair with the lowest error.
namespace srslab {

inline double lamb_dicke(double mass_amu, double motional_omega, double delta_k) {
    using namespace constants;
    if (mass_amu <= 0 || motional_omega <= 0 || delta_k <= 0)
        throw DomainError("lamb_dicke: all inputs must be positive");
    return delta_k * std::sqrt(hbar / (2.0 * mass_amu * amu_kg * motional_omega));
}

// fig4: scatter probability out of q0 into S1/2 or D3/2 from the first
//       drive alone, over one pi-pulse.
// full: mean over both qubit states of the scatter rate from both drives,
//       including scatter within the qubit manifold except Rayleigh back
//       to the same initial state, times the pi-time.
enum class ErrorVariant { fig4, full };

namespace detail {

inline double full_rate(const SpeciesData& species, const HyperfineState& q,
                        const LaserDrive& d1, const LaserDrive& d2,
                        const std::vector<std::string>& intermediates) {
    double g = 0.0;
    for (const LaserDrive* d : {&d1, &d2}) {
        g += total_rate(species, q, *d, "S1/2+D3/2", intermediates);
        g += total_rate(species, q, *d, "D5/2-non-Rayleigh", intermediates);
    }
    return g;
}

} // namespace detail

inline double single_qubit_error(const SpeciesData& species, const HyperfineState& q0,
                                 const HyperfineState& q1, const LaserDrive& drive1,
                                 const LaserDrive& drive2,
                                 const std::vector<std::string>& intermediates,
                                 ErrorVariant variant) {
    const double rabi = raman_rabi(species, q0, q1, drive1, drive2, intermediates);
    const double tau = pi_time(rabi);
    if (variant == ErrorVariant::fig4)
        return total_rate(species, q0, drive1, "S1/2+D3/2", intermediates) * tau;
    const double g0 = detail::full_rate(species, q0, drive1, drive2, intermediates);
    const double g1 = detail::full_rate(species, q1, drive1, drive2, intermediates);
    return 0.5 * (g0 + g1) * tau;
}

inline double single_qubit_error(const SpeciesData& species, const HyperfineState& q0,
                                 const HyperfineState& q1, const LaserDrive& drive1,
                                 const LaserDrive& drive2, ErrorVariant variant) {
    return single_qubit_error(species, q0, q1, drive1, drive2,
                              default_intermediates(species), variant);
}

inline double two_qubit_error(double single_qubit_full_error, double eta) {
    if (!(eta > 0 && eta < 1)) throw DomainError("two_qubit_error: eta outside (0,1)");
    return 4.0 / eta * single_qubit_full_error;
}

struct BestQubit {
    HyperfineState q0, q1;
    double error = 0.0;     // full-variant single-qubit error
    double rabi = 0.0;      // rad/s at the given field amplitudes
};

// Exhaustive search over distinct pairs with |delta m| <= 2 and a nonzero
// Raman coupling, minimizing the full-variant error. The returned q0 is the
// state with the larger scatter rate; exact ties break lexicographically
// by (F0, m0, F1, m1).
inline BestQubit best_qubit_search(const SpeciesData& species, const LaserDrive& drive1,
                                   const LaserDrive& drive2, const std::string& manifold,
                                   const std::vector<std::string>& intermediates) {
    const std::vector<HyperfineState> states = enumerate_hyperfine(species, manifold);
    std::vector<double> rate_of(states.size());
    for (size_t idx = 0; idx < states.size(); ++idx)
        rate_of[idx] = detail::full_rate(species, states[idx], drive1, drive2, intermediates);

    bool found = false;
    BestQubit best;
    for (size_t ia = 0; ia < states.size(); ++ia) {
        for (size_t ib = ia + 1; ib < states.size(); ++ib) {
            const HyperfineState& a = states[ia];
            const HyperfineState& b = states[ib];
            if (std::abs((a.mf - b.mf).twice()) > 4) continue;
            const double rabi = raman_rabi(species, a, b, drive1, drive2, intermediates);
            if (rabi <= 0) continue;
            const double ga = rate_of[ia];
            const double gb = rate_of[ib];
            const double err = 0.5 * (ga + gb) * pi_time(rabi);
            if (err <= 0) continue;

            HyperfineState q0 = a, q1 = b;
            if (gb > ga) { q0 = b; q1 = a; }

            auto key = [](const HyperfineState& x, const HyperfineState& y) {
                return std::tuple(x.f.twice(), x.mf.twice(), y.f.twice(), y.mf.twice());
            };
            bool better = !found || err < best.error ||
                          (err == best.error && key(q0, q1) < key(best.q0, best.q1));
            if (better) {
                best = {q0, q1, err, rabi};
                found = true;
            }
        }
    }
    if (!found) throw DomainError("best_qubit_search: no Raman-connectable pair in " + manifold);
    return best;
}

inline BestQubit best_qubit_search(const SpeciesData& species, const LaserDrive& drive1,
                                   const LaserDrive& drive2, const std::string& manifold) {
    return best_qubit_search(species, drive1, drive2, manifold,
                             default_intermediates(species));
}

struct SweepRow {
    double detuning = 0.0;      // rad/s from the reference transition
    double error_moore = 0.0;   // fig4-style pi-pulse scatter probability
    double error_ozeri = 0.0;
};

// fig4-style error of the given qubit pair at each detuning from the
// reference transition frequency, for both scattering models. The grid is
// sorted; duplicates are kept.
inline std::vector<SweepRow> detuning_sweep(const SpeciesData& species,
                                            const HyperfineState& q0, const HyperfineState& q1,
                                            const Polarization& pol1, const Polarization& pol2,
                                            double omega_reference, std::vector<double> detunings,
                                            double field,
                                            const std::vector<std::string>& intermediates,
                                            double resonance_floor = default_resonance_floor) {
    std::sort(detunings.begin(), detunings.end());
    std::vector<SweepRow> out;
    out.reserve(detunings.size());
    for (double det : detunings) {
        const double wl = omega_reference + det;
        if (wl <= 0) throw DomainError("detuning_sweep: nonpositive drive frequency");
        LaserDrive d1(wl, field, pol1);
        LaserDrive d2(wl, field, pol2);
        const double tau =
            pi_time(raman_rabi(species, q0, q1, d1, d2, intermediates, resonance_floor));
        SweepRow row;
        row.detuning = det;
        ScatteringReport moore = scattering_report(species, q0, d1, "S1/2+D3/2", intermediates,
                                                   RateModel::moore, resonance_floor);
        ScatteringReport ozeri = scattering_report(species, q0, d1, "S1/2+D3/2", intermediates,
                                                   RateModel::ozeri, resonance_floor);
        row.error_moore = moore.grand_total * tau;
        row.error_ozeri = ozeri.grand_total * tau;
        out.push_back(row);
    }
    return out;
}

} // namespace srslab
