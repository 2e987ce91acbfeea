#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "srslab/atomdata.hpp"
#include "srslab/constants.hpp"
#include "srslab/couplings.hpp"
#include "srslab/geometry.hpp"

// Spontaneous Raman scattering rates: the four-channel second-order model
// (lambda, V, and two ladder time orderings, each Heaviside-gated on the
// scattered-photon frequency) and the simplified lambda-only model with a
// constant scattered-photon frequency per final level.
namespace srslab {

struct LaserDrive {
    double omega = 0.0;       // rad/s
    double field = 0.0;       // V/m
    Polarization polarization;

    LaserDrive(double omega_, double field_, Polarization pol)
        : omega(omega_), field(field_), polarization(std::move(pol)) {
        if (omega <= 0) throw DomainError("laser drive: omega must be > 0");
        if (field < 0) throw DomainError("laser drive: field must be >= 0");
    }
};

// Rates from the two interference classes. `ladder` is zero unless the
// drive photon energy is below the i-to-f energy drop.
struct ChannelRates {
    double lambda_v = 0.0;    // 1/s
    double ladder = 0.0;      // 1/s

    double total() const { return lambda_v + ladder; }
};

inline constexpr double default_resonance_floor = constants::two_pi * 1e9;  // rad/s

// Orthonormal triad of emission polarization vectors; the default is the
// spherical basis. Any complex triad with sum_m e_m,i conj(e_m,j) = delta_ij
// gives the same rates.
using EmissionTriad = std::array<Vec3c, 3>;

inline EmissionTriad spherical_triad() {
    return {spherical_unit(-1), spherical_unit(0), spherical_unit(+1)};
}

inline std::vector<std::string> default_intermediates(const SpeciesData& species) {
    return species.dipole_connected_levels();
}

namespace detail {

inline void check_floor(double delta, double floor, const std::string& which) {
    if (std::abs(delta) < floor)
        throw ResonanceError("detuning " + which + " inside resonance floor (" +
                             std::to_string(delta / constants::two_pi / 1e9) + " GHz)");
}

} // namespace detail

inline ChannelRates srs_rate(const SpeciesData& species, const HyperfineState& i,
                             const HyperfineState& f, const LaserDrive& drive,
                             const std::vector<std::string>& intermediates,
                             const EmissionTriad& triad,
                             double resonance_floor = default_resonance_floor) {
    using namespace constants;
    validate_state(species, i);
    validate_state(species, f);

    const double wi = species.level(i.level).energy;
    const double wf = species.level(f.level).energy;
    const double wl = drive.omega;
    const double w_sc_lv = wl + wi - wf;
    const double w_sc_ladder = (wi - wf) - wl;

    const Vec3c& eps = drive.polarization.vec();
    const Vec3c eps_c = conj(eps);

    double sum_lv = 0.0;
    double sum_ladder = 0.0;
    for (const Vec3c& eq : triad) {
        Complex a_lv = 0.0;
        Complex a_ladder = 0.0;
        for (const std::string& lev : intermediates) {
            const double wk = species.level(lev).energy;
            const double d_lambda = wk - wi - wl;
            const double d_v = wk - wf + wl;
            const double d_l1 = wk - wi + wl;
            const double d_l2 = wk - wf - wl;
            detail::check_floor(d_lambda, resonance_floor, "lambda");
            detail::check_floor(d_v, resonance_floor, "V");
            detail::check_floor(d_l1, resonance_floor, "ladder-1");
            detail::check_floor(d_l2, resonance_floor, "ladder-2");
            for (const HyperfineState& k : enumerate_hyperfine(species, lev)) {
                const Complex fk_q = dipole_me_dot(species, f, k, eq);
                if (fk_q != 0.0) {
                    a_lv += fk_q * dipole_me_dot(species, k, i, eps) / d_lambda;
                    a_ladder += fk_q * dipole_me_dot(species, k, i, eps_c) / d_l1;
                }
                const Complex fk_l = dipole_me_dot(species, f, k, eps);
                const Complex fk_lc = dipole_me_dot(species, f, k, eps_c);
                if (fk_l != 0.0 || fk_lc != 0.0) {
                    const Complex ki_q = dipole_me_dot(species, k, i, eq);
                    a_lv += fk_l * ki_q / d_v;
                    a_ladder += fk_lc * ki_q / d_l2;
                }
            }
        }
        sum_lv += std::norm(a_lv);
        sum_ladder += std::norm(a_ladder);
    }

    const double pref = drive.field * drive.field /
                        (12.0 * pi * epsilon0 * hbar * hbar * hbar *
                         speed_of_light * speed_of_light * speed_of_light) *
                        ea0 * ea0 * ea0 * ea0;
    ChannelRates out;
    if (w_sc_lv > 0) out.lambda_v = pref * w_sc_lv * w_sc_lv * w_sc_lv * sum_lv;
    if (w_sc_ladder > 0) out.ladder = pref * w_sc_ladder * w_sc_ladder * w_sc_ladder * sum_ladder;
    return out;
}

inline ChannelRates srs_rate(const SpeciesData& species, const HyperfineState& i,
                             const HyperfineState& f, const LaserDrive& drive,
                             const std::vector<std::string>& intermediates,
                             double resonance_floor = default_resonance_floor) {
    return srs_rate(species, i, f, drive, intermediates, spherical_triad(), resonance_floor);
}

inline ChannelRates srs_rate(const SpeciesData& species, const HyperfineState& i,
                             const HyperfineState& f, const LaserDrive& drive) {
    return srs_rate(species, i, f, drive, default_intermediates(species));
}

// Lambda-channel-only rate with the scattered-photon frequency held at a
// constant per final level: the transition frequency from the final level
// to the highest-energy intermediate level. No Heaviside gate, no V or
// ladder terms.
inline double srs_rate_ozeri(const SpeciesData& species, const HyperfineState& i,
                             const HyperfineState& f, const LaserDrive& drive,
                             const std::vector<std::string>& intermediates,
                             double resonance_floor = default_resonance_floor) {
    using namespace constants;
    validate_state(species, i);
    validate_state(species, f);
    if (intermediates.empty()) return 0.0;

    const double wi = species.level(i.level).energy;
    const double wl = drive.omega;
    const Vec3c& eps = drive.polarization.vec();

    double w_ref = species.level(intermediates.front()).energy;
    for (const std::string& lev : intermediates)
        w_ref = std::max(w_ref, species.level(lev).energy);
    const double w_sc = w_ref - species.level(f.level).energy;

    double tot = 0.0;
    for (const Vec3c& eq : spherical_triad()) {
        Complex a = 0.0;
        for (const std::string& lev : intermediates) {
            const double d_lambda = species.level(lev).energy - wi - wl;
            detail::check_floor(d_lambda, resonance_floor, "lambda");
            for (const HyperfineState& k : enumerate_hyperfine(species, lev))
                a += dipole_me_dot(species, f, k, eq) *
                     dipole_me_dot(species, k, i, eps) / d_lambda;
        }
        tot += std::norm(a);
    }

    const double pref = drive.field * drive.field * w_sc * w_sc * w_sc /
                        (12.0 * pi * epsilon0 * hbar * hbar * hbar *
                         speed_of_light * speed_of_light * speed_of_light) *
                        ea0 * ea0 * ea0 * ea0;
    return pref * tot;
}

inline double srs_rate_ozeri(const SpeciesData& species, const HyperfineState& i,
                             const HyperfineState& f, const LaserDrive& drive) {
    return srs_rate_ozeri(species, i, f, drive, default_intermediates(species));
}

enum class RateModel { moore, ozeri };

struct ScatteringRow {
    HyperfineState final;
    ChannelRates rates;
};

struct ManifoldTotal {
    std::string level;
    double total = 0.0;
};

struct ScatteringReport {
    HyperfineState initial;
    std::vector<ScatteringRow> rows;
    std::vector<ManifoldTotal> manifold_totals;
    double grand_total = 0.0;
};

namespace detail {

inline bool label_has_suffix(const std::string& label, const std::string& suffix) {
    return label.size() >= suffix.size() &&
           label.compare(label.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace detail

// Final states named by a manifold selector:
//   "S1/2+D3/2"        all hyperfine states of the S1/2 and D3/2 levels
//   "D5/2-non-Rayleigh" all D5/2 states except the initial state
//   "all"              every state of every non-intermediate level (Rayleigh included)
inline std::vector<HyperfineState> select_finals(const SpeciesData& species,
                                                 const HyperfineState& initial,
                                                 const std::string& selector,
                                                 const std::vector<std::string>& intermediates) {
    std::vector<std::string> levels;
    bool drop_initial = false;
    if (selector == "S1/2+D3/2") {
        for (const auto& l : species.levels())
            if (detail::label_has_suffix(l.label, "S1/2") || detail::label_has_suffix(l.label, "D3/2"))
                levels.push_back(l.label);
    } else if (selector == "D5/2-non-Rayleigh") {
        for (const auto& l : species.levels())
            if (detail::label_has_suffix(l.label, "D5/2")) levels.push_back(l.label);
        drop_initial = true;
    } else if (selector == "all") {
        for (const auto& l : species.levels()) {
            bool is_intermediate = std::find(intermediates.begin(), intermediates.end(),
                                             l.label) != intermediates.end();
            if (!is_intermediate) levels.push_back(l.label);
        }
    } else {
        throw DomainError("unknown finals selector: " + selector);
    }

    std::vector<HyperfineState> out;
    for (const std::string& lev : levels)
        for (const HyperfineState& s : enumerate_hyperfine(species, lev))
            if (!(drop_initial && s == initial)) out.push_back(s);
    return out;
}

inline ScatteringReport scattering_report(const SpeciesData& species, const HyperfineState& i,
                                          const LaserDrive& drive, const std::string& selector,
                                          const std::vector<std::string>& intermediates,
                                          RateModel model = RateModel::moore,
                                          double resonance_floor = default_resonance_floor) {
    ScatteringReport rep;
    rep.initial = i;
    for (const HyperfineState& f : select_finals(species, i, selector, intermediates)) {
        ChannelRates r;
        if (model == RateModel::moore)
            r = srs_rate(species, i, f, drive, intermediates, spherical_triad(), resonance_floor);
        else
            r.lambda_v = srs_rate_ozeri(species, i, f, drive, intermediates, resonance_floor);
        rep.rows.push_back({f, r});

        auto it = std::find_if(rep.manifold_totals.begin(), rep.manifold_totals.end(),
                               [&](const ManifoldTotal& t) { return t.level == f.level; });
        if (it == rep.manifold_totals.end()) {
            rep.manifold_totals.push_back({f.level, r.total()});
        } else {
            it->total += r.total();
        }
        rep.grand_total += r.total();
    }
    return rep;
}

inline ScatteringReport scattering_report(const SpeciesData& species, const HyperfineState& i,
                                          const LaserDrive& drive, const std::string& selector) {
    return scattering_report(species, i, drive, selector, default_intermediates(species));
}

// Summed rate over the selected final states; the usual gate-error input.
inline double total_rate(const SpeciesData& species, const HyperfineState& i,
                         const LaserDrive& drive, const std::string& selector,
                         const std::vector<std::string>& intermediates,
                         RateModel model = RateModel::moore,
                         double resonance_floor = default_resonance_floor) {
    return scattering_report(species, i, drive, selector, intermediates, model, resonance_floor)
        .grand_total;
}

inline double total_rate(const SpeciesData& species, const HyperfineState& i,
                         const LaserDrive& drive, const std::string& selector = "S1/2+D3/2") {
    return total_rate(species, i, drive, selector, default_intermediates(species));
}

} // namespace srslab
