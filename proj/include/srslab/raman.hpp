#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "srslab/scattering.hpp"

// Two-photon stimulated Raman Rabi frequencies between hyperfine states.
namespace srslab {

// Omega = |(E E' (e a0)^2 / 4 hbar^2) sum_k [ <b| r.eps1* |k><k| r.eps2 |a> / d_lambda
//         + <b| r.eps1 |k><k| r.eps2* |a> / d_V ]|, with both detunings taken
// at drive1's frequency (the drives' frequency difference is negligible
// against the detunings).
inline double raman_rabi(const SpeciesData& species, const HyperfineState& a,
                         const HyperfineState& b, const LaserDrive& drive1,
                         const LaserDrive& drive2,
                         const std::vector<std::string>& intermediates,
                         double resonance_floor = default_resonance_floor) {
    using namespace constants;
    validate_state(species, a);
    validate_state(species, b);

    const double wa = species.level(a.level).energy;
    const double wb = species.level(b.level).energy;
    const double wl = drive1.omega;
    const Vec3c& e1 = drive1.polarization.vec();
    const Vec3c e1c = conj(e1);
    const Vec3c& e2 = drive2.polarization.vec();
    const Vec3c e2c = conj(e2);

    Complex sum = 0.0;
    for (const std::string& lev : intermediates) {
        const double wk = species.level(lev).energy;
        const double d_lambda = wk - wa - wl;
        const double d_v = wk - wb + wl;
        detail::check_floor(d_lambda, resonance_floor, "lambda");
        detail::check_floor(d_v, resonance_floor, "V");
        for (const HyperfineState& k : enumerate_hyperfine(species, lev)) {
            sum += dipole_me_dot(species, b, k, e1c) *
                   dipole_me_dot(species, k, a, e2) / d_lambda;
            sum += dipole_me_dot(species, b, k, e1) *
                   dipole_me_dot(species, k, a, e2c) / d_v;
        }
    }
    return std::abs(drive1.field * drive2.field * ea0 * ea0 / (4.0 * hbar * hbar) * sum);
}

inline double raman_rabi(const SpeciesData& species, const HyperfineState& a,
                         const HyperfineState& b, const LaserDrive& drive1,
                         const LaserDrive& drive2) {
    return raman_rabi(species, a, b, drive1, drive2, default_intermediates(species));
}

inline double pi_time(double rabi) {
    if (rabi <= 0) throw DomainError("pi_time: Rabi frequency must be > 0");
    return constants::pi / rabi;
}

} // namespace srslab
