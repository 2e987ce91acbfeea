#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "srslab/scattering.hpp"

// AC Stark shifts of hyperfine states, differential shifts between state
// pairs, and field-amplitude calibration from a measured differential shift.
namespace srslab {

// delta_i = (E^2/4 hbar^2) sum_k w_ik |<i| r.eps |k>|^2 / (w_ik^2 - w_l^2),
// summed over hyperfine states of the intermediate levels. Counter-rotating
// term kept. Positive when every w_ik exceeds the drive frequency.
inline double stark_shift(const SpeciesData& species, const HyperfineState& state,
                          const LaserDrive& drive,
                          const std::vector<std::string>& intermediates,
                          double resonance_floor = default_resonance_floor) {
    using namespace constants;
    validate_state(species, state);
    const double ws = species.level(state.level).energy;
    const double wl = drive.omega;
    const Vec3c& eps = drive.polarization.vec();

    double tot = 0.0;
    for (const std::string& lev : intermediates) {
        const double wik = species.level(lev).energy - ws;
        detail::check_floor(wik - wl, resonance_floor, "stark co-rotating");
        detail::check_floor(wik + wl, resonance_floor, "stark counter-rotating");
        for (const HyperfineState& k : enumerate_hyperfine(species, lev))
            tot += wik * std::norm(dipole_me_dot(species, state, k, eps)) /
                   (wik * wik - wl * wl);
    }
    return drive.field * drive.field * ea0 * ea0 / (4.0 * hbar * hbar) * tot;
}

inline double stark_shift(const SpeciesData& species, const HyperfineState& state,
                          const LaserDrive& drive) {
    return stark_shift(species, state, drive, default_intermediates(species));
}

inline double differential_stark(const SpeciesData& species, const HyperfineState& d,
                                 const HyperfineState& s, const LaserDrive& drive,
                                 const std::vector<std::string>& intermediates,
                                 double resonance_floor = default_resonance_floor) {
    return stark_shift(species, d, drive, intermediates, resonance_floor) -
           stark_shift(species, s, drive, intermediates, resonance_floor);
}

inline double differential_stark(const SpeciesData& species, const HyperfineState& d,
                                 const HyperfineState& s, const LaserDrive& drive) {
    return differential_stark(species, d, s, drive, default_intermediates(species));
}

// Field amplitude that reproduces a measured differential shift, using the
// exact E^2 scaling of the shift. `drive.field` is ignored.
inline double field_from_stark(const SpeciesData& species, const HyperfineState& d,
                               const HyperfineState& s, const LaserDrive& drive,
                               double measured_shift,
                               const std::vector<std::string>& intermediates,
                               double resonance_floor = default_resonance_floor) {
    LaserDrive unit(drive.omega, 1.0, drive.polarization);
    const double per_unit = differential_stark(species, d, s, unit, intermediates, resonance_floor);
    if (per_unit == 0.0)
        throw DomainError("field_from_stark: geometry has zero differential-shift sensitivity");
    if (measured_shift == 0.0) return 0.0;
    if ((measured_shift > 0) != (per_unit > 0))
        throw DomainError("field_from_stark: measured shift sign disagrees with prediction");
    return std::sqrt(measured_shift / per_unit);
}

inline double field_from_stark(const SpeciesData& species, const HyperfineState& d,
                               const HyperfineState& s, const LaserDrive& drive,
                               double measured_shift) {
    return field_from_stark(species, d, s, drive, measured_shift,
                            default_intermediates(species));
}

} // namespace srslab
