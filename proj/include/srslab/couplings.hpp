#pragma once

#include <cmath>
#include <complex>

#include "srslab/atomdata.hpp"
#include "srslab/geometry.hpp"
#include "srslab/wigner.hpp"

// Hyperfine-resolved dipole matrix elements (Wigner-Eckart, two-step
// F-level 3-j then J-to-F 6-j reduction) and the electric-quadrupole
// geometric factors used for polarization calibration.
namespace srslab {

// <F_b m_b | r_q | F_k m_k> in units of e*a0. Zero whenever a selection
// rule fails or no reduced element connects the two levels.
inline double dipole_me(const SpeciesData& species, const HyperfineState& bra,
                        const HyperfineState& ket, int q) {
    if (q < -1 || q > 1) throw DomainError("dipole_me: q outside {-1,0,+1}");
    if ((bra.mf - ket.mf).twice() != 2 * q) return 0.0;

    const double r = species.reduced_dipole(bra.level, ket.level);
    if (r == 0.0) return 0.0;

    const HalfInt jb = species.level(bra.level).j;
    const HalfInt jk = species.level(ket.level).j;
    const HalfInt I = species.nuclear_spin();
    const HalfInt one(1);

    const double six = wigner::wigner6j(jb, jk, one, ket.f, bra.f, I);
    if (six == 0.0) return 0.0;
    const double three = wigner::wigner3j(bra.f, one, ket.f, -bra.mf, HalfInt(q), ket.mf);
    if (three == 0.0) return 0.0;

    // phases (-1)^(F_k+J_b+1+I) and (-1)^(F_b-m_b); both exponents integral
    auto sign_of = [](HalfInt h) { return (h.twice() / 2) % 2 ? -1.0 : 1.0; };
    const double ph1 = sign_of(ket.f + jb + one + I);
    const double ph2 = sign_of(bra.f - bra.mf);

    const double mult = std::sqrt((ket.f.twice() + 1.0) * (bra.f.twice() + 1.0));
    return r * ph1 * mult * six * ph2 * three;
}

// <b| r . eps |k> for a Cartesian complex polarization vector, using
// r.eps = sum_q (-1)^q r_q eps_{-q}.
inline Complex dipole_me_dot(const SpeciesData& species, const HyperfineState& bra,
                             const HyperfineState& ket, const Vec3c& eps) {
    const SphericalComponents ec = spherical_components_unchecked(eps);
    Complex out = 0.0;
    for (int q = -1; q <= 1; ++q) {
        const double me = dipole_me(species, bra, ket, q);
        if (me == 0.0) continue;
        const double sgn = (q == 0) ? 1.0 : -1.0;  // (-1)^q
        out += sgn * me * ec.q(-q);
    }
    return out;
}

// Relative strengths of the Delta_m = 0, 1, 2 quadrupole couplings for a
// beam at angle phi to the quantization axis with polarization angle gamma.
struct QuadrupoleFactors {
    double g0 = 0.0, g1 = 0.0, g2 = 0.0;
};

inline QuadrupoleFactors quadrupole_geometric_factors(double phi, double gamma) {
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    const double inv_sqrt6 = 1.0 / std::sqrt(6.0);
    QuadrupoleFactors g;
    g.g0 = 0.5 * std::abs(cg * std::sin(2.0 * phi));
    g.g1 = inv_sqrt6 * std::abs(Complex(cg * std::cos(2.0 * phi), -sg * std::cos(phi)));
    g.g2 = inv_sqrt6 * std::abs(Complex(0.5 * cg * std::sin(2.0 * phi), -sg * std::sin(phi)));
    return g;
}

} // namespace srslab
