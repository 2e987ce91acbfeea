#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "srslab/errors.hpp"

// Beam geometry and polarization vectors. The quantization axis (magnetic
// field) is +z; all angles are radians.
namespace srslab {

using Complex = std::complex<double>;
using Vec3c = std::array<Complex, 3>;
using Vec3 = std::array<double, 3>;

inline Complex dot_conj(const Vec3c& a, const Vec3c& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2];
}

inline double norm(const Vec3c& a) { return std::sqrt(std::real(dot_conj(a, a))); }

inline Vec3c conj(const Vec3c& a) {
    return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])};
}

// Primary beam: k in the x-z plane at angle phi to the quantization axis;
// polarization in the plane normal to k at angle gamma to the projected
// quantization axis.
struct BeamGeometry {
    double phi = 0.0;
    double gamma = 0.0;

    Vec3 k_hat() const { return {std::sin(phi), 0.0, std::cos(phi)}; }
    Vec3c polarization() const {
        return {Complex(std::cos(gamma) * std::cos(phi)),
                Complex(std::sin(gamma)),
                Complex(-std::cos(gamma) * std::sin(phi))};
    }
};

// Second Raman beam: k in the y-z plane. With phi + phi' = pi/2 the two
// wavevectors are perpendicular.
struct SecondBeamGeometry {
    double phi = 0.0;
    double gamma = 0.0;

    Vec3 k_hat() const { return {0.0, std::sin(phi), std::cos(phi)}; }
    Vec3c polarization() const {
        return {Complex(std::sin(gamma)),
                Complex(std::cos(gamma) * std::cos(phi)),
                Complex(-std::cos(gamma) * std::sin(phi))};
    }
};

// Unit complex polarization vector in the Cartesian lab frame.
class Polarization {
  public:
    explicit Polarization(const Vec3c& v) : v_(v) {
        if (std::abs(norm(v_) - 1.0) > 1e-12)
            throw DomainError("polarization vector is not unit norm");
    }
    Polarization(const BeamGeometry& g) : v_(g.polarization()) {}
    Polarization(const SecondBeamGeometry& g) : v_(g.polarization()) {}

    const Vec3c& vec() const { return v_; }

  private:
    Vec3c v_;
};

// Spherical components (eps_{-1}, eps_0, eps_{+1}) with
// eps_0 = p_z, eps_{+-1} = -+ (p_x +- i p_y)/sqrt(2).
struct SphericalComponents {
    Complex m1, zero, p1;

    Complex q(int qi) const {
        switch (qi) {
            case -1: return m1;
            case 0: return zero;
            case +1: return p1;
        }
        throw DomainError("spherical component q outside {-1,0,+1}");
    }
};

inline SphericalComponents spherical_components_unchecked(const Vec3c& p) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return {(p[0] - Complex(0, 1) * p[1]) * inv_sqrt2,
            p[2],
            -(p[0] + Complex(0, 1) * p[1]) * inv_sqrt2};
}

inline SphericalComponents spherical_components(const Polarization& p) {
    return spherical_components_unchecked(p.vec());
}

// Spherical basis vector e_q as a Cartesian complex vector.
inline Vec3c spherical_unit(int q) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (q) {
        case -1: return {Complex(inv_sqrt2), Complex(0, -inv_sqrt2), Complex(0)};
        case 0: return {Complex(0), Complex(0), Complex(1)};
        case +1: return {Complex(-inv_sqrt2), Complex(0, -inv_sqrt2), Complex(0)};
    }
    throw DomainError("spherical unit vector q outside {-1,0,+1}");
}

} // namespace srslab
