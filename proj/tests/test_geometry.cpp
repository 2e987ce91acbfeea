#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "srslab/geometry.hpp"

using namespace srslab;
using Catch::Approx;

namespace {

double dot_real(const Vec3& a, const Vec3c& b) {
    Complex s = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    return std::abs(s);
}

} // namespace

TEST_CASE("beam vectors are orthonormal for random angles") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ang(-3.2, 3.2);
    for (int n = 0; n < 1000; ++n) {
        const double phi = ang(rng), gamma = ang(rng);
        BeamGeometry b1{phi, gamma};
        SecondBeamGeometry b2{phi, gamma};
        for (int which = 0; which < 2; ++which) {
            const Vec3 k = which ? b2.k_hat() : b1.k_hat();
            const Vec3c e = which ? b2.polarization() : b1.polarization();
            CHECK(std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) ==
                  Approx(1.0).margin(1e-12));
            CHECK(norm(e) == Approx(1.0).margin(1e-12));
            CHECK(dot_real(k, e) == Approx(0.0).margin(1e-12));
        }
    }
}

TEST_CASE("perpendicular wavevectors at phi = phi' = pi/2") {
    // both beams in the equatorial plane: beam 1 along x, beam 2 along y
    BeamGeometry b1{M_PI / 2, 0.1};
    SecondBeamGeometry b2{M_PI / 2, 0.2};
    const Vec3 k1 = b1.k_hat(), k2 = b2.k_hat();
    CHECK(k1[0] == Approx(1.0).margin(1e-12));
    CHECK(k2[1] == Approx(1.0).margin(1e-12));
    CHECK(k1[0] * k2[0] + k1[1] * k2[1] + k1[2] * k2[2] == Approx(0.0).margin(1e-12));
}

TEST_CASE("spherical components") {
    const SphericalComponents pi_pol =
        spherical_components(Polarization({Complex(0), Complex(0), Complex(1)}));
    CHECK(pi_pol.m1 == Complex(0));
    CHECK(pi_pol.zero == Complex(1));
    CHECK(pi_pol.p1 == Complex(0));

    const SphericalComponents x_pol =
        spherical_components(Polarization({Complex(1), Complex(0), Complex(0)}));
    CHECK(std::abs(x_pol.m1 - 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(x_pol.zero) < 1e-14);
    CHECK(std::abs(x_pol.p1 + 1.0 / std::sqrt(2.0)) < 1e-14);

    CHECK_THROWS_AS(pi_pol.q(2), DomainError);
}

TEST_CASE("spherical-component norm preserved for random unit vectors") {
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    for (int n = 0; n < 200; ++n) {
        Vec3c v{Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng))};
        const double nv = norm(v);
        for (auto& c : v) c /= nv;
        const SphericalComponents sc = spherical_components(Polarization(v));
        CHECK(std::norm(sc.m1) + std::norm(sc.zero) + std::norm(sc.p1) ==
              Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("non-unit polarization rejected") {
    CHECK_THROWS_AS(Polarization({Complex(0.5), Complex(0), Complex(0)}), DomainError);
}

TEST_CASE("spherical unit triad is orthonormal under conjugate dot") {
    for (int q1 = -1; q1 <= 1; ++q1)
        for (int q2 = -1; q2 <= 1; ++q2) {
            const Complex d = dot_conj(spherical_unit(q1), spherical_unit(q2));
            CHECK(std::abs(d - (q1 == q2 ? 1.0 : 0.0)) < 1e-14);
        }
    CHECK_THROWS_AS(spherical_unit(5), DomainError);
}
