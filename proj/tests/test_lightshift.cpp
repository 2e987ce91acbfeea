#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "srslab/lightshift.hpp"
#include "srslab/scattering.hpp"

using namespace srslab;
using Catch::Approx;
using testutil::ba137;

namespace {

const HyperfineState ket0{"5D5/2", HalfInt(1), HalfInt(0)};
const HyperfineState cal_d{"5D5/2", HalfInt(1), HalfInt(1)};
const HyperfineState cal_s{"6S1/2", HalfInt(1), HalfInt(-1)};

double nm_to_rad_s(double nm) {
    return constants::two_pi * constants::speed_of_light / (nm * 1e-9);
}

LaserDrive drive_674(double field = 1e5) {
    return LaserDrive(nm_to_rad_s(674.0), field,
                      Polarization(BeamGeometry{M_PI / 2, 0.045}));
}

} // namespace

TEST_CASE("zero field gives zero shift") {
    CHECK(stark_shift(ba137(), ket0, drive_674(0.0)) == 0.0);
}

TEST_CASE("single-intermediate toy system matches the closed form") {
    // two levels, I = 0, J = 0 ground and J = 1 excited, pi light:
    // delta = E^2 (e a0 d)^2 w0 / (4 hbar^2 (w0^2 - w^2))
    std::istringstream toy(
        "[meta]\nI 0\nmass_amu 100\n"
        "[levels]\nG 0 0 0 invcm\nX 1 1 20000 invcm\n"
        "[dipoles]\nG X 2.0 +1\n");
    const SpeciesData sp = load_species(toy, "toy");
    const double w0 = sp.level("X").energy;
    const double w = 0.7 * w0;
    const double E = 3e4, d = 2.0;
    const LaserDrive drv(w, E, Polarization({Complex(0), Complex(0), Complex(1)}));
    const double got = stark_shift(sp, {"G", HalfInt(0), HalfInt(0)}, drv, {"X"});
    using namespace constants;
    const double expect =
        E * E * ea0 * ea0 * d * d * w0 / (4.0 * hbar * hbar * (w0 * w0 - w * w));
    CHECK(got == Approx(expect).epsilon(1e-12));
    CHECK(got > 0.0);   // drive below resonance
}

TEST_CASE("frozen values at 674 nm") {
    const SpeciesData& sp = ba137();
    CHECK(stark_shift(sp, ket0, drive_674()) == Approx(3.026097756038e+04).epsilon(1e-9));
    const double ds = differential_stark(sp, cal_d, cal_s, drive_674());
    CHECK(ds == Approx(-5.604806257367e+04).epsilon(1e-9));
    // rate / differential-shift slope, the intensity-free quantity
    const double slope = total_rate(sp, ket0, drive_674(), "S1/2+D3/2") / ds;
    CHECK(slope == Approx(-1.213487968649e-06).epsilon(1e-9));
}

TEST_CASE("quadratic field scaling and antisymmetry") {
    const SpeciesData& sp = ba137();
    CHECK(stark_shift(sp, ket0, drive_674(2e5)) ==
          Approx(4.0 * stark_shift(sp, ket0, drive_674(1e5))).epsilon(1e-12));
    CHECK(differential_stark(sp, cal_d, cal_s, drive_674()) ==
          Approx(-differential_stark(sp, cal_s, cal_d, drive_674())).epsilon(1e-12));
    CHECK(differential_stark(sp, ket0, ket0, drive_674()) == 0.0);
}

TEST_CASE("slope is independent of field amplitude") {
    const SpeciesData& sp = ba137();
    auto slope = [&](double E) {
        return total_rate(sp, ket0, drive_674(E), "S1/2+D3/2") /
               differential_stark(sp, cal_d, cal_s, drive_674(E));
    };
    CHECK(slope(1e4) == Approx(slope(5e5)).epsilon(1e-10));
}

TEST_CASE("field calibration round trip") {
    const SpeciesData& sp = ba137();
    const double E_true = 7.3e4;
    const double measured = differential_stark(sp, cal_d, cal_s, drive_674(E_true));
    const double E_back = field_from_stark(sp, cal_d, cal_s, drive_674(), measured);
    CHECK(E_back == Approx(E_true).epsilon(1e-10));

    CHECK(field_from_stark(sp, cal_d, cal_s, drive_674(), 0.0) == 0.0);
    CHECK_THROWS_AS(field_from_stark(sp, cal_d, cal_s, drive_674(), -measured),
                    DomainError);
}

TEST_CASE("resonance floor in the shift denominators") {
    const SpeciesData& sp = ba137();
    const double w_res = sp.level("6P3/2").energy - sp.level("5D5/2").energy;
    const LaserDrive d(w_res + constants::two_pi * 0.3e9, 1e5,
                       Polarization(BeamGeometry{M_PI / 2, 0.045}));
    CHECK_THROWS_AS(stark_shift(sp, ket0, d), ResonanceError);
}
