#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "srslab/wigner.hpp"

using srslab::HalfInt;
using srslab::wigner::wigner3j;
using srslab::wigner::wigner6j;
using Catch::Approx;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

// random valid half-integer triads up to j = 9/2
struct Triad {
    int tj1, tj2, tj3;
};

std::vector<Triad> random_triads(int count, std::mt19937& rng) {
    std::uniform_int_distribution<int> dj(0, 9);
    std::vector<Triad> out;
    while (static_cast<int>(out.size()) < count) {
        int a = dj(rng), b = dj(rng);
        std::uniform_int_distribution<int> dc(std::abs(a - b), std::min(a + b, 9));
        int c = dc(rng);
        if ((a + b + c) % 2 != 0) continue;   // lattice closure
        out.push_back({a, b, c});
    }
    return out;
}

} // namespace

TEST_CASE("half-integer parsing and arithmetic") {
    CHECK(HalfInt::parse("3").twice() == 6);
    CHECK(HalfInt::parse("-2").twice() == -4);
    CHECK(HalfInt::parse("5/2").twice() == 5);
    CHECK(HalfInt::parse("-1/2").twice() == -1);
    CHECK(HalfInt::parse("5/2").str() == "5/2");
    CHECK((HalfInt(2) + HalfInt::parse("1/2")).value() == 2.5);
    CHECK_THROWS_AS(HalfInt::parse("5/3"), srslab::DomainError);
    CHECK_THROWS_AS(HalfInt::parse("abc"), srslab::DomainError);
}

TEST_CASE("3j closed forms") {
    // (j j 0; m -m 0) = (-1)^(j-m)/sqrt(2j+1)
    CHECK(wigner3j(1, 1, 0, 1, -1, 0) == Approx(1.0 / std::sqrt(3.0)).margin(1e-14));
    CHECK(wigner3j(h(5), h(5), 0, h(3), h(-3), 0) ==
          Approx(-1.0 / std::sqrt(6.0)).margin(1e-14));
    CHECK(wigner3j(1, 1, 2, 0, 0, 0) == Approx(std::sqrt(2.0 / 15.0)).margin(1e-14));
    CHECK(wigner3j(1, 1, 3, 0, 0, 0) == 0.0);   // triangle violation
    CHECK(wigner3j(1, 1, 2, 1, 1, 0) == 0.0);   // m-sum violation
    CHECK(wigner3j(1, 1, 2, 0, 0, 1) == 0.0);
}

TEST_CASE("3j frozen reference values") {
    CHECK(wigner3j(3, h(3), h(9), 2, h(-3), h(-1)) ==
          Approx(0.069006555934235).margin(1e-13));
    CHECK(wigner3j(h(1), h(9), 4, h(-1), h(-7), 4) ==
          Approx(-0.105409255338946).margin(1e-13));
    CHECK(wigner3j(2, h(1), h(5), -2, h(-1), h(5)) ==
          Approx(-0.408248290463863).margin(1e-13));
}

TEST_CASE("6j closed forms and frozen values") {
    CHECK(wigner6j(1, 1, 1, 1, 1, 1) == Approx(1.0 / 6.0).margin(1e-14));
    // {j1 j2 j3; 0 j3 j2} = (-1)^(j1+j2+j3)/sqrt((2j2+1)(2j3+1))
    for (auto [tj1, tj2, tj3] : std::vector<std::array<int, 3>>{
             {2, 3, 5}, {4, 2, 4}, {1, 3, 4}, {0, 5, 5}}) {
        const double expect =
            (((tj1 + tj2 + tj3) / 2) % 2 ? -1.0 : 1.0) /
            std::sqrt((tj2 + 1.0) * (tj3 + 1.0));
        CHECK(wigner6j(h(tj1), h(tj2), h(tj3), 0, h(tj3), h(tj2)) ==
              Approx(expect).margin(1e-14));
    }
    CHECK(wigner6j(1, 1, 3, 1, 1, 1) == 0.0);   // {1,1,3} triangle fails
}

TEST_CASE("3j column-permutation symmetry up to j = 9/2") {
    std::mt19937 rng(42);
    int checked = 0;
    while (checked < 200) {
        auto [tj1, tj2, tj3] = random_triads(1, rng)[0];
        std::uniform_int_distribution<int> dm1(-tj1, tj1), dm2(-tj2, tj2);
        int tm1 = dm1(rng), tm2 = dm2(rng);
        if ((tm1 + tj1) % 2 || (tm2 + tj2) % 2) continue;
        int tm3 = -(tm1 + tm2);
        if (std::abs(tm3) > tj3) continue;
        const double v = wigner3j(h(tj1), h(tj2), h(tj3), h(tm1), h(tm2), h(tm3));
        const double even = wigner3j(h(tj2), h(tj3), h(tj1), h(tm2), h(tm3), h(tm1));
        const double odd = wigner3j(h(tj2), h(tj1), h(tj3), h(tm2), h(tm1), h(tm3));
        const double phase = ((tj1 + tj2 + tj3) / 2) % 2 ? -1.0 : 1.0;
        CHECK(even == Approx(v).margin(1e-12));
        CHECK(odd == Approx(phase * v).margin(1e-12));
        ++checked;
    }
}

TEST_CASE("3j orthogonality sums") {
    std::mt19937 rng(7);
    for (const Triad& tr : random_triads(40, rng)) {
        for (int tm3 = -tr.tj3; tm3 <= tr.tj3; tm3 += 2) {
            double sum = 0.0;
            for (int tm1 = -tr.tj1; tm1 <= tr.tj1; tm1 += 2)
                for (int tm2 = -tr.tj2; tm2 <= tr.tj2; tm2 += 2) {
                    if (tm1 + tm2 + tm3 != 0) continue;
                    const double v =
                        wigner3j(h(tr.tj1), h(tr.tj2), h(tr.tj3), h(tm1), h(tm2), h(tm3));
                    sum += (tr.tj3 + 1.0) * v * v;
                }
            // sum over m1,m2 of (2j3+1) * 3j^2 = 1 for every m3
            CHECK(sum == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(wigner3j(h(-2), 1, 1, 0, 0, 0), srslab::DomainError);
    CHECK_THROWS_AS(wigner6j(1, 1, 1, h(-1), 1, 1), srslab::DomainError);
    // m outside the j lattice gives 0, not an error
    CHECK(wigner3j(1, 1, 2, h(1), h(-1), 0) == 0.0);
}
