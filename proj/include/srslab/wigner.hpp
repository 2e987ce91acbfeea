#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>

#include "srslab/errors.hpp"
#include "srslab/halfint.hpp"

// Wigner 3-j and 6-j symbols evaluated from the exact Racah finite sums.
// Intermediates are exact rationals (boost cpp_int / cpp_rational); the only
// floating-point step is the final square root. Intended domain j <= 15/2.
namespace srslab::wigner {

namespace detail {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Triangle coefficient Delta(a,b,c)^2 as an exact rational; arguments are
// twice-values. Returns 0 if the triad violates the triangle inequality or
// does not close to an integer sum.
inline BigRat triangle_sq(int ta, int tb, int tc) {
    if ((ta + tb + tc) % 2 != 0) return 0;
    const int x = (ta + tb - tc) / 2;
    const int y = (ta - tb + tc) / 2;
    const int z = (-ta + tb + tc) / 2;
    if (x < 0 || y < 0 || z < 0) return 0;
    return BigRat(factorial(x) * factorial(y) * factorial(z),
                  factorial((ta + tb + tc) / 2 + 1));
}

inline double rat_sqrt(const BigRat& r) {
    // r >= 0; magnitudes here are far from double overflow after the ratio.
    return std::sqrt(r.convert_to<double>());
}

inline double wigner3j_impl(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
    if (tm1 + tm2 + tm3 != 0) return 0.0;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return 0.0;
    // j+m must be integral for each column.
    if ((tj1 + tm1) % 2 || (tj2 + tm2) % 2 || (tj3 + tm3) % 2) return 0.0;
    const BigRat tri = triangle_sq(tj1, tj2, tj3);
    if (tri == 0) return 0.0;

    const int a1 = (tj1 + tj2 - tj3) / 2;
    const int a2 = (tj1 - tm1) / 2;
    const int a3 = (tj2 + tm2) / 2;
    const int b1 = (tj3 - tj2 + tm1) / 2;
    const int b2 = (tj3 - tj1 - tm2) / 2;
    const int kmin = std::max({0, -b1, -b2});
    const int kmax = std::min({a1, a2, a3});
    if (kmin > kmax) return 0.0;

    BigRat sum = 0;
    for (int k = kmin; k <= kmax; ++k) {
        BigInt den = factorial(k) * factorial(a1 - k) * factorial(a2 - k) *
                     factorial(a3 - k) * factorial(b1 + k) * factorial(b2 + k);
        BigRat term(1, den);
        if (k % 2) term = -term;
        sum += term;
    }
    if (sum == 0) return 0.0;

    BigRat pref = tri;
    pref *= factorial((tj1 + tm1) / 2);
    pref *= factorial((tj1 - tm1) / 2);
    pref *= factorial((tj2 + tm2) / 2);
    pref *= factorial((tj2 - tm2) / 2);
    pref *= factorial((tj3 + tm3) / 2);
    pref *= factorial((tj3 - tm3) / 2);

    double mag = rat_sqrt(sum * sum * pref);
    int phase = ((tj1 - tj2 - tm3) / 2) % 2;
    double sign = (sum < 0) ? -1.0 : 1.0;
    if (phase) sign = -sign;
    return sign * mag;
}

inline double wigner6j_impl(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6) {
    const BigRat t1 = triangle_sq(tj1, tj2, tj3);
    const BigRat t2 = triangle_sq(tj1, tj5, tj6);
    const BigRat t3 = triangle_sq(tj4, tj2, tj6);
    const BigRat t4 = triangle_sq(tj4, tj5, tj3);
    if (t1 == 0 || t2 == 0 || t3 == 0 || t4 == 0) return 0.0;

    const int a1 = (tj1 + tj2 + tj3) / 2;
    const int a2 = (tj1 + tj5 + tj6) / 2;
    const int a3 = (tj4 + tj2 + tj6) / 2;
    const int a4 = (tj4 + tj5 + tj3) / 2;
    const int b1 = (tj1 + tj2 + tj4 + tj5) / 2;
    const int b2 = (tj2 + tj3 + tj5 + tj6) / 2;
    const int b3 = (tj3 + tj1 + tj6 + tj4) / 2;
    const int kmin = std::max({a1, a2, a3, a4});
    const int kmax = std::min({b1, b2, b3});
    if (kmin > kmax) return 0.0;

    BigRat sum = 0;
    for (int k = kmin; k <= kmax; ++k) {
        BigInt den = factorial(k - a1) * factorial(k - a2) * factorial(k - a3) *
                     factorial(k - a4) * factorial(b1 - k) * factorial(b2 - k) *
                     factorial(b3 - k);
        BigRat term(factorial(k + 1), den);
        if (k % 2) term = -term;
        sum += term;
    }
    if (sum == 0) return 0.0;

    double mag = rat_sqrt(sum * sum * t1 * t2 * t3 * t4);
    return (sum < 0) ? -mag : mag;
}

} // namespace detail

inline double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3,
                       HalfInt m1, HalfInt m2, HalfInt m3) {
    if (j1.twice() < 0 || j2.twice() < 0 || j3.twice() < 0)
        throw DomainError("wigner3j: negative j");
    const std::array<int, 6> key{j1.twice(), j2.twice(), j3.twice(),
                                 m1.twice(), m2.twice(), m3.twice()};
    thread_local std::map<std::array<int, 6>, double> cache;
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double v = detail::wigner3j_impl(key[0], key[1], key[2], key[3], key[4], key[5]);
    cache.emplace(key, v);
    return v;
}

inline double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3,
                       HalfInt j4, HalfInt j5, HalfInt j6) {
    if (j1.twice() < 0 || j2.twice() < 0 || j3.twice() < 0 ||
        j4.twice() < 0 || j5.twice() < 0 || j6.twice() < 0)
        throw DomainError("wigner6j: negative j");
    const std::array<int, 6> key{j1.twice(), j2.twice(), j3.twice(),
                                 j4.twice(), j5.twice(), j6.twice()};
    thread_local std::map<std::array<int, 6>, double> cache;
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double v = detail::wigner6j_impl(key[0], key[1], key[2], key[3], key[4], key[5]);
    cache.emplace(key, v);
    return v;
}

} // namespace srslab::wigner
