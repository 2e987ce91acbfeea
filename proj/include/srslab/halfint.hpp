#pragma once

#include <compare>
#include <cstdlib>
#include <string>

#include "srslab/errors.hpp"

namespace srslab {

// Angular-momentum quantum number restricted to the half-integer lattice.
// Stored as twice the value so that arithmetic and comparisons stay exact.
class HalfInt {
  public:
    constexpr HalfInt() = default;
    constexpr HalfInt(int whole) : twice_(2 * whole) {}

    static constexpr HalfInt from_twice(int twice) {
        HalfInt h;
        h.twice_ = twice;
        return h;
    }

    // Accepts "3", "-2", "5/2", "-1/2".
    static HalfInt parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return HalfInt(std::stoi(s));
            if (s.substr(slash + 1) != "2")
                throw DomainError("half-integer denominator must be 2: " + s);
            return from_twice(std::stoi(s.substr(0, slash)));
        } catch (const std::invalid_argument&) {
            throw DomainError("not a half-integer: " + s);
        } catch (const std::out_of_range&) {
            throw DomainError("half-integer out of range: " + s);
        }
    }

    constexpr int twice() const { return twice_; }
    constexpr double value() const { return twice_ / 2.0; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }

    std::string str() const {
        if (is_integer()) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.twice_ + b.twice_); }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.twice_ - b.twice_); }
    constexpr HalfInt operator-() const { return from_twice(-twice_); }
    friend constexpr auto operator<=>(HalfInt, HalfInt) = default;

  private:
    int twice_ = 0;
};

inline HalfInt abs(HalfInt h) { return HalfInt::from_twice(std::abs(h.twice())); }

} // namespace srslab
