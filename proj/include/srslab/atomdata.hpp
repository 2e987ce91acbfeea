#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "srslab/constants.hpp"
#include "srslab/errors.hpp"
#include "srslab/halfint.hpp"

// Immutable atomic structure data: fine-structure levels, energies, and
// reduced dipole matrix elements, loaded from the plain-text species file
// format described in the README.
namespace srslab {

struct FineLevel {
    std::string label;          // e.g. "6P3/2"
    int orbital_l = 0;
    HalfInt j;
    double energy = 0.0;        // rad/s relative to the species ground level
    std::optional<double> lifetime_s;
};

// Reduced matrix element <J_upper || r || J_lower> in units of e*a0.
// `value` is a magnitude; `sign` carries the relative sign convention.
struct ReducedDipole {
    std::string lower, upper;
    double value = 0.0;
    int sign = +1;

    double signed_value() const { return sign * value; }
};

struct HyperfineState {
    std::string level;
    HalfInt f;
    HalfInt mf;

    friend bool operator==(const HyperfineState&, const HyperfineState&) = default;
    std::string str() const { return level + ":" + f.str() + "," + mf.str(); }
};

class SpeciesData {
  public:
    SpeciesData(std::string name, HalfInt nuclear_spin, double mass_amu,
                std::vector<FineLevel> levels, std::vector<ReducedDipole> dipoles)
        : name_(std::move(name)), nuclear_spin_(nuclear_spin), mass_amu_(mass_amu),
          levels_(std::move(levels)), dipoles_(std::move(dipoles)) {
        validate();
    }

    const std::string& name() const { return name_; }
    HalfInt nuclear_spin() const { return nuclear_spin_; }
    double mass_amu() const { return mass_amu_; }
    const std::vector<FineLevel>& levels() const { return levels_; }
    const std::vector<ReducedDipole>& dipoles() const { return dipoles_; }

    const FineLevel& level(const std::string& label) const {
        for (const auto& l : levels_)
            if (l.label == label) return l;
        throw UnknownLevelError(label);
    }

    bool has_level(const std::string& label) const {
        return std::any_of(levels_.begin(), levels_.end(),
                           [&](const FineLevel& l) { return l.label == label; });
    }

    // Stored element connecting the two labels, in either order.
    const ReducedDipole* find_dipole(const std::string& a, const std::string& b) const {
        for (const auto& d : dipoles_)
            if ((d.lower == a && d.upper == b) || (d.lower == b && d.upper == a)) return &d;
        return nullptr;
    }

    // Signed <J_bra || r || J_ket> derived from the stored upper-to-lower
    // element via <J_l||r||J_u> = (-1)^(J_u-J_l) sqrt((2J_u+1)/(2J_l+1)) <J_u||r||J_l>.
    double reduced_dipole(const std::string& bra, const std::string& ket) const {
        const ReducedDipole* d = find_dipole(bra, ket);
        if (!d) return 0.0;
        if (d->upper == bra) return d->signed_value();
        const HalfInt ju = level(d->upper).j;
        const HalfInt jl = level(d->lower).j;
        const int phase_twice = (ju - jl).twice();  // integral for E1 pairs
        double phase = (phase_twice / 2) % 2 ? -1.0 : 1.0;
        return phase * std::sqrt((ju.twice() + 1.0) / (jl.twice() + 1.0)) * d->signed_value();
    }

    // Labels of every level that is E1-connected (by a stored dipole) to
    // some other level; used as the default intermediate set.
    std::vector<std::string> dipole_connected_levels() const {
        std::vector<std::string> out;
        for (const auto& l : levels_) {
            bool connected = std::any_of(dipoles_.begin(), dipoles_.end(), [&](const ReducedDipole& d) {
                return d.lower == l.label || d.upper == l.label;
            });
            // Intermediates of a Raman process are the upper levels only.
            bool is_upper = std::any_of(dipoles_.begin(), dipoles_.end(), [&](const ReducedDipole& d) {
                return d.upper == l.label;
            });
            if (connected && is_upper) out.push_back(l.label);
        }
        return out;
    }

  private:
    void validate() const {
        if (nuclear_spin_.twice() < 0) throw ValidationError("nuclear spin I must be >= 0");
        if (mass_amu_ <= 0) throw ValidationError("mass must be positive");
        if (levels_.empty()) throw ValidationError("no levels");

        std::set<std::string> seen;
        bool have_ground = false;
        for (const auto& l : levels_) {
            if (!seen.insert(l.label).second)
                throw ValidationError("duplicate level label: " + l.label);
            if (l.j.twice() < 0) throw ValidationError("level " + l.label + ": J must be >= 0");
            if (l.energy == 0.0) have_ground = true;
        }
        if (!have_ground) throw ValidationError("no ground level with energy 0");

        std::set<std::pair<std::string, std::string>> pairs;
        for (const auto& d : dipoles_) {
            const FineLevel& lo = level(d.lower);
            const FineLevel& up = level(d.upper);
            if (d.value <= 0)
                throw ValidationError("dipole " + d.lower + "-" + d.upper + ": |value| must be > 0");
            if (std::abs((up.j - lo.j).twice()) > 2)
                throw ValidationError("dipole " + d.lower + "-" + d.upper +
                                      ": E1 selection rule |dJ| <= 1 violated");
            if (std::abs(up.orbital_l - lo.orbital_l) != 1)
                throw ValidationError("dipole " + d.lower + "-" + d.upper +
                                      ": E1 selection rule dL = +-1 violated");
            auto key = std::minmax(d.lower, d.upper);
            if (!pairs.insert({key.first, key.second}).second)
                throw ValidationError("dipole pair appears twice: " + d.lower + "-" + d.upper);
        }
    }

    std::string name_;
    HalfInt nuclear_spin_;
    double mass_amu_ = 0.0;
    std::vector<FineLevel> levels_;
    std::vector<ReducedDipole> dipoles_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream iss(s);
    std::vector<std::string> out;
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

inline double energy_to_rad_s(double value, const std::string& unit, int line) {
    using namespace constants;
    if (unit == "invcm") return two_pi * speed_of_light * 100.0 * value;
    if (unit == "THz") return two_pi * 1e12 * value;
    if (unit == "rad_s") return value;
    if (unit == "nm") {
        if (value <= 0) throw ParseError(line, "nm energy must be positive");
        return two_pi * speed_of_light / (value * 1e-9);
    }
    throw UnitError(line, "unknown energy unit tag '" + unit + "'");
}

} // namespace detail

inline SpeciesData load_species(std::istream& in, const std::string& name_hint = "species") {
    std::string name = name_hint;
    std::optional<HalfInt> nuclear_spin;
    std::optional<double> mass_amu;
    std::vector<FineLevel> levels;
    std::vector<ReducedDipole> dipoles;

    enum class Section { None, Meta, Levels, Dipoles } section = Section::None;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto tokens = detail::split_ws(raw);
        if (tokens.empty()) continue;

        if (tokens[0] == "[meta]") { section = Section::Meta; continue; }
        if (tokens[0] == "[levels]") { section = Section::Levels; continue; }
        if (tokens[0] == "[dipoles]") { section = Section::Dipoles; continue; }
        if (tokens[0].front() == '[')
            throw ParseError(lineno, "unknown section " + tokens[0]);

        try {
            switch (section) {
                case Section::None:
                    throw ParseError(lineno, "record before any section header");
                case Section::Meta: {
                    if (tokens.size() != 2) throw ParseError(lineno, "meta records are 'key value'");
                    if (tokens[0] == "I") nuclear_spin = HalfInt::parse(tokens[1]);
                    else if (tokens[0] == "mass_amu") mass_amu = std::stod(tokens[1]);
                    else if (tokens[0] == "name") name = tokens[1];
                    else throw ParseError(lineno, "unknown meta key '" + tokens[0] + "'");
                    break;
                }
                case Section::Levels: {
                    if (tokens.size() < 5)
                        throw UnitError(lineno, "level record needs 'label L J energy unit'");
                    FineLevel l;
                    l.label = tokens[0];
                    l.orbital_l = std::stoi(tokens[1]);
                    l.j = HalfInt::parse(tokens[2]);
                    l.energy = detail::energy_to_rad_s(std::stod(tokens[3]), tokens[4], lineno);
                    if (tokens.size() >= 6) l.lifetime_s = std::stod(tokens[5]);
                    levels.push_back(std::move(l));
                    break;
                }
                case Section::Dipoles: {
                    if (tokens.size() < 3)
                        throw ParseError(lineno, "dipole record needs 'lower upper value_ea0 [sign]'");
                    ReducedDipole d;
                    d.lower = tokens[0];
                    d.upper = tokens[1];
                    d.value = std::stod(tokens[2]);
                    d.sign = tokens.size() >= 4 ? std::stoi(tokens[3]) : +1;
                    if (d.sign != 1 && d.sign != -1)
                        throw ParseError(lineno, "dipole sign must be +1 or -1");
                    dipoles.push_back(std::move(d));
                    break;
                }
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(lineno, e.what());
        }
    }

    if (!nuclear_spin) throw ValidationError("missing meta record 'I'");
    if (!mass_amu) throw ValidationError("missing meta record 'mass_amu'");
    return SpeciesData(name, *nuclear_spin, *mass_amu, std::move(levels), std::move(dipoles));
}

inline SpeciesData load_species(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open species file: " + path);
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    if (dot != std::string::npos) base.erase(dot);
    return load_species(in, base);
}

// All |level; F, mF> with |J-I| <= F <= J+I, sorted by (F, mF).
inline std::vector<HyperfineState> enumerate_hyperfine(const SpeciesData& species,
                                                       const std::string& label) {
    const FineLevel& lev = species.level(label);
    const HalfInt I = species.nuclear_spin();
    std::vector<HyperfineState> out;
    for (int tf = std::abs((lev.j - I).twice()); tf <= (lev.j + I).twice(); tf += 2)
        for (int tm = -tf; tm <= tf; tm += 2)
            out.push_back({label, HalfInt::from_twice(tf), HalfInt::from_twice(tm)});
    return out;
}

inline void validate_state(const SpeciesData& species, const HyperfineState& s) {
    const FineLevel& lev = species.level(s.level);
    const HalfInt I = species.nuclear_spin();
    if (s.f.twice() < std::abs((lev.j - I).twice()) || s.f.twice() > (lev.j + I).twice())
        throw ValidationError("state " + s.str() + ": F outside |J-I|..J+I");
    if (std::abs(s.mf.twice()) > s.f.twice() || (s.f - s.mf).twice() % 2 != 0)
        throw ValidationError("state " + s.str() + ": invalid mF");
}

// Signed (E_b - E_a)/hbar in rad/s.
inline double transition_frequency(const SpeciesData& species,
                                   const std::string& a, const std::string& b) {
    return species.level(b).energy - species.level(a).energy;
}

} // namespace srslab
