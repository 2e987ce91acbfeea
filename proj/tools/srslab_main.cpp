// srslab: scattering rates, Stark shifts, Raman Rabi frequencies, and
// scattering-limited gate errors for metastable trapped-ion qubits, plus the
// survival-curve simulation and fitting pipeline.
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "srslab/srslab.hpp"

namespace {

using namespace srslab;

constexpr int exit_usage = 2;
constexpr int exit_physics = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "LEVEL:F,m" with half-integers as fractions, e.g. 5D5/2:1,0 or 6S1/2:2,-1/2
HyperfineState parse_state(const std::string& s) {
    const auto colon = s.rfind(':');
    const auto comma = s.rfind(',');
    if (colon == std::string::npos || comma == std::string::npos || comma < colon)
        throw UsageError("bad state syntax (want LEVEL:F,m): " + s);
    HyperfineState st;
    st.level = s.substr(0, colon);
    st.f = HalfInt::parse(s.substr(colon + 1, comma - colon - 1));
    st.mf = HalfInt::parse(s.substr(comma + 1));
    return st;
}

// VALUE followed by a unit suffix: nm, THz, GHz, 2pi*kHz, 2pi*MHz, rad_s.
// An optional space or underscore may separate the two, e.g. "20 2pi*kHz".
double parse_frequency(const std::string& s) {
    size_t pos = 0;
    double value;
    try {
        value = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw UsageError("bad frequency: " + s);
    }
    std::string suffix = s.substr(pos);
    while (!suffix.empty() && (suffix.front() == ' ' || suffix.front() == '_'))
        suffix.erase(suffix.begin());
    if (suffix == "nm") {
        if (value <= 0) throw UsageError("wavelength must be positive: " + s);
        return constants::two_pi * constants::speed_of_light / (value * 1e-9);
    }
    if (suffix == "THz") return constants::two_pi * value * 1e12;
    if (suffix == "GHz") return constants::two_pi * value * 1e9;
    if (suffix == "2pi*kHz") return constants::two_pi * value * 1e3;
    if (suffix == "2pi*MHz") return constants::two_pi * value * 1e6;
    if (suffix == "rad_s" || suffix.empty()) return value;
    throw UsageError("unknown frequency suffix '" + suffix + "' in " + s);
}

std::string resolve_species_path(const std::string& arg) {
    if (arg.find('/') != std::string::npos || arg.ends_with(".species")) return arg;
    const char* dir = std::getenv("SRSLAB_DATA");
    std::string base = dir ? std::string(dir) : std::string("data");
    return base + "/" + arg + ".species";
}

std::string level_by_suffix(const SpeciesData& sp, const std::string& suffix) {
    for (const auto& l : sp.levels())
        if (l.label.size() >= suffix.size() &&
            l.label.compare(l.label.size() - suffix.size(), suffix.size(), suffix) == 0)
            return l.label;
    throw UsageError("species has no level matching *" + suffix);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw UsageError("cannot open output file: " + path);
    return file;
}

// Shared beam flags. The drive frequency comes either from --lambda or from
// --detuning relative to the D5/2-P3/2 transition.
struct BeamFlags {
    std::string lambda_str, detuning_str;
    double phi = constants::pi / 2;
    double gamma = 0.0;
    double gamma2 = 0.0;
    double field = 1e5;
    std::string stark_str;      // measured differential shift, alternative to --field

    void add_to(CLI::App* cmd, bool second_beam) {
        cmd->add_option("--lambda", lambda_str, "drive frequency (e.g. 674nm, 485.3THz)");
        cmd->add_option("--detuning", detuning_str,
                        "drive detuning from the D5/2-P3/2 transition (e.g. -2.5THz)");
        cmd->add_option("--phi", phi, "beam angle to the quantization axis, radians")
            ->capture_default_str();
        cmd->add_option("--gamma", gamma, "polarization angle of beam 1, radians")
            ->capture_default_str();
        if (second_beam)
            cmd->add_option("--gamma2", gamma2, "polarization angle of beam 2, radians")
                ->capture_default_str();
        cmd->add_option("--field", field, "field amplitude, V/m")->capture_default_str();
        cmd->add_option("--stark-shift", stark_str,
                        "calibrate the field amplitude from this measured differential "
                        "Stark shift, e.g. --stark-shift '20 2pi*kHz' (overrides --field)");
    }

    double omega(const SpeciesData& sp) const {
        if (!lambda_str.empty() && !detuning_str.empty())
            throw UsageError("give either --lambda or --detuning, not both");
        if (!lambda_str.empty()) return parse_frequency(lambda_str);
        if (!detuning_str.empty()) {
            const double ref = transition_frequency(sp, level_by_suffix(sp, "D5/2"),
                                                    level_by_suffix(sp, "P3/2"));
            return ref + parse_frequency(detuning_str);
        }
        throw UsageError("missing --lambda or --detuning");
    }

    double resolved_field(const SpeciesData& sp) const {
        if (stark_str.empty()) return field;
        const double shift = parse_frequency(stark_str);
        const HyperfineState d{level_by_suffix(sp, "D5/2"), HalfInt(1), HalfInt(1)};
        const HyperfineState s{level_by_suffix(sp, "S1/2"), HalfInt(1), HalfInt(-1)};
        LaserDrive probe(omega(sp), 1.0, Polarization(BeamGeometry{phi, gamma}));
        return field_from_stark(sp, d, s, probe, shift);
    }

    LaserDrive drive1(const SpeciesData& sp) const {
        return LaserDrive(omega(sp), resolved_field(sp),
                          Polarization(BeamGeometry{phi, gamma}));
    }
    LaserDrive drive2(const SpeciesData& sp) const {
        return LaserDrive(omega(sp), resolved_field(sp),
                          Polarization(SecondBeamGeometry{phi, gamma2}));
    }
};

void write_rate_rows(std::ostream& out, const ScatteringReport& rep, const std::string& model) {
    for (const auto& row : rep.rows)
        out << row.final.level << ',' << row.final.f.str() << ',' << row.final.mf.str() << ','
            << row.rates.lambda_v << ',' << row.rates.ladder << ',' << model << '\n';
}

void write_sweep_svg(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream svg(path);
    if (!svg) throw UsageError("cannot open plot file: " + path);
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 20, mb = 50;
    double xmin = rows.front().detuning, xmax = rows.back().detuning;
    if (xmax == xmin) xmax = xmin + 1;
    double ymin = 1e300, ymax = 0;
    for (const auto& r : rows)
        for (double v : {r.error_moore, r.error_ozeri})
            if (v > 0) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    if (!(ymax > 0)) { ymin = 1e-6; ymax = 1.0; }
    const double lmin = std::log10(ymin), lmax = std::log10(ymax * 1.0001);
    auto X = [&](double d) { return ml + (d - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto Y = [&](double v) {
        return H - mb - (std::log10(std::max(v, ymin)) - lmin) / (lmax - lmin) * (H - mt - mb);
    };
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << ' ' << H << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
        << "' stroke='black'/>\n"
        << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
        << "' stroke='black'/>\n";
    for (const char* which : {"moore", "ozeri"}) {
        svg << "<polyline fill='none' stroke='"
            << (std::string(which) == "moore" ? "#1f77b4" : "#d62728") << "' points='";
        for (const auto& r : rows) {
            const double v = std::string(which) == "moore" ? r.error_moore : r.error_ozeri;
            svg << X(r.detuning) << ',' << Y(v) << ' ';
        }
        svg << "'/>\n";
    }
    svg << "<text x='" << (W / 2) << "' y='" << (H - 12)
        << "' text-anchor='middle' font-size='14'>detuning (rad/s)</text>\n"
        << "<text x='16' y='" << (H / 2)
        << "' transform='rotate(-90 16 " << (H / 2)
        << ")' text-anchor='middle' font-size='14'>pi-pulse scatter probability</text>\n"
        << "<text x='" << (W - mr - 8) << "' y='" << (mt + 16)
        << "' text-anchor='end' font-size='12' fill='#1f77b4'>four-channel model</text>\n"
        << "<text x='" << (W - mr - 8) << "' y='" << (mt + 32)
        << "' text-anchor='end' font-size='12' fill='#d62728'>constant-frequency model</text>\n"
        << "</svg>\n";
}

int run(int argc, char** argv) {
    CLI::App app{"scattering-limited metastable-qubit calculator"};
    app.require_subcommand(1);

    std::string species_arg = "ba137";
    app.add_option("--species", species_arg,
                   "species name (resolved in $SRSLAB_DATA or ./data) or file path")
        ->capture_default_str();

    // ---- rate ----
    auto* rate = app.add_subcommand("rate", "per-final-state scattering rates");
    BeamFlags rate_beam;
    rate_beam.add_to(rate, false);
    std::string rate_state = "5D5/2:1,0";
    std::string rate_model = "moore";
    std::string rate_finals = "S1/2+D3/2";
    std::string rate_out;
    rate->add_option("--state", rate_state, "initial state, LEVEL:F,m")->capture_default_str();
    rate->add_option("--model", rate_model, "moore | ozeri | both")->capture_default_str();
    rate->add_option("--finals", rate_finals, "S1/2+D3/2 | D5/2-non-Rayleigh | all")
        ->capture_default_str();
    rate->add_option("-o,--output", rate_out, "output CSV file (default stdout)");

    // ---- sweep ----
    auto* sweep = app.add_subcommand(
        "sweep", "qubit pi-pulse scatter probability vs drive detuning, both models");
    BeamFlags sweep_beam;
    sweep_beam.add_to(sweep, true);
    std::string sweep_q0 = "5D5/2:1,0", sweep_q1 = "5D5/2:3,0";
    std::string sweep_min = "-60THz", sweep_max = "-2.5THz";
    int sweep_points = 60;
    std::string sweep_out, sweep_plot;
    sweep->add_option("--q0", sweep_q0, "qubit state 0")->capture_default_str();
    sweep->add_option("--q1", sweep_q1, "qubit state 1")->capture_default_str();
    sweep->add_option("--det-min", sweep_min, "sweep start detuning")->capture_default_str();
    sweep->add_option("--det-max", sweep_max, "sweep end detuning")->capture_default_str();
    sweep->add_option("--points", sweep_points, "grid points")->capture_default_str();
    sweep->add_option("-o,--output", sweep_out, "output CSV file (default stdout)");
    sweep->add_option("--plot", sweep_plot, "also write an SVG plot to this path");

    // ---- table2 ----
    auto* table2 = app.add_subcommand(
        "table2",
        "two-qubit gate errors at the three studied operating points. The 617 nm row is "
        "evaluated at -2.5 THz from the D5/2-P3/2 transition (the operating point the "
        "measurements used); 674 and 461 nm at their nominal wavelengths.");
    std::string table2_out;
    double table2_trap = constants::two_pi * 2e6;
    table2->add_option("-o,--output", table2_out, "output CSV file (default stdout)");
    table2->add_option("--trap-frequency", table2_trap, "motional frequency, rad/s")
        ->capture_default_str();

    // ---- best-qubit ----
    auto* bestq = app.add_subcommand("best-qubit",
                                     "manifold pair with the lowest scatter-limited error");
    BeamFlags best_beam;
    best_beam.gamma = 0.105;
    best_beam.gamma2 = 0.105;
    best_beam.add_to(bestq, true);
    std::string best_manifold;
    bestq->add_option("--manifold", best_manifold, "manifold level label (default *D5/2)");

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "analysis fits on CSV inputs");
    std::string fit_mode = "lifetime";
    std::string fit_on, fit_off, fit_rabi;
    std::vector<std::string> fit_pairs;
    std::string fit_lambda;
    fit->add_option("--mode", fit_mode, "lifetime | e2 | raman")->capture_default_str();
    fit->add_option("--on", fit_on, "survival CSV with scattering light on (lifetime mode)");
    fit->add_option("--off", fit_off, "survival CSV of the natural lifetime (lifetime mode)");
    fit->add_option("--rabi", fit_rabi, "Rabi CSV: channel,rabi_rad_s,sigma_rad_s");
    fit->add_option("--pair", fit_pairs,
                    "raman mode: state pair for each channel index, 'LEVEL:F,m|LEVEL:F,m'");
    fit->add_option("--lambda", fit_lambda, "raman mode: drive frequency");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo survival curves");
    BeamFlags sim_beam;
    sim_beam.gamma = 0.045;
    sim_beam.add_to(sim, false);
    std::string sim_state = "5D5/2:1,0";
    double sim_rate = -1.0;
    double sim_natural = 1.0 / 30.14;
    double sim_bin = 0.1;
    int sim_bins = 30;
    long sim_trials = 10000;
    std::uint64_t sim_seed = 1;
    std::string sim_out, sim_out_off;
    sim->add_option("--state", sim_state, "initial state (campaign mode)")->capture_default_str();
    sim->add_option("--rate", sim_rate, "bare mode: total decay rate 1/s (skips the campaign)");
    sim->add_option("--natural-rate", sim_natural, "natural decay rate, 1/s")
        ->capture_default_str();
    sim->add_option("--bin", sim_bin, "interrogation period, s")->capture_default_str();
    sim->add_option("--bins", sim_bins, "number of bins")->capture_default_str();
    sim->add_option("--trials", sim_trials, "trials")->capture_default_str();
    sim->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
    sim->add_option("-o,--output", sim_out, "survival CSV (on-curve in campaign mode)");
    sim->add_option("--output-off", sim_out_off, "campaign mode: natural-lifetime CSV");

    CLI11_PARSE(app, argc, argv);

    auto species = [&]() { return load_species(resolve_species_path(species_arg)); };

    if (rate->parsed()) {
        const SpeciesData sp = species();
        const HyperfineState st = parse_state(rate_state);
        const LaserDrive drive = rate_beam.drive1(sp);
        std::ofstream file;
        std::ostream& out = open_output(file, rate_out);
        out << "final_level,F,m,rate_lambda_v_per_s,rate_ladder_per_s,model\n";
        if (rate_model == "moore" || rate_model == "both")
            write_rate_rows(out,
                            scattering_report(sp, st, drive, rate_finals,
                                              default_intermediates(sp), RateModel::moore),
                            "moore");
        if (rate_model == "ozeri" || rate_model == "both")
            write_rate_rows(out,
                            scattering_report(sp, st, drive, rate_finals,
                                              default_intermediates(sp), RateModel::ozeri),
                            "ozeri");
        if (rate_model != "moore" && rate_model != "ozeri" && rate_model != "both")
            throw UsageError("unknown model: " + rate_model);
        return 0;
    }

    if (sweep->parsed()) {
        const SpeciesData sp = species();
        const double ref = transition_frequency(sp, level_by_suffix(sp, "D5/2"),
                                                level_by_suffix(sp, "P3/2"));
        const double dmin = parse_frequency(sweep_min);
        const double dmax = parse_frequency(sweep_max);
        if (sweep_points < 2) throw UsageError("--points must be >= 2");
        std::vector<double> grid;
        for (int p = 0; p < sweep_points; ++p)
            grid.push_back(dmin + (dmax - dmin) * p / (sweep_points - 1));
        const std::vector<SweepRow> rows = detuning_sweep(
            sp, parse_state(sweep_q0), parse_state(sweep_q1),
            Polarization(BeamGeometry{sweep_beam.phi, sweep_beam.gamma}),
            Polarization(SecondBeamGeometry{sweep_beam.phi, sweep_beam.gamma2}), ref, grid,
            sweep_beam.field, default_intermediates(sp));
        std::ofstream file;
        std::ostream& out = open_output(file, sweep_out);
        out << "detuning_THz,error_moore,error_ozeri\n";
        for (const auto& r : rows)
            out << r.detuning / constants::two_pi / 1e12 << ',' << r.error_moore << ','
                << r.error_ozeri << '\n';
        if (!sweep_plot.empty()) write_sweep_svg(sweep_plot, rows);
        return 0;
    }

    if (table2->parsed()) {
        const SpeciesData sp = species();
        const HyperfineState q0 = parse_state("5D5/2:1,0");
        const HyperfineState q1 = parse_state("5D5/2:3,0");
        const double ref = transition_frequency(sp, level_by_suffix(sp, "D5/2"),
                                                level_by_suffix(sp, "P3/2"));
        struct Point {
            double nm;
            double omega;
            double gamma;
        };
        const std::vector<Point> points = {
            {617.0, ref - constants::two_pi * 2.5e12, 0.105},
            {674.0, parse_frequency("674nm"), 0.045},
            {461.0, parse_frequency("461nm"), 0.105},
        };
        std::ofstream file;
        std::ostream& out = open_output(file, table2_out);
        out << "wavelength_nm,two_qubit_error_predicted,two_qubit_error_best_qubit,"
               "gate_time_2q_s\n";
        const double E = 1e5;
        for (const auto& pt : points) {
            LaserDrive d1(pt.omega, E, Polarization(BeamGeometry{constants::pi / 2, pt.gamma}));
            LaserDrive d2(pt.omega, E,
                          Polarization(SecondBeamGeometry{constants::pi / 2, pt.gamma}));
            const double dk = 2.0 * pt.omega / constants::speed_of_light;
            const double eta = lamb_dicke(sp.mass_amu(), table2_trap, dk);
            const double single =
                single_qubit_error(sp, q0, q1, d1, d2, ErrorVariant::full);
            const BestQubit best =
                best_qubit_search(sp, d1, d2, level_by_suffix(sp, "D5/2"));
            const double tau2q = pi_time(raman_rabi(sp, q0, q1, d1, d2)) / eta;
            out << pt.nm << ',' << two_qubit_error(single, eta) << ','
                << two_qubit_error(best.error, eta) << ',' << tau2q << '\n';
        }
        return 0;
    }

    if (bestq->parsed()) {
        const SpeciesData sp = species();
        const std::string manifold =
            best_manifold.empty() ? level_by_suffix(sp, "D5/2") : best_manifold;
        const BestQubit best =
            best_qubit_search(sp, best_beam.drive1(sp), best_beam.drive2(sp), manifold);
        std::cout << best.q0.str() << ' ' << best.q1.str() << '\n'
                  << "single_qubit_full_error," << best.error << '\n';
        return 0;
    }

    if (fit->parsed()) {
        if (fit_mode == "lifetime") {
            if (fit_on.empty()) throw UsageError("lifetime mode needs --on");
            const ExponentialFit on = fit_exponential(read_survival_csv(fit_on));
            std::cout << "rate_on_per_s," << on.rate << ',' << on.rate_se << '\n';
            if (!fit_off.empty()) {
                const ExponentialFit off = fit_exponential(read_survival_csv(fit_off));
                const RateExtraction x = extract_srs_rate(on, off);
                std::cout << "rate_off_per_s," << off.rate << ',' << off.rate_se << '\n'
                          << "rate_srs_per_s," << x.rate << ',' << x.se << '\n'
                          << "nonphysical," << (x.nonphysical ? 1 : 0) << '\n';
            }
            return 0;
        }
        if (fit_mode == "e2") {
            if (fit_rabi.empty()) throw UsageError("e2 mode needs --rabi");
            std::ifstream in(fit_rabi);
            if (!in) throw UsageError("cannot open " + fit_rabi);
            const PolarizationE2Fit f = fit_polarization_e2(read_rabi_csv(in));
            std::cout << "gamma_rad," << f.gamma << ',' << f.gamma_se << '\n'
                      << "phi_rad," << f.phi << ",fixed\n";
            return 0;
        }
        if (fit_mode == "raman") {
            if (fit_rabi.empty() || fit_pairs.empty() || fit_lambda.empty())
                throw UsageError("raman mode needs --rabi, --pair (per channel), --lambda");
            std::ifstream in(fit_rabi);
            if (!in) throw UsageError("cannot open " + fit_rabi);
            const std::vector<ChannelRabi> rows = read_rabi_csv(in);
            const SpeciesData sp = species();
            std::vector<PairRabi> meas;
            for (const auto& r : rows) {
                if (r.delta_m < 0 || r.delta_m >= static_cast<int>(fit_pairs.size()))
                    throw UsageError("channel index without matching --pair");
                const std::string& ps = fit_pairs[r.delta_m];
                const auto bar = ps.find('|');
                if (bar == std::string::npos)
                    throw UsageError("bad --pair (want 'STATE|STATE'): " + ps);
                meas.push_back({parse_state(ps.substr(0, bar)), parse_state(ps.substr(bar + 1)),
                                r.rabi, r.sigma});
            }
            const PolarizationRamanFit f = fit_polarization_raman(
                sp, parse_frequency(fit_lambda), meas, default_intermediates(sp));
            std::cout << "gamma1_rad," << f.gamma1 << ',' << f.gamma1_se << '\n'
                      << "gamma2_rad," << f.gamma2 << ',' << f.gamma2_se << '\n'
                      << "phi_rad," << f.phi1 << ",fixed\n";
            return 0;
        }
        throw UsageError("unknown fit mode: " + fit_mode);
    }

    if (sim->parsed()) {
        SequenceConfig cfg;
        cfg.bin_s = sim_bin;
        cfg.max_bins = sim_bins;
        cfg.trials = sim_trials;
        cfg.seed = sim_seed;
        std::ofstream file;
        if (sim_rate >= 0) {
            cfg.total_rate = sim_rate;
            write_survival_csv(open_output(file, sim_out), simulate_survival(cfg));
            return 0;
        }
        const SpeciesData sp = species();
        const CampaignResult res = simulate_campaign(sp, parse_state(sim_state),
                                                     sim_beam.drive1(sp), sim_natural, cfg);
        write_survival_csv(open_output(file, sim_out), res.on);
        if (!sim_out_off.empty()) {
            std::ofstream off_file;
            write_survival_csv(open_output(off_file, sim_out_off), res.off);
        }
        std::cerr << "simulated srs rate: " << res.srs_rate << " /s\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const srslab::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const srslab::ResonanceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_physics;
    } catch (const srslab::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_physics;
    } catch (const srslab::FitError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_physics;
    } catch (const srslab::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
