#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "srslab/fitting.hpp"
#include "srslab/scattering.hpp"

// Monte-Carlo model of the shelve / wait / interrogate measurement loop:
// each trial decays at a fixed total rate, and survival is recorded at
// every bin boundary. Output feeds the fitting pipeline.
namespace srslab {

struct SequenceConfig {
    double total_rate = 0.0;    // 1/s, scatter plus natural decay
    double bin_s = 0.1;         // interrogation period
    int max_bins = 30;
    long trials = 10000;
    std::uint64_t seed = 0;

    void validate() const {
        if (total_rate < 0) throw DomainError("sequence config: rate must be >= 0");
        if (bin_s <= 0) throw DomainError("sequence config: bin duration must be > 0");
        if (max_bins <= 0) throw DomainError("sequence config: max bins must be > 0");
        if (trials <= 0) throw DomainError("sequence config: trials must be > 0");
    }
};

namespace detail {

// splitmix64 (Steele/Lea/Flood 2014). Counter-based: the stream for one
// trial is the iteration of this map from a state mixed out of
// (seed, trial index), so trial draws are independent of evaluation order.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform_open01(std::uint64_t bits) {
    // 53-bit mantissa in (0,1]; never exactly 0, safe for log
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

inline double trial_decay_time(std::uint64_t seed, std::uint64_t trial, double rate) {
    if (rate <= 0) return std::numeric_limits<double>::infinity();
    std::uint64_t state = seed;
    (void)splitmix64(state);            // decorrelate adjacent seeds
    state ^= 0x6a09e667f3bcc909ULL + trial * 0x9e3779b97f4a7c15ULL;
    const double u = uniform_open01(splitmix64(state));
    return -std::log(u) / rate;
}

} // namespace detail

inline SurvivalCurve simulate_survival(const SequenceConfig& config) {
    config.validate();
    std::vector<long> survivors(config.max_bins, 0);
    for (long trial = 0; trial < config.trials; ++trial) {
        const double tdecay = detail::trial_decay_time(config.seed,
                                                       static_cast<std::uint64_t>(trial),
                                                       config.total_rate);
        // the trial contributes to every bin boundary it outlives
        int nbins = config.max_bins;
        if (std::isfinite(tdecay))
            nbins = std::min(nbins, static_cast<int>(tdecay / config.bin_s));
        for (int b = 0; b < nbins; ++b) ++survivors[b];
    }

    SurvivalCurve out;
    out.records.reserve(config.max_bins);
    for (int b = 0; b < config.max_bins; ++b)
        out.records.push_back({config.bin_s * (b + 1), config.trials, survivors[b]});
    out.validate();
    return out;
}

struct CampaignResult {
    SurvivalCurve on;       // scattering light applied: rate = srs + natural
    SurvivalCurve off;      // natural decay only
    double srs_rate = 0.0;  // the rate that was simulated
};

// The paired measurement of the analysis pipeline: one curve with the
// scattering drive on, one auxiliary natural-lifetime curve. The off curve
// uses an independent stream (seed + 1).
inline CampaignResult simulate_campaign(const SpeciesData& species, const HyperfineState& initial,
                                        const LaserDrive& drive, double natural_rate,
                                        const SequenceConfig& config,
                                        const std::vector<std::string>& intermediates) {
    if (natural_rate < 0) throw DomainError("simulate_campaign: natural rate must be >= 0");
    const double srs = total_rate(species, initial, drive, "S1/2+D3/2", intermediates);

    CampaignResult out;
    out.srs_rate = srs;
    SequenceConfig on = config;
    on.total_rate = srs + natural_rate;
    out.on = simulate_survival(on);
    SequenceConfig off = config;
    off.total_rate = natural_rate;
    off.seed = config.seed + 1;
    out.off = simulate_survival(off);
    return out;
}

inline CampaignResult simulate_campaign(const SpeciesData& species, const HyperfineState& initial,
                                        const LaserDrive& drive, double natural_rate,
                                        const SequenceConfig& config) {
    return simulate_campaign(species, initial, drive, natural_rate, config,
                             default_intermediates(species));
}

} // namespace srslab
