#include <catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "srslab/expsim.hpp"

using namespace srslab;
using Catch::Approx;
using testutil::ba137;

TEST_CASE("determinism and stream independence") {
    SequenceConfig cfg;
    cfg.total_rate = 0.8;
    cfg.bin_s = 0.1;
    cfg.max_bins = 20;
    cfg.trials = 5000;
    cfg.seed = 42;
    const SurvivalCurve a = simulate_survival(cfg);
    const SurvivalCurve b = simulate_survival(cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i)
        CHECK(a.records[i].survivors == b.records[i].survivors);

    cfg.seed = 43;
    const SurvivalCurve c = simulate_survival(cfg);
    bool any_diff = false;
    for (size_t i = 0; i < a.records.size(); ++i)
        if (a.records[i].survivors != c.records[i].survivors) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("zero rate never decays") {
    SequenceConfig cfg;
    cfg.total_rate = 0.0;
    cfg.max_bins = 10;
    cfg.trials = 1000;
    cfg.seed = 7;
    for (const auto& r : simulate_survival(cfg).records) CHECK(r.survivors == r.trials);
}

TEST_CASE("mean survival tracks the exponential") {
    SequenceConfig cfg;
    cfg.total_rate = 1.0;
    cfg.bin_s = 0.1;
    cfg.max_bins = 30;
    cfg.trials = 200000;
    cfg.seed = 123;
    const SurvivalCurve c = simulate_survival(cfg);
    for (const auto& r : c.records) {
        const double p = std::exp(-cfg.total_rate * r.delay_s);
        const double sigma = std::sqrt(p * (1 - p) / cfg.trials);
        CHECK(std::abs(static_cast<double>(r.survivors) / r.trials - p) < 5 * sigma + 1e-9);
    }
}

TEST_CASE("config validation") {
    SequenceConfig cfg;
    cfg.total_rate = -1.0;
    CHECK_THROWS_AS(simulate_survival(cfg), DomainError);
    cfg.total_rate = 1.0;
    cfg.bin_s = 0.0;
    CHECK_THROWS_AS(simulate_survival(cfg), DomainError);
    cfg.bin_s = 0.1;
    cfg.trials = 0;
    CHECK_THROWS_AS(simulate_survival(cfg), DomainError);
}

TEST_CASE("campaign end-to-end recovery") {
    const SpeciesData& sp = ba137();
    const HyperfineState ket0{"5D5/2", HalfInt(1), HalfInt(0)};
    // field chosen so the scatter rate lands near 0.5 /s at 674 nm
    const double w = constants::two_pi * constants::speed_of_light / 674e-9;
    const LaserDrive d(w, 2.712e5, Polarization(BeamGeometry{M_PI / 2, 0.045}));

    SequenceConfig cfg;
    cfg.bin_s = 0.1;
    cfg.max_bins = 40;
    cfg.trials = 10000;
    cfg.seed = 2024;
    const CampaignResult res = simulate_campaign(sp, ket0, d, 1.0 / 30.14, cfg);
    CHECK(res.srs_rate > 0.1);

    const ExponentialFit on = fit_exponential(res.on);
    const ExponentialFit off = fit_exponential(res.off);
    const RateExtraction x = extract_srs_rate(on, off);
    CHECK(std::abs(x.rate - res.srs_rate) < 2.0 * x.se);
    CHECK_FALSE(x.nonphysical);
}

TEST_CASE("campaign with no scattering light") {
    const SpeciesData& sp = ba137();
    const HyperfineState ket0{"5D5/2", HalfInt(1), HalfInt(0)};
    const double w = constants::two_pi * constants::speed_of_light / 674e-9;
    const LaserDrive d(w, 0.0, Polarization(BeamGeometry{M_PI / 2, 0.045}));

    SequenceConfig cfg;
    cfg.bin_s = 0.5;
    cfg.max_bins = 40;
    cfg.trials = 20000;
    cfg.seed = 11;
    const CampaignResult res = simulate_campaign(sp, ket0, d, 1.0 / 30.14, cfg);
    CHECK(res.srs_rate == 0.0);
    const ExponentialFit on = fit_exponential(res.on);
    const ExponentialFit off = fit_exponential(res.off);
    const RateExtraction x = extract_srs_rate(on, off);
    CHECK(std::abs(x.rate) < 3.0 * x.se);
}
