#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srslab/couplings.hpp"
#include "srslab/errors.hpp"
#include "srslab/raman.hpp"

// Analysis pipeline: exponential survival fits with binomial weighting,
// scatter-rate extraction by subtraction, and polarization-angle extraction
// from measured Rabi-frequency ratios.
namespace srslab {

struct SurvivalRecord {
    double delay_s = 0.0;
    long trials = 0;
    long survivors = 0;
};

struct SurvivalCurve {
    std::vector<SurvivalRecord> records;

    void validate() const {
        double prev = -1.0;
        for (const auto& r : records) {
            if (r.trials <= 0) throw ValidationError("survival curve: trials must be > 0");
            if (r.survivors < 0 || r.survivors > r.trials)
                throw ValidationError("survival curve: survivors outside [0, trials]");
            if (r.delay_s <= prev)
                throw ValidationError("survival curve: delays must be strictly increasing");
            prev = r.delay_s;
        }
    }
};

inline SurvivalCurve read_survival_csv(std::istream& in) {
    SurvivalCurve c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != "delay_s,trials,survivors")
                throw ParseError(lineno, "expected header delay_s,trials,survivors");
            continue;
        }
        std::istringstream iss(line);
        SurvivalRecord r;
        char c1, c2;
        if (!(iss >> r.delay_s >> c1 >> r.trials >> c2 >> r.survivors) || c1 != ',' || c2 != ',')
            throw ParseError(lineno, "bad survival record: " + line);
        c.records.push_back(r);
    }
    c.validate();
    return c;
}

inline SurvivalCurve read_survival_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open survival CSV: " + path);
    return read_survival_csv(in);
}

inline void write_survival_csv(std::ostream& out, const SurvivalCurve& c) {
    out << "delay_s,trials,survivors\n";
    out << std::setprecision(17);
    for (const auto& r : c.records)
        out << r.delay_s << ',' << r.trials << ',' << r.survivors << '\n';
}

struct FitResult {
    std::vector<double> values;
    std::vector<double> std_errors;
    double residual = 0.0;      // weighted sum of squared residuals
    bool converged = false;
};

namespace detail {

// Damped Gauss-Newton with a Levenberg-Marquardt lambda schedule and a
// forward-difference Jacobian. residual_fn returns weighted residuals
// (already multiplied by sqrt of the weight).
struct LMOptions {
    int max_iter = 200;
    double step_tol = 1e-10;
};

inline FitResult levenberg_marquardt(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual_fn,
    Eigen::VectorXd p, const LMOptions& opt = {}) {
    const int n = static_cast<int>(p.size());
    auto chi2 = [&](const Eigen::VectorXd& q) { return residual_fn(q).squaredNorm(); };

    auto jacobian = [&](const Eigen::VectorXd& q, const Eigen::VectorXd& r0) {
        Eigen::MatrixXd J(r0.size(), n);
        for (int j = 0; j < n; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(q[j]));
            Eigen::VectorXd qp = q;
            qp[j] += h;
            J.col(j) = (residual_fn(qp) - r0) / h;
        }
        return J;
    };

    double lambda = 1e-3;
    double c = chi2(p);
    bool converged = false;
    for (int it = 0; it < opt.max_iter; ++it) {
        const Eigen::VectorXd r = residual_fn(p);
        const Eigen::MatrixXd J = jacobian(p, r);
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = -J.transpose() * r;
        Eigen::MatrixXd A = JtJ;
        A.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-30);
        const Eigen::VectorXd step = A.ldlt().solve(g);
        const Eigen::VectorXd p2 = p + step;
        const double c2 = chi2(p2);
        if (c2 < c) {
            const double rel = step.cwiseAbs().maxCoeff() /
                               std::max(1.0, p.cwiseAbs().maxCoeff());
            p = p2;
            c = c2;
            lambda = std::max(lambda / 3.0, 1e-12);
            if (rel < opt.step_tol) {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) {
                converged = true;   // stuck at a minimum within damping range
                break;
            }
        }
    }

    FitResult out;
    out.values.assign(p.data(), p.data() + n);
    out.residual = c;
    out.converged = converged;

    const Eigen::VectorXd r = residual_fn(p);
    const Eigen::MatrixXd J = jacobian(p, r);
    Eigen::MatrixXd cov = (J.transpose() * J).ldlt().solve(Eigen::MatrixXd::Identity(n, n));
    out.std_errors.resize(n);
    for (int j = 0; j < n; ++j)
        out.std_errors[j] = cov(j, j) > 0 ? std::sqrt(cov(j, j)) : 0.0;
    return out;
}

} // namespace detail

// Result of fit_exponential: survival p(t) = amplitude * exp(-rate t).
struct ExponentialFit {
    double rate = 0.0;          // 1/s
    double rate_se = 0.0;
    double amplitude = 0.0;
    double amplitude_se = 0.0;
    double residual = 0.0;
    bool converged = false;
};

// Weighted least squares of p(t) = A exp(-G t) against survivor fractions,
// with binomial weights trials/(p(1-p)) evaluated at the model prediction
// (iteratively refreshed). Internally parameterized in log G so G > 0.
inline ExponentialFit fit_exponential(const SurvivalCurve& curve) {
    curve.validate();
    const size_t nrec = curve.records.size();
    if (nrec < 3) throw FitError("fit_exponential: need at least 3 delays");

    Eigen::VectorXd t(nrec), frac(nrec), trials(nrec);
    bool all_equal = true;
    for (size_t idx = 0; idx < nrec; ++idx) {
        const auto& r = curve.records[idx];
        t[idx] = r.delay_s;
        trials[idx] = static_cast<double>(r.trials);
        frac[idx] = static_cast<double>(r.survivors) / r.trials;
        if (frac[idx] != frac[0]) all_equal = false;
    }
    if (all_equal) throw FitError("fit_exponential: degenerate data (constant survival)");

    // log-linear seed over the strictly positive part of the curve
    double g0 = 1.0 / t[nrec - 1], a0 = 1.0;
    {
        double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
        for (size_t idx = 0; idx < nrec; ++idx) {
            if (frac[idx] <= 0) continue;
            const double y = std::log(frac[idx]);
            sw += 1;
            st += t[idx];
            sy += y;
            stt += t[idx] * t[idx];
            sty += t[idx] * y;
        }
        const double det = sw * stt - st * st;
        if (sw >= 2 && det > 0) {
            const double slope = (sw * sty - st * sy) / det;
            const double icpt = (stt * sy - st * sty) / det;
            if (slope < 0) g0 = -slope;
            a0 = std::exp(icpt);
        }
    }

    // weights follow the current model prediction; a few IRLS rounds settle them
    Eigen::VectorXd w = Eigen::VectorXd::Ones(nrec);
    Eigen::VectorXd p(2);
    p << std::log(g0), a0;
    FitResult fit;
    for (int round = 0; round < 4; ++round) {
        auto resid = [&](const Eigen::VectorXd& q) {
            const double G = std::exp(q[0]);
            Eigen::VectorXd r(nrec);
            for (size_t idx = 0; idx < nrec; ++idx)
                r[idx] = std::sqrt(w[idx]) * (frac[idx] - q[1] * std::exp(-G * t[idx]));
            return r;
        };
        fit = detail::levenberg_marquardt(resid, p);
        p[0] = fit.values[0];
        p[1] = fit.values[1];
        const double G = std::exp(p[0]);
        for (size_t idx = 0; idx < nrec; ++idx) {
            const double pm = std::clamp(p[1] * std::exp(-G * t[idx]), 1e-9, 1.0 - 1e-9);
            w[idx] = trials[idx] / (pm * (1.0 - pm));
        }
    }
    if (!fit.converged) throw FitError("fit_exponential: no convergence after iteration cap");

    // Standard errors need the true covariance of the survivor fractions.
    // When every record comes from the same trial set (equal trial counts)
    // the bins share indicator variables: Cov(p_a, p_b) = p_hi (1 - p_lo) / n
    // with hi/lo ordered by delay. The naive independent-bin covariance can
    // understate the error several-fold there, so use the sandwich estimator
    // (JtWJ)^-1 JtW Sigma WJ (JtWJ)^-1. Unequal trial counts mean independent
    // measurements, where Sigma is diagonal binomial.
    const double G = std::exp(fit.values[0]);
    const double A = fit.values[1];
    const int n = static_cast<int>(nrec);
    Eigen::MatrixXd J(n, 2);
    Eigen::VectorXd pm(n);
    for (int idx = 0; idx < n; ++idx) {
        const double f = A * std::exp(-G * t[idx]);
        pm[idx] = std::clamp(f, 1e-9, 1.0 - 1e-9);
        J(idx, 0) = -A * G * t[idx] * std::exp(-G * t[idx]);   // d/d logG
        J(idx, 1) = std::exp(-G * t[idx]);
    }
    bool shared_trials = true;
    for (int idx = 1; idx < n; ++idx)
        if (trials[idx] != trials[0]) shared_trials = false;
    Eigen::MatrixXd sigma(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a != b && !shared_trials) {
                sigma(a, b) = 0.0;
                continue;
            }
            const int hi = std::max(a, b), lo = std::min(a, b);
            sigma(a, b) = pm[hi] * (1.0 - pm[lo]) / trials[a];
        }
    const Eigen::MatrixXd JtW = J.transpose() * w.asDiagonal();
    const Eigen::MatrixXd bread =
        (JtW * J).ldlt().solve(Eigen::MatrixXd::Identity(2, 2));
    const Eigen::MatrixXd cov = bread * (JtW * sigma * JtW.transpose()) * bread;

    ExponentialFit out;
    out.rate = G;
    out.rate_se = cov(0, 0) > 0 ? G * std::sqrt(cov(0, 0)) : 0.0;   // delta from log G
    out.amplitude = A;
    out.amplitude_se = cov(1, 1) > 0 ? std::sqrt(cov(1, 1)) : 0.0;
    out.residual = fit.residual;
    out.converged = true;
    return out;
}

struct RateExtraction {
    double rate = 0.0;
    double se = 0.0;
    bool nonphysical = false;   // negative beyond the combined error
};

inline RateExtraction extract_srs_rate(const ExponentialFit& on, const ExponentialFit& off) {
    if (!on.converged || !off.converged)
        throw FitError("extract_srs_rate: both fits must have converged");
    RateExtraction out;
    out.rate = on.rate - off.rate;
    out.se = std::hypot(on.rate_se, off.rate_se);
    out.nonphysical = out.rate < -out.se;
    return out;
}

// One measured Rabi frequency of a quadrupole delta-m channel.
struct ChannelRabi {
    int delta_m = 0;
    double rabi = 0.0;          // rad/s
    double sigma = 0.0;         // rad/s, 0 = unweighted
};

inline std::vector<ChannelRabi> read_rabi_csv(std::istream& in) {
    std::vector<ChannelRabi> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != "channel,rabi_rad_s,sigma_rad_s")
                throw ParseError(lineno, "expected header channel,rabi_rad_s,sigma_rad_s");
            continue;
        }
        std::istringstream iss(line);
        ChannelRabi r;
        char c1, c2;
        if (!(iss >> r.delta_m >> c1 >> r.rabi >> c2 >> r.sigma) || c1 != ',' || c2 != ',')
            throw ParseError(lineno, "bad Rabi record: " + line);
        out.push_back(r);
    }
    return out;
}

namespace detail {

// Multi-start LM over the residual function; starts are deterministic.
// Lowest residual wins, first start on ties.
inline FitResult multi_start_lm(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& resid,
    const std::vector<Eigen::VectorXd>& starts) {
    FitResult best;
    bool have = false;
    for (const Eigen::VectorXd& s : starts) {
        FitResult r = levenberg_marquardt(resid, s);
        if (!r.converged) continue;
        if (!have || r.residual < best.residual) {
            best = r;
            have = true;
        }
    }
    if (!have) throw FitError("polarization fit: no start converged");
    return best;
}

} // namespace detail

// Polarization angle gamma from measured delta-m = 0, 1, 2 quadrupole Rabi
// frequencies. phi fixed (pass pi/2 for a beam perpendicular to the
// quantization axis) unless fit_phi is set. Fitted model: rabi = scale *
// geometric factor; only ratios constrain the angles.
struct PolarizationE2Fit {
    double gamma = 0.0;
    double gamma_se = 0.0;
    double phi = 0.0;
    double phi_se = 0.0;        // 0 when phi fixed
    double scale = 0.0;
    double residual = 0.0;
    bool converged = false;
};

inline PolarizationE2Fit fit_polarization_e2(const std::vector<ChannelRabi>& measured,
                                             double phi = constants::pi / 2,
                                             bool fit_phi = false) {
    std::vector<int> channels;
    for (const auto& m : measured)
        if (std::find(channels.begin(), channels.end(), m.delta_m) == channels.end())
            channels.push_back(m.delta_m);
    if (channels.size() < 2)
        throw FitError("fit_polarization_e2: need at least 2 distinct delta-m channels");
    double rmax = 0.0;
    for (const auto& m : measured) rmax = std::max(rmax, std::abs(m.rabi));
    if (rmax == 0.0) throw FitError("fit_polarization_e2: all Rabi frequencies zero");

    auto factor = [](double ph, double ga, int dm) {
        const QuadrupoleFactors g = quadrupole_geometric_factors(ph, ga);
        switch (dm) {
            case 0: return g.g0;
            case 1: return g.g1;
            case 2: return g.g2;
        }
        throw DomainError("fit_polarization_e2: delta_m outside {0,1,2}");
    };

    auto resid = [&](const Eigen::VectorXd& q) {
        const double ga = q[0];
        const double sc = q[1];
        const double ph = fit_phi ? q[2] : phi;
        Eigen::VectorXd r(measured.size());
        for (size_t idx = 0; idx < measured.size(); ++idx) {
            const auto& m = measured[idx];
            const double wgt = m.sigma > 0 ? 1.0 / m.sigma : 1.0 / rmax;
            r[idx] = wgt * (m.rabi - sc * factor(ph, ga, m.delta_m));
        }
        return r;
    };

    std::vector<Eigen::VectorXd> starts;
    for (int s = 0; s < 8; ++s) {
        Eigen::VectorXd q(fit_phi ? 3 : 2);
        q[0] = -1.2 + 0.35 * s;   // gamma grid across (-pi/2, pi/2)
        q[1] = rmax;
        if (fit_phi) q[2] = phi;
        starts.push_back(q);
    }
    const FitResult fit = detail::multi_start_lm(resid, starts);

    PolarizationE2Fit out;
    out.gamma = fit.values[0];
    out.gamma_se = fit.std_errors[0];
    out.scale = fit.values[1];
    out.phi = fit_phi ? fit.values[2] : phi;
    out.phi_se = fit_phi ? fit.std_errors[2] : 0.0;
    out.residual = fit.residual;
    out.converged = true;
    return out;
}

// One measured Raman Rabi frequency between a pair of hyperfine states.
struct PairRabi {
    HyperfineState a, b;
    double rabi = 0.0;          // rad/s
    double sigma = 0.0;
};

struct PolarizationRamanFit {
    double gamma1 = 0.0, gamma1_se = 0.0;
    double gamma2 = 0.0, gamma2_se = 0.0;
    double phi1 = 0.0, phi2 = 0.0;  // held at pi/2 (perpendicular beams, equal axis angle)
    double scale = 0.0;
    double residual = 0.0;
    bool converged = false;
};

// Beam polarization angles from measured Raman Rabi frequencies, under the
// constraints that the wavevectors are perpendicular to each other and make
// equal angles with the quantization axis (phi = phi' = pi/2). Free
// parameters: gamma, gamma', overall scale.
inline PolarizationRamanFit fit_polarization_raman(
    const SpeciesData& species, double drive_omega, const std::vector<PairRabi>& measured,
    const std::vector<std::string>& intermediates) {
    if (measured.size() < 2)
        throw FitError("fit_polarization_raman: need at least 2 measured transitions");
    double rmax = 0.0;
    for (const auto& m : measured) rmax = std::max(rmax, std::abs(m.rabi));
    if (rmax == 0.0) throw FitError("fit_polarization_raman: all Rabi frequencies zero");

    const double phi = constants::pi / 2;
    auto predict = [&](double g1, double g2, const PairRabi& m) {
        LaserDrive d1(drive_omega, 1.0, Polarization(BeamGeometry{phi, g1}));
        LaserDrive d2(drive_omega, 1.0, Polarization(SecondBeamGeometry{phi, g2}));
        return raman_rabi(species, m.a, m.b, d1, d2, intermediates);
    };

    auto resid = [&](const Eigen::VectorXd& q) {
        Eigen::VectorXd r(measured.size());
        for (size_t idx = 0; idx < measured.size(); ++idx) {
            const auto& m = measured[idx];
            const double wgt = m.sigma > 0 ? 1.0 / m.sigma : 1.0 / rmax;
            r[idx] = wgt * (m.rabi - q[2] * predict(q[0], q[1], m));
        }
        return r;
    };

    std::vector<Eigen::VectorXd> starts;
    for (int s = 0; s < 8; ++s) {
        Eigen::VectorXd q(3);
        q[0] = 0.03 + 0.17 * (s % 4);   // reflection symmetries: sample one quadrant
        q[1] = 0.03 + 0.34 * (s / 4);
        q[2] = 1.0;
        starts.push_back(q);
    }
    const FitResult fit = detail::multi_start_lm(resid, starts);

    PolarizationRamanFit out;
    out.gamma1 = fit.values[0];
    out.gamma1_se = fit.std_errors[0];
    out.gamma2 = fit.values[1];
    out.gamma2_se = fit.std_errors[1];
    out.phi1 = phi;
    out.phi2 = phi;
    out.scale = fit.values[2];
    out.residual = fit.residual;
    out.converged = true;
    return out;
}

} // namespace srslab
