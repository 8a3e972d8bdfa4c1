#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vjump/potential.hpp"

namespace vjump {

// Escape-time batch summary against the low-temperature prediction.
struct EscapeSummary {
    long n = 0;
    double mean = 0.0;
    double stderr_ = 0.0;  // sample std / sqrt(n)
    double theory = 0.0;
    double ratio = 0.0;  // mean / theory
    double ks_exp = 0.0; // KS distance of tau/mean to Exp(1)
    std::string csv_line() const;
};

EscapeSummary summarize_escape(std::span<const double> tau, double theory_value);

// Mean escape time prediction sqrt(8 pi eps / U''(x0)) exp((U(x1)-U(x0))/eps)
// for the velocity jump process in a double-well potential; x0 is the first
// listed minimum and x1 the maximum after it.
double kramers_theory(const Potential1D& p, double eps);
// Reference value for the overdamped diffusion in the same landscape:
// 2 pi exp(dU/eps) / sqrt(|U''(x1)| U''(x0)).  Reported in summaries only.
double kramers_theory_diffusion(const Potential1D& p, double eps);

// sup-distance between the empirical CDF of the (pre-rescaled) samples and
// 1 - exp(-v), evaluated from both one-sided gaps at every jump point
double ks_to_exponential(std::span<const double> rescaled_samples);

// per-bin Gibbs masses of exp(-U/eps) over [lo, hi], adaptive quadrature,
// normalized to sum exactly 1
std::vector<double> gibbs_density_1d(const Potential1D& p, double eps, int bins);
std::vector<double> gibbs_density_1d(const Potential1D& p, double eps, int bins,
                                     double lo, double hi);

// half L1 distance between two histograms that both sum to 1
double tv_histograms(std::span<const double> a, std::span<const double> b);

// two-point reference measure w0 delta_{x0} + (1-w0) delta_{x2}
struct TwoPointMeasure {
    double x0;
    double x2;
    double w0;
};

// exact W1 between the empirical measure of the samples and the two-point
// measure, via the CDF-difference integral
double wasserstein1_1d(std::span<const double> samples, const TwoPointMeasure& ref);

// one-line CSV record "name,params,value,stderr"
std::string csv_record(const std::string& name, const std::string& params,
                       double value, std::optional<double> stderr_ = std::nullopt);

}  // namespace vjump
