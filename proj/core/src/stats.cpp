#include "vjump/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "vjump/numerics.hpp"

namespace vjump {

namespace {

// x0 = first listed minimum, x1 = the maximum right after it
std::pair<const CriticalPoint*, const CriticalPoint*> double_well_pair(
    const Potential1D& p) {
    const auto& crit = p.critical_points();
    for (std::size_t i = 0; i + 1 < crit.size(); ++i)
        if (crit[i].kind == CritKind::Minimum && crit[i + 1].kind == CritKind::Maximum)
            return {&crit[i], &crit[i + 1]};
    throw InputError("kramers_theory: potential has no minimum/maximum pair");
}

}  // namespace

double kramers_theory(const Potential1D& p, double eps) {
    const auto [c0, c1] = double_well_pair(p);
    const double curv = p.curvature(c0->x);
    if (curv <= 0.0)
        throw InputError("kramers_theory: U''(x0) must be positive");
    const double barrier = c1->value - c0->value;
    return std::sqrt(8.0 * std::numbers::pi * eps / curv) * std::exp(barrier / eps);
}

double kramers_theory_diffusion(const Potential1D& p, double eps) {
    const auto [c0, c1] = double_well_pair(p);
    const double curv0 = p.curvature(c0->x);
    const double curv1 = p.curvature(c1->x);
    if (curv0 <= 0.0 || curv1 >= 0.0)
        throw InputError("kramers_theory_diffusion: degenerate extrema");
    const double barrier = c1->value - c0->value;
    return 2.0 * std::numbers::pi * std::exp(barrier / eps) /
           std::sqrt(-curv1 * curv0);
}

double ks_to_exponential(std::span<const double> samples) {
    if (samples.empty()) throw InputError("ks_to_exponential: empty sample");
    std::vector<double> v(samples.begin(), samples.end());
    for (double s : v)
        if (!(s > 0.0)) throw InputError("ks_to_exponential: nonpositive sample");
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = 1.0 - std::exp(-v[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

EscapeSummary summarize_escape(std::span<const double> tau, double theory_value) {
    EscapeSummary s;
    s.n = static_cast<long>(tau.size());
    if (s.n == 0) throw InputError("summarize_escape: empty sample");
    double sum = 0.0;
    for (double t : tau) sum += t;
    s.mean = sum / s.n;
    double ss = 0.0;
    for (double t : tau) ss += (t - s.mean) * (t - s.mean);
    s.stderr_ = (s.n > 1) ? std::sqrt(ss / (s.n - 1)) / std::sqrt((double)s.n) : 0.0;
    s.theory = theory_value;
    s.ratio = s.mean / theory_value;
    std::vector<double> rescaled(tau.begin(), tau.end());
    for (double& t : rescaled) t /= s.mean;
    s.ks_exp = ks_to_exponential(rescaled);
    return s;
}

std::string EscapeSummary::csv_line() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "escape_summary,n=%ld,%.17g,%.17g", n, mean,
                  stderr_);
    return buf;
}

std::vector<double> gibbs_density_1d(const Potential1D& p, double eps, int bins,
                                     double lo, double hi) {
    if (bins < 2) throw InputError("gibbs_density_1d: bins must be >= 2");
    if (!(eps > 0.0)) throw InputError("gibbs_density_1d: eps must be > 0");
    if (!(hi > lo)) throw InputError("gibbs_density_1d: empty interval");
    // shift by the minimum sampled energy so the exponentials stay in range
    double shift = kInf;
    for (int i = 0; i <= 512; ++i)
        shift = std::min(shift, p.value(lo + (hi - lo) * i / 512.0));
    std::vector<double> mass(bins);
    double z = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double a = lo + (hi - lo) * b / bins;
        const double c = lo + (hi - lo) * (b + 1) / bins;
        mass[b] = integrate_adaptive(
            [&](double x) { return std::exp(-(p.value(x) - shift) / eps); }, a, c,
            1e-12, 1e-300);
        z += mass[b];
    }
    if (!(z > 0.0)) throw NumericError("gibbs_density_1d: zero partition mass");
    for (auto& m : mass) m /= z;
    return mass;
}

std::vector<double> gibbs_density_1d(const Potential1D& p, double eps, int bins) {
    return gibbs_density_1d(p, eps, bins, p.lo(), p.hi());
}

double tv_histograms(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw InputError("tv_histograms: histograms have different bin counts");
    double sa = 0.0, sb = 0.0, d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
        d += std::fabs(a[i] - b[i]);
    }
    if (std::fabs(sa - 1.0) > 1e-9 || std::fabs(sb - 1.0) > 1e-9)
        throw InputError("tv_histograms: histograms must sum to 1");
    return 0.5 * d;
}

double wasserstein1_1d(std::span<const double> samples, const TwoPointMeasure& ref) {
    if (samples.empty()) throw InputError("wasserstein1_1d: empty sample");
    std::vector<double> v(samples.begin(), samples.end());
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());

    // breakpoints of either step CDF
    std::vector<double> knots(v);
    knots.push_back(ref.x0);
    knots.push_back(ref.x2);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    auto f_emp = [&](double x) {
        return static_cast<double>(std::upper_bound(v.begin(), v.end(), x) - v.begin()) /
               n;
    };
    auto f_ref = [&](double x) {
        double f = 0.0;
        if (x >= ref.x0) f += ref.w0;
        if (x >= ref.x2) f += 1.0 - ref.w0;
        return f;
    };
    double w = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        w += std::fabs(f_emp(knots[i]) - f_ref(knots[i])) * (knots[i + 1] - knots[i]);
    return w;
}

std::string csv_record(const std::string& name, const std::string& params,
                       double value, std::optional<double> stderr_) {
    char buf[128];
    std::string out = name + "," + params + ",";
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out += buf;
    out += ",";
    if (stderr_) {
        std::snprintf(buf, sizeof(buf), "%.17g", *stderr_);
        out += buf;
    }
    return out;
}

}  // namespace vjump
