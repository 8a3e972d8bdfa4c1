#include "vjump/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vjump/numerics.hpp"

namespace vjump {

namespace {

std::string format_spec(const char* fmt, double a, double b = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), fmt, a, b);
    return buf;
}

double strict_stod(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw InputError("trailing characters in number '" + s + "'");
    return v;
}

}  // namespace

CoolingSchedule CoolingSchedule::constant(double eps) {
    if (!(eps > 0.0)) throw InputError("schedule: constant eps must be > 0");
    CoolingSchedule s;
    s.kind_ = Kind::Constant;
    s.c_ = eps;
    s.spec_ = format_spec("const:%.17g", eps);
    return s;
}

CoolingSchedule CoolingSchedule::logarithmic(double c, double t0) {
    if (!(c > 0.0)) throw InputError("schedule: log family needs c > 0");
    if (!(t0 >= 0.0)) throw InputError("schedule: log family needs t0 >= 0");
    CoolingSchedule s;
    s.kind_ = Kind::Logarithmic;
    s.c_ = c;
    s.t0_ = t0;
    s.spec_ = format_spec("log:c=%.17g,t0=%.17g", c, t0);
    return s;
}

CoolingSchedule CoolingSchedule::table(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw InputError("schedule: table needs at least 2 knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i].second > 0.0))
            throw InputError("schedule: table eps values must be > 0");
        if (i > 0) {
            if (!(knots[i].first > knots[i - 1].first))
                throw InputError("schedule: table times must be strictly increasing");
            if (knots[i].second > knots[i - 1].second + 1e-15)
                throw InputError("schedule: table eps must be non-increasing");
        }
    }
    CoolingSchedule s;
    s.kind_ = Kind::Table;
    s.knots_ = std::move(knots);
    // prefix integrals of 1/eps: linear eps on each knot interval gives a
    // closed-form log segment
    s.beta_prefix_.assign(s.knots_.size(), 0.0);
    for (std::size_t i = 1; i < s.knots_.size(); ++i) {
        const auto [ta, ea] = s.knots_[i - 1];
        const auto [tb, eb] = s.knots_[i];
        const double dt = tb - ta;
        const double slope = (eb - ea) / dt;
        double seg;
        if (std::fabs(slope) < 1e-300)
            seg = dt / ea;
        else
            seg = std::log(eb / ea) / slope;
        s.beta_prefix_[i] = s.beta_prefix_[i - 1] + seg;
    }
    s.spec_ = "table:<inline>";
    return s;
}

CoolingSchedule CoolingSchedule::parse(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw InputError("schedule spec '" + spec + "': expected kind:params");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "const") {
        try {
            return constant(strict_stod(rest));
        } catch (const std::logic_error&) {
            throw InputError("schedule spec '" + spec + "': bad eps value");
        }
    }
    if (kind == "log") {
        double c = -1.0, t0 = std::exp(1.0);
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw InputError("schedule spec '" + spec + "': expected key=value");
            const std::string key = item.substr(0, eq);
            const std::string val = item.substr(eq + 1);
            try {
                if (key == "c")
                    c = strict_stod(val);
                else if (key == "t0")
                    t0 = (val == "e") ? std::exp(1.0) : strict_stod(val);
                else
                    throw InputError("schedule spec '" + spec + "': unknown key " + key);
            } catch (const std::logic_error&) {
                throw InputError("schedule spec '" + spec + "': bad value for " + key);
            }
        }
        if (c <= 0.0) throw InputError("schedule spec '" + spec + "': c must be set > 0");
        auto s = logarithmic(c, t0);
        s.spec_ = spec;
        return s;
    }
    if (kind == "table") {
        std::ifstream in(rest);
        if (!in) throw InputError("schedule spec '" + spec + "': cannot open file");
        std::vector<std::pair<double, double>> knots;
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            double t, e;
            if (ls >> t >> e) knots.emplace_back(t, e);
        }
        auto s = table(std::move(knots));
        s.spec_ = spec;
        return s;
    }
    throw InputError("schedule spec '" + spec + "': unknown kind " + kind);
}

double CoolingSchedule::eps(double t) const {
    switch (kind_) {
        case Kind::Constant:
            return c_;
        case Kind::Logarithmic: {
            const double l = std::log(t0_ + t);
            if (l <= 0.0) return kInf;
            return c_ / l;
        }
        case Kind::Table: {
            if (t <= knots_.front().first) return knots_.front().second;
            if (t >= knots_.back().first) return knots_.back().second;
            auto it = std::upper_bound(
                knots_.begin(), knots_.end(), t,
                [](double v, const std::pair<double, double>& k) { return v < k.first; });
            const auto [tb, eb] = *it;
            const auto [ta, ea] = *(it - 1);
            return ea + (eb - ea) * (t - ta) / (tb - ta);
        }
    }
    return c_;
}

double CoolingSchedule::inv_eps(double t) const {
    const double e = eps(t);
    if (!std::isfinite(e)) return 0.0;
    return 1.0 / e;
}

double CoolingSchedule::beta_integral(double ta, double tb) const {
    if (tb < ta) return -beta_integral(tb, ta);
    switch (kind_) {
        case Kind::Constant:
            return (tb - ta) / c_;
        case Kind::Logarithmic: {
            // antiderivative of ln(t0+u)/c is ((t0+u)(ln(t0+u)-1))/c
            auto prim = [this](double u) {
                const double v = t0_ + u;
                if (v <= 0.0) return 0.0;
                return v * (std::log(v) - 1.0) / c_;
            };
            return prim(tb) - prim(ta);
        }
        case Kind::Table: {
            auto prefix = [this](double t) {
                if (t <= knots_.front().first)
                    return (t - knots_.front().first) / knots_.front().second;
                if (t >= knots_.back().first)
                    return beta_prefix_.back() +
                           (t - knots_.back().first) / knots_.back().second;
                auto it = std::upper_bound(
                    knots_.begin(), knots_.end(), t,
                    [](double v, const std::pair<double, double>& k) { return v < k.first; });
                const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
                const auto [tka, ea] = knots_[i - 1];
                const auto [tkb, eb] = knots_[i];
                const double slope = (eb - ea) / (tkb - tka);
                const double e_here = ea + slope * (t - tka);
                double seg;
                if (std::fabs(slope) < 1e-300)
                    seg = (t - tka) / ea;
                else
                    seg = std::log(e_here / ea) / slope;
                return beta_prefix_[i - 1] + seg;
            };
            return prefix(tb) - prefix(ta);
        }
    }
    return 0.0;
}

double CoolingSchedule::inv_beta_growth(double t) const {
    const double h = std::max(1e-6, 1e-5 * t);
    const double lo = std::max(0.0, t - h);
    return (inv_eps(t + h) - inv_eps(lo)) / (t + h - lo);
}

void CoolingSchedule::validate_monotone(double t_lo, double t_hi, int grid_points) const {
    double prev = eps(t_lo);
    if (!(prev > 0.0)) throw InputError("schedule: eps must be positive");
    for (int i = 1; i <= grid_points; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / grid_points;
        const double e = eps(t);
        if (!(e > 0.0)) throw InputError("schedule: eps must be positive");
        if (e > prev * (1.0 + 1e-12) + 1e-15)
            throw InputError("schedule: eps must be non-increasing");
        prev = e;
    }
}

Divergence divergence_test(const CoolingSchedule& s, double E) {
    if (E < 0.0) throw InputError("divergence_test: E must be >= 0");
    // eps is non-increasing, so for E = 0 the integrand is bounded below by a
    // positive constant from any point where eps is finite.
    if (E == 0.0) return Divergence::Diverges;
    switch (s.kind()) {
        case CoolingSchedule::Kind::Constant:
            return Divergence::Diverges;
        case CoolingSchedule::Kind::Logarithmic:
            // integrand ~ sqrt(ln s / c) * s^{-E/c}: diverges iff E <= c
            return (E <= s.log_c()) ? Divergence::Diverges : Divergence::Converges;
        case CoolingSchedule::Kind::Table: {
            // window integrals over [2^k, 2^{k+1}); divergence is declared when
            // they fail to decay geometrically over 20 octaves
            auto integrand = [&](double t) {
                const double e = s.eps(t);
                return std::exp(-E / e) / std::sqrt(e);
            };
            double windows[20];
            for (int k = 0; k < 20; ++k) {
                const double a = std::ldexp(1.0, k);
                windows[k] = integrate_adaptive(integrand, a, 2.0 * a, 1e-9, 1e-300);
            }
            bool any_growth = false, all_decay = true;
            for (int k = 10; k < 19; ++k) {
                if (windows[k] <= 0.0) return Divergence::Inconclusive;
                const double ratio = windows[k + 1] / windows[k];
                if (ratio >= 0.98) any_growth = true;
                if (ratio > 0.7) all_decay = false;
            }
            if (any_growth) return Divergence::Diverges;
            if (all_decay) return Divergence::Converges;
            return Divergence::Inconclusive;
        }
    }
    return Divergence::Inconclusive;
}

bool inverse_beta_growth_check(const CoolingSchedule& s, double theta, double eta,
                               double t_min, double t_max, int points) {
    if (!(theta > 0.0) || !(eta > 0.0))
        throw InputError("inverse_beta_growth_check: theta, eta must be > 0");
    const double ratio = std::pow(t_max / t_min, 1.0 / (points - 1));
    double t = t_min;
    for (int i = 0; i < points; ++i, t *= ratio) {
        const double lhs = s.inv_beta_growth(t);
        const double rhs = 1.0 / ((theta + eta) * t);
        if (lhs > rhs * (1.0 + 1e-6) + 1e-15) return false;
    }
    return true;
}

}  // namespace vjump
