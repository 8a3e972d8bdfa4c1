#include "vjump/pdmp1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vjump/numerics.hpp"

namespace vjump {

// ---------------------------------------------------------------------------
// residual rate

ResidualRate ResidualRate::zero() { return constant(0.0); }

ResidualRate ResidualRate::constant(double rho) {
    if (rho < 0.0) throw InputError("residual rate: must be >= 0");
    ResidualRate r;
    r.kind_ = Kind::Constant;
    r.rho_ = rho;
    r.r_star_ = rho;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "const:%.17g", rho);
    r.label_ = buf;
    return r;
}

ResidualRate ResidualRate::piecewise_linear(
    std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2) throw InputError("residual rate table: need >= 2 points");
    double rmax = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].second < 0.0)
            throw InputError("residual rate table: values must be >= 0");
        if (i > 0 && !(pts[i].first > pts[i - 1].first))
            throw InputError("residual rate table: x must be strictly increasing");
        rmax = std::max(rmax, pts[i].second);
    }
    ResidualRate r;
    r.kind_ = Kind::Table;
    r.pts_ = std::move(pts);
    r.r_star_ = rmax;
    r.label_ = "table";
    return r;
}

ResidualRate ResidualRate::from_function(std::function<double(double)> f,
                                         double r_star) {
    if (!(r_star >= 0.0)) throw InputError("residual rate: r_star must be >= 0");
    ResidualRate r;
    r.kind_ = Kind::Function;
    r.fn_ = std::move(f);
    r.r_star_ = r_star;
    r.label_ = "function";
    return r;
}

ResidualRate ResidualRate::parse(const std::string& spec) {
    if (spec.rfind("const:", 0) == 0) {
        try {
            return constant(std::stod(spec.substr(6)));
        } catch (const std::logic_error&) {
            throw InputError("rate spec '" + spec + "': bad value");
        }
    }
    if (spec.rfind("file:", 0) == 0) {
        const std::string path = spec.substr(5);
        std::ifstream in(path);
        if (!in) throw InputError("rate spec '" + spec + "': cannot open file");
        std::vector<std::pair<double, double>> pts;
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            double x, v;
            if (ls >> x >> v) pts.emplace_back(x, v);
        }
        auto r = piecewise_linear(std::move(pts));
        r.label_ = spec;
        return r;
    }
    throw InputError("rate spec '" + spec + "': expected const:<rho> or file:<path>");
}

double ResidualRate::operator()(double x) const {
    switch (kind_) {
        case Kind::Constant:
            return rho_;
        case Kind::Table: {
            if (x <= pts_.front().first) return pts_.front().second;
            if (x >= pts_.back().first) return pts_.back().second;
            auto it = std::upper_bound(
                pts_.begin(), pts_.end(), x,
                [](double a, const std::pair<double, double>& b) { return a < b.first; });
            const auto [xb, vb] = *it;
            const auto [xa, va] = *(it - 1);
            return va + (vb - va) * (x - xa) / (xb - xa);
        }
        case Kind::Function: {
            const double v = fn_(x);
            if (v < 0.0) throw InputError("residual rate returned a negative value");
            return v;
        }
    }
    return 0.0;
}

namespace {

// first w with r0 w + m w^2/2 = F on a segment of length len (linear rate);
// returns +inf if the segment cannot absorb F, in which case F is reduced
double invert_linear_rate(double r0, double r1, double len, double& F) {
    const double seg = 0.5 * (r0 + r1) * len;
    if (seg < F) {
        F -= seg;
        return kInf;
    }
    const double m = (r1 - r0) / len;
    if (std::fabs(m) * len < 1e-14 * std::max(1.0, r0)) {
        return (r0 > 0.0) ? F / r0 : kInf;
    }
    const double disc = r0 * r0 + 2.0 * m * F;
    if (disc < 0.0) return kInf;
    const double sq = std::sqrt(disc);
    // stable quadratic root, picking the branch in [0, len]
    double w = (m > 0.0) ? (sq - r0) / m : (2.0 * F) / (r0 + sq);
    if (w < 0.0) w = 0.0;
    return std::min(w, len);
}

}  // namespace

double ResidualRate::invert(const State1D& s, double F) const {
    if (!(F > 0.0)) throw InputError("next_residual_jump: budget must be > 0");
    switch (kind_) {
        case Kind::Constant:
            return (rho_ > 0.0) ? F / rho_ : kInf;
        case Kind::Table: {
            double pos = s.x;
            double travelled = 0.0;
            // walk table segments in the direction of motion; outside the table
            // the rate is clamped constant
            for (int guard = 0; guard < 1 << 20; ++guard) {
                double next;
                if (s.y > 0) {
                    auto it = std::upper_bound(
                        pts_.begin(), pts_.end(), pos,
                        [](double a, const std::pair<double, double>& b) {
                            return a < b.first;
                        });
                    next = (it == pts_.end()) ? kInf : it->first;
                } else {
                    auto it = std::lower_bound(
                        pts_.begin(), pts_.end(), pos,
                        [](const std::pair<double, double>& a, double b) {
                            return a.first < b;
                        });
                    next = (it == pts_.begin()) ? -kInf : (it - 1)->first;
                }
                const double r0 = (*this)(pos);
                if (!std::isfinite(next)) {
                    // constant clamp to infinity
                    return (r0 > 0.0) ? travelled + F / r0 : kInf;
                }
                const double len = std::fabs(next - pos);
                if (len > 0.0) {
                    const double r1 = (*this)(next);
                    const double w = invert_linear_rate(r0, r1, len, F);
                    if (std::isfinite(w)) return travelled + w;
                    travelled += len;
                }
                pos = next + (s.y > 0 ? 1e-300 : -1e-300);
                if (s.y > 0 && pos >= pts_.back().first) {
                    const double rc = pts_.back().second;
                    return (rc > 0.0) ? travelled + F / rc : kInf;
                }
                if (s.y < 0 && pos <= pts_.front().first) {
                    const double rc = pts_.front().second;
                    return (rc > 0.0) ? travelled + F / rc : kInf;
                }
            }
            throw NumericError("next_residual_jump: table walk did not terminate");
        }
        case Kind::Function: {
            auto rate = [&](double w) { return (*this)(s.x + s.y * w); };
            double a = 0.0, acc = 0.0, win = 1.0;
            for (int k = 0; k < 200; ++k) {
                const double seg = integrate_adaptive(rate, a, a + win, 1e-12, 1e-14);
                if (acc + seg >= F) {
                    const double need = F - acc;
                    auto cum = [&](double w) {
                        return integrate_adaptive(rate, a, w, 1e-12, 1e-14) - need;
                    };
                    return bisect(cum, a, a + win, 1e-12);
                }
                acc += seg;
                a += win;
                win *= 2.0;
                if (acc == 0.0 && a > 1e6) return kInf;  // rate is effectively zero ahead
            }
            return kInf;
        }
    }
    return kInf;
}

// ---------------------------------------------------------------------------
// minimal-rate jump clock

namespace {

// next stretch boundary strictly ahead of pos in direction y, or +-inf
double next_bound(const std::vector<double>& bounds, double pos, int y) {
    if (y > 0) {
        auto it = std::upper_bound(bounds.begin(), bounds.end(), pos);
        return (it == bounds.end()) ? kInf : *it;
    }
    auto it = std::lower_bound(bounds.begin(), bounds.end(), pos);
    return (it == bounds.begin()) ? -kInf : *(it - 1);
}

}  // namespace

double next_minimal_jump(const Potential1D& p, const State1D& s,
                         const CoolingSchedule& sched, double E) {
    if (!(E > 0.0)) throw InputError("next_minimal_jump: budget must be > 0");
    const auto& bounds = p.stretch_bounds();
    const bool const_eps = sched.is_constant();
    const double eps = const_eps ? sched.eps(0.0) : 0.0;

    double remaining = E;
    double pos = s.x;
    double tc = s.t;
    const int y = s.y;

    for (int guard = 0; guard < 1 << 22; ++guard) {
        const double q = next_bound(bounds, pos, y);
        const bool tail = !std::isfinite(q);
        const double len = tail ? kInf : std::fabs(q - pos);
        if (!tail && len <= 0.0) {
            pos = q;
            continue;
        }

        // sign of y U' on the stretch interior
        const double probe = tail ? pos + y * 1.0 : 0.5 * (pos + q);
        const bool climbing = y * p.slope(probe) > 0.0;

        if (!climbing) {
            if (tail) return kInf;  // downhill forever, rate identically zero
            tc += len;
            pos = q;
            continue;
        }

        if (const_eps) {
            const double u_here = p.value(pos);
            const double target = u_here + remaining * eps;
            if (!tail) {
                const double avail = (p.value(q) - u_here) / eps;
                if (avail <= remaining) {
                    remaining -= std::max(avail, 0.0);
                    tc += len;
                    pos = q;
                    continue;
                }
            }
            // crossing inside this stretch (or in the rising tail)
            double llo = 0.0, lhi;
            if (tail) {
                lhi = 1.0;
                while (p.value(pos + y * lhi) < target) {
                    llo = lhi;
                    lhi *= 2.0;
                    if (lhi > 1e300)
                        throw NumericError("next_minimal_jump: tail bracket failed");
                }
            } else {
                lhi = len;
            }
            if (p.is_piecewise_linear() && !tail) {
                const double slope = std::fabs(p.slope(probe));
                return tc + remaining * eps / slope;
            }
            auto f = [&](double d) { return p.value(pos + y * d) - target; };
            auto df = [&](double d) { return y * p.slope(pos + y * d); };
            const double d = solve_monotone(f, df, llo, lhi, 1e-12);
            return tc + d;
        }

        // time-dependent temperature
        if (p.is_piecewise_linear()) {
            const double slope = std::fabs(p.slope(probe));
            if (!tail) {
                const double avail = slope * sched.beta_integral(tc, tc + len);
                if (avail <= remaining) {
                    remaining -= std::max(avail, 0.0);
                    tc += len;
                    pos = q;
                    continue;
                }
            }
            double llo = 0.0, lhi;
            if (tail) {
                lhi = 1.0;
                while (slope * sched.beta_integral(tc, tc + lhi) < remaining) {
                    llo = lhi;
                    lhi *= 2.0;
                    if (lhi > 1e300)
                        throw NumericError("next_minimal_jump: tail bracket failed");
                }
            } else {
                lhi = len;
            }
            auto f = [&](double d) {
                return slope * sched.beta_integral(tc, tc + d) - remaining;
            };
            auto df = [&](double d) { return slope * sched.inv_eps(tc + d); };
            return tc + solve_monotone(f, df, llo, lhi, 1e-12);
        }

        // smooth potential, varying temperature: adaptive quadrature on the
        // stretch, kinks only occur at its ends
        auto integrand = [&](double u) {
            return y * p.slope(pos + y * (u - tc)) * sched.inv_eps(u);
        };
        const double qtol = 1e-10 * E;
        double t_end;
        if (tail) {
            double span = 1.0;
            while (integrate_adaptive(integrand, tc, tc + span, 1e-12, qtol) <
                   remaining) {
                span *= 2.0;
                if (span > 1e12)
                    throw NumericError("next_minimal_jump: tail bracket failed");
            }
            t_end = tc + span;
        } else {
            t_end = tc + len;
            const double avail = integrate_adaptive(integrand, tc, t_end, 1e-12, qtol);
            if (avail <= remaining) {
                remaining -= std::max(avail, 0.0);
                tc = t_end;
                pos = q;
                continue;
            }
        }
        auto cum = [&](double t) {
            return integrate_adaptive(integrand, tc, t, 1e-12, qtol) - remaining;
        };
        auto dcum = [&](double t) { return integrand(t); };
        return solve_monotone(cum, dcum, tc, t_end, 1e-12);
    }
    throw NumericError("next_minimal_jump: stretch walk did not terminate");
}

double next_residual_jump(const ResidualRate& r, const State1D& s, double F) {
    return r.invert(s, F);
}

// ---------------------------------------------------------------------------

SimResult1D simulate(const Potential1D& p, State1D s0, const CoolingSchedule& sched,
                     const ResidualRate& r, const StopRule& stop, Rng& rng,
                     EventLog1D* log) {
    SimResult1D res;
    State1D st = s0;
    const bool has_res = !r.is_zero();

    for (long guard = 0;; ++guard) {
        if (guard >= 1000000000L)
            throw NumericError("simulate: event guard exceeded (1e9 events)");

        const double E = rng.exponential();
        const double F = has_res ? rng.exponential() : 0.0;
        const double t_min = next_minimal_jump(p, st, sched, E);
        const double t_res = has_res ? st.t + r.invert(st, F) : kInf;

        double t_hit = kInf, hit_x = 0.0;
        for (double xs : stop.hits) {
            const double d = (xs - st.x) * st.y;
            if (d > 0.0 && st.t + d < t_hit) {
                t_hit = st.t + d;
                hit_x = xs;
            }
        }
        const double t_hor = stop.horizon ? *stop.horizon : kInf;
        const double t_jump = std::min(t_min, t_res);

        if (t_hit <= t_jump && t_hit <= t_hor) {
            st.x = hit_x;
            st.t = t_hit;
            if (log) log->push_back({st.t, st.x, Event1DKind::Hit, 0.0});
            res.state = st;
            res.stop_kind = Event1DKind::Hit;
            res.stop_hit_position = hit_x;
            return res;
        }
        if (t_hor <= t_jump) {
            st.x += st.y * (t_hor - st.t);
            st.t = t_hor;
            if (log) log->push_back({st.t, st.x, Event1DKind::Horizon, 0.0});
            res.state = st;
            res.stop_kind = Event1DKind::Horizon;
            return res;
        }
        if (!std::isfinite(t_jump))
            throw NumericError("simulate: no jump and no stop condition ahead");

        const bool minimal = t_min <= t_res;
        st.x += st.y * (t_jump - st.t);
        st.t = t_jump;
        st.y = -st.y;
        if (minimal)
            ++res.n_minimal;
        else
            ++res.n_residual;
        if (log)
            log->push_back({st.t, st.x,
                            minimal ? Event1DKind::FlipMinimal
                                    : Event1DKind::FlipResidual,
                            minimal ? E : F});
    }
}

std::vector<double> first_hitting_time_batch(const Potential1D& p, const State1D& s0,
                                             const CoolingSchedule& sched,
                                             const ResidualRate& r, double x_star,
                                             int n_runs, std::uint64_t seed) {
    if (n_runs < 1) throw InputError("first_hitting_time_batch: n_runs must be >= 1");
    std::vector<double> out(n_runs);
    StopRule stop;
    stop.hits = {x_star};
    for (int i = 0; i < n_runs; ++i) {
        Rng rng = Rng::for_run(seed, static_cast<std::uint64_t>(i));
        out[i] = simulate(p, s0, sched, r, stop, rng).state.t;
    }
    return out;
}

double escape_probability_formula(const Potential1D& p, const ResidualRate& r,
                                  double eps, double x0, double x1) {
    if (!(eps > 0.0)) throw InputError("escape_probability_formula: eps must be > 0");
    if (!(x0 < x1)) throw InputError("escape_probability_formula: need x0 < x1");
    const double u1 = p.value(x1);
    const double num = std::exp(-(u1 - p.value(x0)) / eps);
    double den = 1.0;
    if (!r.is_zero()) {
        den += integrate_adaptive(
            [&](double z) { return r(z) * std::exp(-(u1 - p.value(z)) / eps); }, x0, x1,
            1e-10, 1e-14);
    }
    return num / den;
}

double escape_probability_formula(const Potential1D& p, const ResidualRate& r,
                                  double eps) {
    const auto& crit = p.critical_points();
    for (std::size_t i = 0; i + 1 < crit.size(); ++i) {
        if (crit[i].kind == CritKind::Minimum &&
            crit[i + 1].kind == CritKind::Maximum)
            return escape_probability_formula(p, r, eps, crit[i].x, crit[i + 1].x);
    }
    throw InputError("escape_probability_formula: no min/max pair in potential");
}

}  // namespace vjump
