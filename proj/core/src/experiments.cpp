#include "vjump/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "vjump/landscape.hpp"
#include "vjump/numerics.hpp"

namespace vjump::experiments {

void parallel_runs(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::atomic<bool> failed{false};
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    failed.store(true);
                    throw;  // terminates; run failures are programming errors here
                }
            }
        });
    }
    for (auto& t : pool) t.join();
}

namespace {

std::pair<double, double> first_min_max(const Potential1D& p) {
    const auto& crit = p.critical_points();
    for (std::size_t i = 0; i + 1 < crit.size(); ++i)
        if (crit[i].kind == CritKind::Minimum && crit[i + 1].kind == CritKind::Maximum)
            return {crit[i].x, crit[i + 1].x};
    throw InputError("experiment: potential has no minimum/maximum pair");
}

}  // namespace

TauBatch hitting_batch(const Potential1D& p, const CoolingSchedule& sched,
                       const ResidualRate& r, State1D s0, double x_star, int runs,
                       std::uint64_t seed, int threads) {
    TauBatch out;
    out.eps = sched.is_constant() ? sched.constant_eps() : 0.0;
    out.tau.resize(runs);
    out.flips_minimal.resize(runs);
    out.flips_residual.resize(runs);
    StopRule stop;
    stop.hits = {x_star};
    parallel_runs(runs, threads, [&](int i) {
        Rng rng = Rng::for_run(seed, static_cast<std::uint64_t>(i));
        auto res = simulate(p, s0, sched, r, stop, rng);
        out.tau[i] = res.state.t;
        out.flips_minimal[i] = res.n_minimal;
        out.flips_residual[i] = res.n_residual;
    });
    return out;
}

OneShot one_shot_escape(const Potential1D& p, const CoolingSchedule& sched,
                        const ResidualRate& r, int attempts, std::uint64_t seed) {
    const auto [x0, x1] = first_min_max(p);
    OneShot res;
    res.attempts = attempts;
    StopRule stop;
    stop.hits = {x0, x1};
    for (int i = 0; i < attempts; ++i) {
        Rng rng = Rng::for_run(seed, static_cast<std::uint64_t>(i));
        State1D s{x0, +1, 0.0};
        auto r1 = simulate(p, s, sched, r, stop, rng);
        if (r1.stop_hit_position == x1) ++res.escapes;
    }
    return res;
}

std::vector<double> excursion_lengths(const Potential1D& p, double eps,
                                      const ResidualRate& r, int n,
                                      std::uint64_t seed) {
    const auto [x0, x1] = first_min_max(p);
    const auto sched = CoolingSchedule::constant(eps);
    std::vector<double> out(n);
    StopRule stop;
    stop.hits = {x0, x1};
    for (int i = 0; i < n; ++i) {
        Rng rng = Rng::for_run(seed, static_cast<std::uint64_t>(i));
        State1D s{x0, +1, 0.0};
        out[i] = simulate(p, s, sched, r, stop, rng).state.t;
    }
    return out;
}

std::vector<double> positions_at_time(const Potential1D& p,
                                      const CoolingSchedule& sched,
                                      const ResidualRate& r, State1D s0,
                                      double horizon, int runs, std::uint64_t seed,
                                      int threads) {
    std::vector<double> out(runs);
    StopRule stop;
    stop.horizon = horizon;
    parallel_runs(runs, threads, [&](int i) {
        Rng rng = Rng::for_run(seed, static_cast<std::uint64_t>(i));
        out[i] = simulate(p, s0, sched, r, stop, rng).state.x;
    });
    return out;
}

Occupation1D occupation_1d(const Potential1D& p, double eps, double horizon,
                           int bins, std::uint64_t seed, State1D s0) {
    const auto sched = CoolingSchedule::constant(eps);
    const auto rate = ResidualRate::zero();
    Rng rng(seed);
    EventLog1D log;
    StopRule stop;
    stop.horizon = horizon;
    auto res = simulate(p, s0, sched, rate, stop, rng, &log);

    Occupation1D occ;
    occ.lo = p.lo();
    occ.hi = p.hi();
    occ.flips = res.n_minimal + res.n_residual;
    occ.mass.assign(bins, 0.0);
    const double w = (occ.hi - occ.lo) / bins;

    double t_prev = s0.t, x_prev = s0.x;
    int y = s0.y;
    double plus_time = 0.0, in_domain = 0.0;
    auto accumulate = [&](double t_next, double x_next) {
        const double a = std::min(x_prev, x_next), b = std::max(x_prev, x_next);
        if (y > 0) plus_time += t_next - t_prev;
        const double lo_c = std::max(a, occ.lo), hi_c = std::min(b, occ.hi);
        if (hi_c > lo_c) {
            in_domain += hi_c - lo_c;
            int b0 = std::clamp(int((lo_c - occ.lo) / w), 0, bins - 1);
            int b1 = std::clamp(int((hi_c - occ.lo) / w), 0, bins - 1);
            for (int bi = b0; bi <= b1; ++bi) {
                const double ba = occ.lo + bi * w, bb = ba + w;
                const double ov = std::min(bb, hi_c) - std::max(ba, lo_c);
                if (ov > 0.0) occ.mass[bi] += ov;
            }
        }
    };
    for (const auto& ev : log) {
        accumulate(ev.t, ev.x);
        t_prev = ev.t;
        x_prev = ev.x;
        if (ev.kind == Event1DKind::FlipMinimal || ev.kind == Event1DKind::FlipResidual)
            y = -y;
    }
    if (in_domain > 0.0)
        for (auto& m : occ.mass) m /= in_domain;
    occ.vel_plus_fraction = plus_time / (res.state.t - s0.t);
    return occ;
}

std::vector<Anneal1DRow> anneal_1d(const Potential1D& p, const CoolingSchedule& sched,
                                   double horizon, int runs, std::uint64_t seed,
                                   std::optional<double> start, int threads) {
    std::vector<Anneal1DRow> out(runs);
    const auto rate = ResidualRate::zero();
    StopRule stop;
    stop.horizon = horizon;
    parallel_runs(runs, threads, [&](int i) {
        Rng rng = Rng::for_run(seed, static_cast<std::uint64_t>(i));
        State1D s0;
        s0.x = start ? *start : p.lo() + (p.hi() - p.lo()) * rng.uniform01();
        s0.y = rng.uniform01() < 0.5 ? -1 : +1;
        s0.t = 0.0;
        auto res = simulate(p, s0, sched, rate, stop, rng);
        out[i] = {res.state.x, p.value(res.state.x),
                  res.n_minimal + res.n_residual};
    });
    return out;
}

// ---------------------------------------------------------------------------

std::vector<double> torus_energy_gibbs(const PotentialTorus& p, double eps,
                                       int grid_per_axis, int bins, double* u_lo,
                                       double* u_hi) {
    const int d = p.dim();
    if (d > 3) throw InputError("torus_energy_gibbs: grid oracle limited to d <= 3");
    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(std::pow(grid_per_axis, d)));
    for (;;) {
        for (int i = 0; i < d; ++i) x[i] = (idx[i] + 0.5) / grid_per_axis;
        values.push_back(p.value(x));
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < grid_per_axis) break;
            idx[i] = 0;
        }
        if (i == d) break;
    }
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    *u_lo = *mn;
    *u_hi = *mx + 1e-12 * (1.0 + std::fabs(*mx));
    std::vector<double> mass(bins, 0.0);
    double z = 0.0;
    for (double u : values) {
        const double w = std::exp(-(u - *u_lo) / eps);
        int b = int((u - *u_lo) / (*u_hi - *u_lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        mass[b] += w;
        z += w;
    }
    for (auto& m : mass) m /= z;
    return mass;
}

TorusOccupation torus_energy_occupation(const PotentialTorus& p, double eps,
                                        double refresh, double horizon, double dt,
                                        int bins, double u_lo, double u_hi,
                                        std::uint64_t seed) {
    TorusOccupation occ;
    occ.u_lo = u_lo;
    occ.u_hi = u_hi;
    occ.mass.assign(bins, 0.0);
    const int d = p.dim();

    StateTorus s0;
    s0.x.assign(d, 0.25);
    s0.y.assign(d, 0.0);
    Rng rng(seed);
    sample_uniform_sphere(d, rng, s0.y);

    std::vector<double> pos(d);
    double sample_clock = 0.0;
    long n_samples = 0;
    auto cb = [&](double t0, double t1, std::span<const double> x0,
                  std::span<const double> y) {
        // stratified samples every dt along the segment
        double t = sample_clock;
        while (t <= t1) {
            if (t >= t0) {
                for (int i = 0; i < d; ++i) {
                    double v = std::fmod(x0[i] + y[i] * (t - t0), 1.0);
                    if (v < 0.0) v += 1.0;
                    pos[i] = v;
                }
                const double u = p.value(pos);
                int b = int((u - u_lo) / (u_hi - u_lo) * bins);
                b = std::clamp(b, 0, bins - 1);
                occ.mass[b] += 1.0;
                ++n_samples;
            }
            t += dt;
        }
        sample_clock = t;
    };
    const auto sched = CoolingSchedule::constant(eps);
    auto res = simulate_torus(p, std::move(s0), sched, refresh, horizon, rng, nullptr,
                              {}, nullptr, cb);
    occ.n_reflect = res.n_reflect;
    occ.n_refresh = res.n_refresh;
    if (n_samples > 0)
        for (auto& m : occ.mass) m /= static_cast<double>(n_samples);
    return occ;
}

std::vector<double> torus_position_gibbs_2d(const PotentialTorus& p, double eps,
                                            int quad_grid, int bins) {
    if (p.dim() != 2) throw InputError("torus_position_gibbs_2d: dim must be 2");
    std::vector<double> mass(static_cast<std::size_t>(bins) * bins, 0.0);
    std::vector<double> x(2);
    double z = 0.0, shift = kInf;
    for (int i = 0; i < quad_grid; ++i)
        for (int j = 0; j < quad_grid; ++j) {
            x[0] = (i + 0.5) / quad_grid;
            x[1] = (j + 0.5) / quad_grid;
            shift = std::min(shift, p.value(x));
        }
    for (int i = 0; i < quad_grid; ++i)
        for (int j = 0; j < quad_grid; ++j) {
            x[0] = (i + 0.5) / quad_grid;
            x[1] = (j + 0.5) / quad_grid;
            const double w = std::exp(-(p.value(x) - shift) / eps);
            const int bi = std::clamp(int(x[0] * bins), 0, bins - 1);
            const int bj = std::clamp(int(x[1] * bins), 0, bins - 1);
            mass[static_cast<std::size_t>(bi) * bins + bj] += w;
            z += w;
        }
    for (auto& m : mass) m /= z;
    return mass;
}

std::vector<TorusRun> torus_ensemble(const PotentialTorus& p,
                                     const CoolingSchedule& sched, double refresh,
                                     double horizon,
                                     std::span<const double> checkpoint_times,
                                     StateTorus s0, bool random_velocity, int runs,
                                     std::uint64_t seed, int threads) {
    std::vector<TorusRun> out(runs);
    const int d = p.dim();
    parallel_runs(runs, threads, [&](int i) {
        Rng rng = Rng::for_run(seed, static_cast<std::uint64_t>(i));
        StateTorus s = s0;
        if (random_velocity) {
            s.y.assign(d, 0.0);
            sample_uniform_sphere(d, rng, s.y);
        }
        TorusRun& row = out[i];
        auto res = simulate_torus(p, std::move(s), sched, refresh, horizon, rng,
                                  nullptr, checkpoint_times, &row.checkpoints);
        row.final_state = std::move(res.state);
        row.n_reflect = res.n_reflect;
        row.n_refresh = res.n_refresh;
    });
    return out;
}

std::vector<double> thinning_times(const PotentialTorus& p,
                                   const CoolingSchedule& sched, StateTorus s0,
                                   int n, std::uint64_t seed, double t_cap) {
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        Rng rng = Rng::for_run(seed, static_cast<std::uint64_t>(i));
        auto ev = next_reflection_time_thinning(p, s0, sched, rng, t_cap);
        out.push_back(ev ? ev->t : kInf);
    }
    return out;
}

}  // namespace vjump::experiments
