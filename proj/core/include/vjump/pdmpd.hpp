#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vjump/potential.hpp"
#include "vjump/rng.hpp"
#include "vjump/schedule.hpp"

namespace vjump {

// State on [0,1)^d x S^{d-1}.
struct StateTorus {
    std::vector<double> x;
    std::vector<double> y;
    double t = 0.0;
};

enum class TorusEventKind { Reflect, Refresh, Horizon };

struct TorusEvent {
    double t;
    std::vector<double> x;
    std::vector<double> y_before;
    std::vector<double> y_after;
    TorusEventKind kind;
};

using EventLogTorus = std::vector<TorusEvent>;

// Mirror of y across the hyperplane orthogonal to g: y - 2 (y.n) n with
// n = g/|g|.  Throws on |g| <= 1e-14.  Renormalizes when the result drifts
// off the unit sphere by more than 1e-13.
std::vector<double> reflect(std::span<const double> y, std::span<const double> g);
void reflect_inplace(std::span<double> y, std::span<const double> g);

void sample_uniform_sphere(int d, Rng& rng, std::span<double> out);

struct ThinnedEvent {
    double t;                   // event time (absolute)
    std::vector<double> grad;   // gradient at the event position
};

// Exact-in-distribution reflection time by thinning against the bound
// grad_sup/eps over unit lookahead windows (the bound is re-evaluated at each
// window end, valid for non-increasing schedules).  Returns nullopt when no
// proposal is accepted before t_cap.  Throws if an acceptance ratio exceeds
// 1 + 1e-12, which means the declared grad_sup is not a true bound.
std::optional<ThinnedEvent> next_reflection_time_thinning(const PotentialTorus& p,
                                                          const StateTorus& s,
                                                          const CoolingSchedule& sched,
                                                          Rng& rng, double t_cap);

struct TorusSimResult {
    StateTorus state;
    long n_reflect = 0;
    long n_refresh = 0;
};

// Deterministic flight x <- x + y dt (mod 1) raced between the reflection
// clock and an Exp(r) velocity refreshment clock.  A zero gradient at an
// accepted reflection is treated as a refresh.  segment_cb, when set, is
// called with (t0, t1, x(t0), y) for every linear flight segment.
using SegmentCallback =
    std::function<void(double, double, std::span<const double>, std::span<const double>)>;

TorusSimResult simulate_torus(const PotentialTorus& p, StateTorus s0,
                              const CoolingSchedule& sched, double refresh_rate,
                              double horizon, Rng& rng, EventLogTorus* log = nullptr,
                              std::span<const double> checkpoint_times = {},
                              std::vector<StateTorus>* checkpoints = nullptr,
                              const SegmentCallback& segment_cb = nullptr);

}  // namespace vjump
