#include "vjump/pdmpd.hpp"

#include <algorithm>
#include <cmath>

#include "vjump/numerics.hpp"

namespace vjump {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void wrap01(std::span<double> x) {
    for (auto& v : x) {
        v = std::fmod(v, 1.0);
        if (v < 0.0) v += 1.0;
    }
}

}  // namespace

void reflect_inplace(std::span<double> y, std::span<const double> g) {
    const double gn = norm(g);
    if (gn <= 1e-14)
        throw NumericError("reflect: zero gradient, reflection undefined");
    double proj = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) proj += y[i] * g[i] / gn;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= 2.0 * proj * g[i] / gn;
    const double yn = norm(y);
    if (std::fabs(yn - 1.0) > 1e-13)
        for (auto& v : y) v /= yn;
}

std::vector<double> reflect(std::span<const double> y, std::span<const double> g) {
    std::vector<double> out(y.begin(), y.end());
    reflect_inplace(out, g);
    return out;
}

void sample_uniform_sphere(int d, Rng& rng, std::span<double> out) {
    if (d < 1) throw InputError("sample_uniform_sphere: d must be >= 1");
    for (;;) {
        for (int i = 0; i < d; ++i) out[i] = rng.normal();
        const double n = norm(out.first(d));
        if (n >= 1e-8) {
            for (int i = 0; i < d; ++i) out[i] /= n;
            return;
        }
    }
}

std::optional<ThinnedEvent> next_reflection_time_thinning(const PotentialTorus& p,
                                                          const StateTorus& s,
                                                          const CoolingSchedule& sched,
                                                          Rng& rng, double t_cap) {
    const int d = p.dim();
    const double gsup = p.grad_sup();
    if (!(gsup >= 0.0) || !std::isfinite(gsup))
        throw InputError("thinning: grad_sup must be finite");
    if (gsup == 0.0) return std::nullopt;

    std::vector<double> pos(d), grad(d);
    double w_lo = s.t;
    while (w_lo < t_cap) {
        const double w_hi = std::min(w_lo + 1.0, t_cap);
        // eps is non-increasing, so the rate bound over [w_lo, w_hi] is
        // attained at the window end
        const double lam = gsup * sched.inv_eps(w_hi);
        if (lam <= 0.0) {
            w_lo = w_hi;
            continue;
        }
        double u = w_lo;
        for (;;) {
            u += rng.exponential() / lam;
            if (u >= w_hi) break;
            for (int i = 0; i < d; ++i) pos[i] = s.x[i] + s.y[i] * (u - s.t);
            wrap01(pos);
            p.gradient(pos, grad);
            const double rate = std::max(dot(s.y, grad), 0.0) * sched.inv_eps(u);
            const double ratio = rate / lam;
            if (ratio > 1.0 + 1e-12)
                throw NumericError(
                    "thinning: acceptance ratio above 1, grad_sup is not a valid "
                    "bound");
            if (rng.uniform01() < ratio) return ThinnedEvent{u, grad};
        }
        w_lo = w_hi;
    }
    return std::nullopt;
}

TorusSimResult simulate_torus(const PotentialTorus& p, StateTorus s0,
                              const CoolingSchedule& sched, double refresh_rate,
                              double horizon, Rng& rng, EventLogTorus* log,
                              std::span<const double> checkpoint_times,
                              std::vector<StateTorus>* checkpoints,
                              const SegmentCallback& segment_cb) {
    const int d = p.dim();
    if (static_cast<int>(s0.x.size()) != d || static_cast<int>(s0.y.size()) != d)
        throw InputError("simulate_torus: state dimension mismatch");
    if (!(refresh_rate > 0.0))
        throw InputError("simulate_torus: refresh rate must be > 0 (ergodicity)");

    TorusSimResult res;
    StateTorus st = std::move(s0);
    wrap01(st.x);
    std::size_t next_cp = 0;
    while (next_cp < checkpoint_times.size() && checkpoint_times[next_cp] < st.t)
        ++next_cp;

    auto advance_to = [&](double t_new) {
        if (segment_cb) segment_cb(st.t, t_new, st.x, st.y);
        while (next_cp < checkpoint_times.size() &&
               checkpoint_times[next_cp] <= t_new) {
            const double tc = checkpoint_times[next_cp];
            StateTorus snap;
            snap.t = tc;
            snap.y = st.y;
            snap.x = st.x;
            for (int i = 0; i < d; ++i) snap.x[i] += st.y[i] * (tc - st.t);
            wrap01(snap.x);
            if (checkpoints) checkpoints->push_back(std::move(snap));
            ++next_cp;
        }
        for (int i = 0; i < d; ++i) st.x[i] += st.y[i] * (t_new - st.t);
        wrap01(st.x);
        st.t = t_new;
    };

    for (long guard = 0;; ++guard) {
        if (guard >= 1000000000L)
            throw NumericError("simulate_torus: event guard exceeded (1e9 events)");

        const double t_refresh = st.t + rng.exponential() / refresh_rate;
        const double t_cap = std::min(t_refresh, horizon);
        auto hit = next_reflection_time_thinning(p, st, sched, rng, t_cap);

        if (!hit) {
            if (t_refresh >= horizon) {
                advance_to(horizon);
                if (log) log->push_back({st.t, st.x, st.y, st.y, TorusEventKind::Horizon});
                res.state = st;
                return res;
            }
            advance_to(t_refresh);
            std::vector<double> y_old = st.y;
            sample_uniform_sphere(d, rng, st.y);
            ++res.n_refresh;
            if (log)
                log->push_back({st.t, st.x, std::move(y_old), st.y,
                                TorusEventKind::Refresh});
            continue;
        }

        advance_to(hit->t);
        std::vector<double> y_old = st.y;
        const double gn = norm(hit->grad);
        if (gn <= 1e-14) {
            // zero gradient at an accepted reflection: any unit vector is a
            // valid mirror image, treat it as a refresh
            sample_uniform_sphere(d, rng, st.y);
            ++res.n_refresh;
            if (log)
                log->push_back({st.t, st.x, std::move(y_old), st.y,
                                TorusEventKind::Refresh});
            continue;
        }
        reflect_inplace(st.y, hit->grad);
        ++res.n_reflect;
        if (log)
            log->push_back({st.t, st.x, std::move(y_old), st.y,
                            TorusEventKind::Reflect});
    }
}

}  // namespace vjump
