#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace vjump {

// Raised when an iterative routine cannot reach its requested tolerance.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised on malformed inputs (bad file, bad spec string, broken precondition).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes on [0,1]: abscissa, Gauss weight, Kronrod weight.
inline constexpr double kG7K15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.000000000000000, 0.204432940075298},
    {0.586087235467691, 0.000000000000000, 0.169004726639267},
    {0.864864423359769, 0.000000000000000, 0.104790010322250},
    {0.991455371120813, 0.000000000000000, 0.022935322010529},
};

template <class F>
inline void g7k15(F&& f, double a, double b, double& k15, double& err) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = kG7K15[0][1] * f0;
    double k = kG7K15[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = hw * kG7K15[i][0];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += kG7K15[i][1] * fi;
        k += kG7K15[i][2] * fi;
    }
    g7 *= hw;
    k *= hw;
    k15 = k;
    err = std::fabs(k - g7);
}

}  // namespace detail

// Adaptive G7K15 integration of f over [a,b].  Subdivides until the panel
// error estimate meets max(abs_tol, rel_tol*|whole|); throws NumericError if
// the recursion depth limit is hit first.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-10,
                          double abs_tol = 0.0, int max_depth = 52) {
    if (a == b) return 0.0;
    double whole, err0;
    detail::g7k15(f, a, b, whole, err0);

    struct Panel {
        double a, b, value, err;
        int depth;
    };
    // explicit stack, worst panel first is unnecessary: plain DFS
    Panel stack[256];
    int top = 0;
    stack[top++] = {a, b, whole, err0, 0};
    double total = 0.0;
    double budget_scale = std::fabs(whole);

    while (top > 0) {
        Panel p = stack[--top];
        const double tol =
            std::max(abs_tol, rel_tol * std::max(budget_scale, std::fabs(total))) *
            std::max(1e-3, std::fabs(p.b - p.a) / std::fabs(b - a));
        if (p.err <= tol || p.err <= abs_tol + rel_tol * std::fabs(p.value)) {
            total += p.value;
            continue;
        }
        if (p.depth >= max_depth || top >= 250)
            throw NumericError("adaptive quadrature: tolerance not met");
        const double m = 0.5 * (p.a + p.b);
        double vl, el, vr, er;
        detail::g7k15(f, p.a, m, vl, el);
        detail::g7k15(f, m, p.b, vr, er);
        stack[top++] = {p.a, m, vl, el, p.depth + 1};
        stack[top++] = {m, p.b, vr, er, p.depth + 1};
        budget_scale = std::max(budget_scale, std::fabs(vl) + std::fabs(vr));
    }
    return total;
}

// Root of a monotone function on [lo,hi] by Newton steps guarded with a
// bisection bracket.  f(lo) and f(hi) must straddle zero.  Converges to
// |x - root| < x_tol.
template <class F, class DF>
double solve_monotone(F&& f, DF&& df, double lo, double hi, double x_tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericError("solve_monotone: root not bracketed");
    const bool increasing = flo < 0.0;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = f(x);
        if ((fx > 0.0) == increasing)
            hi = x;
        else
            lo = x;
        if (hi - lo < x_tol) return 0.5 * (lo + hi);
        const double d = df(x);
        double xn = (d != 0.0) ? x - fx / d : lo;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // Newton left the bracket
        x = xn;
    }
    return 0.5 * (lo + hi);
}

// Plain bisection for when no derivative is available.
template <class F>
double bisect(F&& f, double lo, double hi, double x_tol) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    const bool increasing = flo < 0.0;
    for (int it = 0; it < 400 && hi - lo > x_tol; ++it) {
        const double m = 0.5 * (lo + hi);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == increasing)
            hi = m;
        else
            lo = m;
    }
    return 0.5 * (lo + hi);
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace vjump
