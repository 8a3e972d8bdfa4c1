#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vjump {

enum class CritKind { Minimum, Maximum };

struct CriticalPoint {
    double x;
    CritKind kind;
    double value;
};

// One-dimensional energy potential with exact first and second derivatives.
// Outside [lo, hi] the potential is taken to extend monotonically toward
// +infinity on each side (the built-in families all do).  Piecewise-linear
// potentials carry their breakpoints; their critical points come straight
// from the breakpoint list and curvature() is identically zero.
class Potential1D {
public:
    using Fn = std::function<double(double)>;

    static Potential1D quartic_double_well(double tilt = 0.0, double lo = -3.0,
                                           double hi = 3.0);
    static Potential1D piecewise_linear(std::vector<std::pair<double, double>> pts);
    // natural cubic spline through control points, linear beyond the ends
    static Potential1D piecewise_cubic(std::vector<std::pair<double, double>> pts);
    static Potential1D from_functions(Fn u, Fn du, Fn d2u, double lo, double hi,
                                      int grid_n = 4096, std::string label = "custom");
    // caller supplies the stationary points; for potentials outside the Morse
    // class (flat pieces) that the scanning constructor rightly rejects
    static Potential1D from_functions_with_critical_points(
        Fn u, Fn du, Fn d2u, double lo, double hi, std::vector<CriticalPoint> crit,
        std::string label = "custom");
    static Potential1D parse(const std::string& text);
    static Potential1D from_file(const std::string& path);
    // built-in names accepted by the CLI ("quartic", "quartic:tilt=-0.1", "wwell")
    static Potential1D named(const std::string& name);

    double value(double x) const { return u_(x); }
    double slope(double x) const { return du_(x); }
    double curvature(double x) const { return d2u_(x); }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool is_piecewise_linear() const { return pw_linear_; }

    const std::vector<CriticalPoint>& critical_points() const { return crit_; }
    // positions splitting rays into monotone stretches (critical points, or
    // every breakpoint for piecewise-linear potentials)
    const std::vector<double>& stretch_bounds() const { return stretch_; }
    const std::vector<std::pair<double, double>>& breakpoints() const { return pts_; }

    const std::string& describe() const { return label_; }

private:
    Potential1D() = default;
    Fn u_, du_, d2u_;
    double lo_ = 0.0, hi_ = 0.0;
    bool pw_linear_ = false;
    std::vector<CriticalPoint> crit_;
    std::vector<double> stretch_;
    std::vector<std::pair<double, double>> pts_;  // breakpoints / control points
    std::string label_ = "custom";
};

// Scan [lo,hi] on grid_n points for sign changes of du, refine each root by
// bisection to an interval below 1e-12, and classify by the sign of d2u.
// Throws NumericError when the Morse condition |d2u| >= 1e-8 fails at a root
// or when two roots collide at the grid resolution.
std::vector<CriticalPoint> locate_critical_points(
    const std::function<double(double)>& u, const std::function<double(double)>& du,
    const std::function<double(double)>& d2u, double lo, double hi, int grid_n);

// Smooth 1-periodic potential on [0,1)^d with a certified gradient sup bound.
struct TrigTerm {
    double cos_coef = 0.0;
    double sin_coef = 0.0;
    std::vector<int> wave;  // integer wave vector, length d
};

class PotentialTorus {
public:
    using EvalFn = std::function<double(std::span<const double>)>;
    using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

    // trigonometric polynomial sum_j a_j cos(2 pi k_j.x) + b_j sin(2 pi k_j.x);
    // grad_sup defaults to the coefficient bound sum_j 2 pi |k_j| (|a_j|+|b_j|)
    static PotentialTorus trig(int dim, std::vector<TrigTerm> terms,
                               std::optional<double> grad_sup = std::nullopt);
    // grad_sup falls back to a grid scan (64^d capped) times 1.1; d > 3 needs
    // an explicit bound because the scan is no longer trustworthy there
    static PotentialTorus from_functions(int dim, EvalFn eval, GradFn grad,
                                         std::optional<double> grad_sup = std::nullopt,
                                         std::string label = "custom");
    static PotentialTorus parse(const std::string& text);
    static PotentialTorus from_file(const std::string& path);
    static PotentialTorus named(const std::string& name, int dim);

    int dim() const { return dim_; }
    double value(std::span<const double> x) const { return eval_(x); }
    void gradient(std::span<const double> x, std::span<double> out) const {
        grad_(x, out);
    }
    double grad_sup() const { return grad_sup_; }
    const std::string& describe() const { return label_; }

private:
    PotentialTorus() = default;
    int dim_ = 0;
    EvalFn eval_;
    GradFn grad_;
    double grad_sup_ = 0.0;
    std::string label_ = "custom";
};

// Restriction of a torus potential to the line x + s y (y a unit vector):
// value(s) = U(x + s y mod 1) and slope(s) = y . grad U(x + s y mod 1).
class DirectionalProfile {
public:
    DirectionalProfile(const PotentialTorus& p, std::span<const double> x,
                       std::span<const double> y);
    double value(double s) const;
    double slope(double s) const;

private:
    const PotentialTorus* pot_;
    std::vector<double> x_, y_;
    mutable std::vector<double> buf_, gbuf_;
};

DirectionalProfile directional_profile(const PotentialTorus& p,
                                       std::span<const double> x,
                                       std::span<const double> y);

}  // namespace vjump
