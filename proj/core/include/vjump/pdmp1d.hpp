#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vjump/potential.hpp"
#include "vjump/rng.hpp"
#include "vjump/schedule.hpp"

namespace vjump {

// Position-velocity-time state of the 1D velocity jump process; the velocity
// is exactly +1 or -1.
struct State1D {
    double x = 0.0;
    int y = 1;
    double t = 0.0;
};

enum class Event1DKind { FlipMinimal, FlipResidual, Hit, Horizon };

struct Event1D {
    double t;
    double x;
    Event1DKind kind;
    double budget;  // exponential variate consumed by the firing clock (flips only)
};

using EventLog1D = std::vector<Event1D>;

// Additional jump rate r(x) >= 0, bounded by r_star.
class ResidualRate {
public:
    static ResidualRate zero();
    static ResidualRate constant(double rho);
    // clamped to the end values outside the table
    static ResidualRate piecewise_linear(std::vector<std::pair<double, double>> pts);
    static ResidualRate from_function(std::function<double(double)> f, double r_star);
    static ResidualRate parse(const std::string& spec);  // const:<rho> | file:<path>

    double operator()(double x) const;
    double r_star() const { return r_star_; }
    bool is_zero() const { return kind_ == Kind::Constant && rho_ == 0.0; }
    bool is_constant() const { return kind_ == Kind::Constant; }
    double constant_value() const { return rho_; }
    const std::string& describe() const { return label_; }

    // first W >= 0 with integral of r along x + y u over [0, W] equal to F;
    // +inf when the rate never accumulates that much
    double invert(const State1D& s, double F) const;

private:
    enum class Kind { Constant, Table, Function };
    Kind kind_ = Kind::Constant;
    double rho_ = 0.0;
    double r_star_ = 0.0;
    std::vector<std::pair<double, double>> pts_;
    std::function<double(double)> fn_;
    std::string label_ = "const:0";
};

// First time T > s.t at which the accumulated minimal rate
// (y U'(x + y(u - s.t)))_+ / eps_u reaches the budget E; +inf if it never
// does.  Exact stretch-by-stretch inversion: on monotone stretches with
// constant eps the accrual is a potential difference, with varying eps the
// exact beta primitive (piecewise-linear U) or adaptive quadrature (smooth U)
// is used.  Jump times resolve to 1e-12 absolute.
double next_minimal_jump(const Potential1D& p, const State1D& s,
                         const CoolingSchedule& sched, double E);

// First duration W with integral of r(x + y u) over [0,W] equal to F.
double next_residual_jump(const ResidualRate& r, const State1D& s, double F);

struct StopRule {
    std::optional<double> horizon;  // absolute time
    std::vector<double> hits;       // absorbing positions, first crossing stops
};

struct SimResult1D {
    State1D state;
    long n_minimal = 0;
    long n_residual = 0;
    Event1DKind stop_kind = Event1DKind::Horizon;
    double stop_hit_position = 0.0;
};

// Run until the stop rule fires.  Fresh exponential budgets are drawn for
// both clocks after every jump; the earlier clock fires and flips the
// velocity.  Hitting times are exact (unit speed).  Event logging is
// optional; pass nullptr on long runs.
SimResult1D simulate(const Potential1D& p, State1D s0, const CoolingSchedule& sched,
                     const ResidualRate& r, const StopRule& stop, Rng& rng,
                     EventLog1D* log = nullptr);

// n_runs independent hitting times of x_star from s0, one derived RNG stream
// per run.
std::vector<double> first_hitting_time_batch(const Potential1D& p, const State1D& s0,
                                             const CoolingSchedule& sched,
                                             const ResidualRate& r, double x_star,
                                             int n_runs, std::uint64_t seed);

// Closed-form one-shot escape probability from (x0, +1):
//   exp(-(U(x1)-U(x0))/eps) / (1 + integral_{x0}^{x1} r(z) e^{-(U(x1)-U(z))/eps} dz)
double escape_probability_formula(const Potential1D& p, const ResidualRate& r,
                                  double eps, double x0, double x1);
// convenience: x0 = first listed minimum, x1 = following maximum
double escape_probability_formula(const Potential1D& p, const ResidualRate& r,
                                  double eps);

}  // namespace vjump
