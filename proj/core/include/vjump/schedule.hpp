#pragma once

#include <string>
#include <utility>
#include <vector>

namespace vjump {

enum class Divergence { Diverges, Converges, Inconclusive };

// Temperature profile eps_t, positive and non-increasing.  Three kinds:
//   constant eps          spec string  const:<eps>
//   c / ln(t0 + t)        spec string  log:c=<c>[,t0=<t0|e>]
//   interpolated table    spec string  table:<file>   (lines "t eps", clamped
//                                                      to the end values)
class CoolingSchedule {
public:
    enum class Kind { Constant, Logarithmic, Table };

    static CoolingSchedule constant(double eps);
    static CoolingSchedule logarithmic(double c, double t0);
    static CoolingSchedule table(std::vector<std::pair<double, double>> knots);
    static CoolingSchedule parse(const std::string& spec);

    double eps(double t) const;
    double inv_eps(double t) const;  // 1/eps_t; 0 where eps is infinite

    // Exact antiderivative difference: integral of 1/eps_u over [ta, tb].
    double beta_integral(double ta, double tb) const;

    // d/dt (1/eps_t) by centered finite difference.
    double inv_beta_growth(double t) const;

    Kind kind() const { return kind_; }
    bool is_constant() const { return kind_ == Kind::Constant; }
    double log_c() const { return c_; }
    double log_t0() const { return t0_; }
    double constant_eps() const { return c_; }

    // eps > 0 and non-increasing on a grid over [t_lo, t_hi]; throws InputError.
    void validate_monotone(double t_lo, double t_hi, int grid_points = 1000) const;

    const std::string& spec_string() const { return spec_; }

private:
    CoolingSchedule() = default;
    Kind kind_ = Kind::Constant;
    double c_ = 1.0;   // constant eps, or log-family c
    double t0_ = 0.0;  // log-family offset
    std::vector<std::pair<double, double>> knots_;
    std::vector<double> beta_prefix_;  // cumulative integral of 1/eps at knots
    std::string spec_;
};

// Does the integral of eps_s^{-1/2} exp(-E/eps_s) diverge?  Analytic for the
// constant and logarithmic families; a dyadic-window heuristic for tables,
// which may return Inconclusive.
Divergence divergence_test(const CoolingSchedule& s, double E);

// True when d/dt(1/eps_t) <= 1/((theta+eta) t) holds on a geometric grid of
// [t_min, t_max].
bool inverse_beta_growth_check(const CoolingSchedule& s, double theta, double eta,
                               double t_min = 3.0, double t_max = 1e6,
                               int points = 256);

}  // namespace vjump
