#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "vjump/pdmp1d.hpp"
#include "vjump/pdmpd.hpp"
#include "vjump/potential.hpp"
#include "vjump/schedule.hpp"
#include "vjump/stats.hpp"

namespace vjump::experiments {

// run fn(run_id) for run_id in [0, n) across `threads` workers; results must
// be written to per-run slots so the schedule cannot change any output
void parallel_runs(int n, int threads, const std::function<void(int)>& fn);

// --- 1D escape-time experiments -------------------------------------------

struct TauBatch {
    double eps = 0.0;
    std::vector<double> tau;
    std::vector<long> flips_minimal;
    std::vector<long> flips_residual;
};

// independent hitting times of x_star starting from s0
TauBatch hitting_batch(const Potential1D& p, const CoolingSchedule& sched,
                       const ResidualRate& r, State1D s0, double x_star, int runs,
                       std::uint64_t seed, int threads = 1);

// one-shot escape attempts from (x0,+1): fraction reaching x1 before x0
struct OneShot {
    long attempts = 0;
    long escapes = 0;
    double p_hat() const { return attempts ? double(escapes) / attempts : 0.0; }
};
OneShot one_shot_escape(const Potential1D& p, const CoolingSchedule& sched,
                        const ResidualRate& r, int attempts, std::uint64_t seed);

// excursion lengths: first return to {x0, x1} from (x0,+1)
std::vector<double> excursion_lengths(const Potential1D& p, double eps,
                                      const ResidualRate& r, int n,
                                      std::uint64_t seed);

// ensemble of final positions at a fixed horizon
std::vector<double> positions_at_time(const Potential1D& p,
                                      const CoolingSchedule& sched,
                                      const ResidualRate& r, State1D s0,
                                      double horizon, int runs, std::uint64_t seed,
                                      int threads = 1);

// --- 1D occupation measure -------------------------------------------------

struct Occupation1D {
    std::vector<double> mass;  // normalized occupation over [lo, hi]
    double vel_plus_fraction = 0.0;
    long flips = 0;
    double lo = 0.0, hi = 0.0;
};
Occupation1D occupation_1d(const Potential1D& p, double eps, double horizon,
                           int bins, std::uint64_t seed, State1D s0);

// --- 1D annealing ------------------------------------------------------------

struct Anneal1DRow {
    double x_final = 0.0;
    double u_final = 0.0;
    long flips = 0;
};
// start: fixed position, or uniform over the domain when unset
std::vector<Anneal1DRow> anneal_1d(const Potential1D& p, const CoolingSchedule& sched,
                                   double horizon, int runs, std::uint64_t seed,
                                   std::optional<double> start, int threads = 1);

// --- torus experiments -------------------------------------------------------

struct TorusOccupation {
    std::vector<double> mass;  // occupation of energy bins over [u_lo, u_hi]
    double u_lo = 0.0, u_hi = 0.0;
    long n_reflect = 0, n_refresh = 0;
};
// occupation-weighted energy histogram along one long trajectory, sampled at
// step dt; bin range comes from the quadrature grid of torus_energy_gibbs
TorusOccupation torus_energy_occupation(const PotentialTorus& p, double eps,
                                        double refresh, double horizon, double dt,
                                        int bins, double u_lo, double u_hi,
                                        std::uint64_t seed);

// energy-binned Gibbs masses from an n x n (x n...) midpoint grid; also
// reports the grid's energy range
std::vector<double> torus_energy_gibbs(const PotentialTorus& p, double eps,
                                       int grid_per_axis, int bins, double* u_lo,
                                       double* u_hi);

// 2D position-binned Gibbs masses (bins x bins, row-major)
std::vector<double> torus_position_gibbs_2d(const PotentialTorus& p, double eps,
                                            int quad_grid, int bins);

struct TorusRun {
    std::vector<StateTorus> checkpoints;
    StateTorus final_state;
    long n_reflect = 0, n_refresh = 0;
};
std::vector<TorusRun> torus_ensemble(const PotentialTorus& p,
                                     const CoolingSchedule& sched, double refresh,
                                     double horizon,
                                     std::span<const double> checkpoint_times,
                                     StateTorus s0, bool random_velocity, int runs,
                                     std::uint64_t seed, int threads = 1);

// first thinned reflection times from a fixed state, independent streams
std::vector<double> thinning_times(const PotentialTorus& p,
                                   const CoolingSchedule& sched, StateTorus s0,
                                   int n, std::uint64_t seed, double t_cap);

}  // namespace vjump::experiments
