#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "vjump/potential.hpp"

namespace vjump {

// Depth of a local minimum: the smallest barrier above which a strictly lower
// point can be reached.  Global minima carry depth = +infinity.
struct MinimumDepth {
    double x;
    double value;
    double depth;  // +inf for global minima
    bool global;
};

// Connected sublevel component {U < level} around a minimum, bounded by the
// level crossings z_l, z_r.  When the declared domain truncates the component
// the corresponding side is flagged clipped and pinned to the domain edge.
struct Cusp {
    double z_l, z_r;
    double level;
    bool clipped_left = false;
    bool clipped_right = false;
    std::vector<double> bottom;  // argmin positions inside (z_l, z_r)
};

struct LandscapeReport {
    std::vector<MinimumDepth> minima;
    double critical_depth = 0.0;
    std::vector<Cusp> cusps;  // one per finite-depth minimum, same order
};

// a is strictly below b, with a relative tie guard so that rounding noise
// never manufactures a zero depth
inline bool strictly_lower(double a, double b) {
    return a < b - 1e-12 * (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

// max of U on the segment [x,z] is <= V, evaluated from the critical-point
// list plus the endpoints
bool reachable_at_height(const Potential1D& p, double x, double z, double V);

double depth_of_minimum(const Potential1D& p, double x_min);
double critical_depth(const Potential1D& p);

Cusp cusp_of(const Potential1D& p, double x_min);
// sublevel component of {U < U(x) + E} containing x
Cusp cusp_at_level(const Potential1D& p, double x, double E);

LandscapeReport analyze_landscape(const Potential1D& p);

// Brute-force depths from a dense grid, no use of the critical-point list.
// Validation oracle for depth_of_minimum / critical_depth.
LandscapeReport landscape_oracle(const Potential1D& p, int grid_n);
LandscapeReport landscape_oracle(const std::function<double(double)>& u, double lo,
                                 double hi, int grid_n);

// W_E: minima of depth strictly greater than E
std::vector<double> minima_deeper_than(const Potential1D& p, double E);
// z in R_E: reachable from some y in W_E at height U(y) + E
bool in_reachable_set(const Potential1D& p, double E, double z);

}  // namespace vjump
