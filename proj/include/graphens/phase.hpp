// Classification of edge-triangle constraint points (equivalent / broken /
// unknown / infeasible with the case tag that fired), the admissible
// region boundaries, and grid sweeps with CSV/SVG emission.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "graphens/graphon.hpp"

namespace graphens {

enum class Verdict { Equivalent, Broken, Unknown, Infeasible };
const char* verdict_name(Verdict v);

struct RegionPoint {
    double t1 = 0.0;
    double t2 = 0.0;
    Verdict verdict = Verdict::Unknown;
    std::string case_label; // "II(a)" ... "II(e)", "" when no case applies
};

// Decision order: infeasibility, degenerate edge densities (0 or 1), the
// curve t2 = t1^3, the t2 = 0 segment, t2 >= 1/8, the low strip, the l=2
// scallop segment; everything else is Unknown.
RegionPoint classify(double t1, double t2);

// Minimal triangle homomorphism density on the l=2 scallop: t1 in (1/2, 2/3),
// value 6 c^2 (1-2c) with c = c(t1 - 1/2).
double scallop_lower_bound(double t1);

// Goodman's bound t2 >= t1 (2 t1 - 1): valid everywhere, tight at t1 = 2/3.
double goodman_lower_bound(double t1);

// Kruskal-Katona upper boundary t2 <= t1^{3/2}.
double kruskal_katona_upper(double t1);

// The lower envelope used by the classifier: 0 up to 1/2, the exact l=2
// scallop on (1/2, 2/3), Goodman beyond (conservative: no l>=3 extrapolation).
double feasible_lower_bound(double t1);

// Uniform grid over [0,1]^2, one classified point per node. CSV columns:
// t1,t2,verdict,case. Row-major: t1 outer, t2 inner.
std::vector<RegionPoint> sweep(int resolution);
void write_sweep_csv(const std::vector<RegionPoint>& points, std::ostream& out);
void write_sweep_svg(const std::vector<RegionPoint>& points, int resolution, std::ostream& out,
                     int width = 800, int height = 600);

} // namespace graphens
