// The n -> infinity layer: the scalar reduction of the graphon variational
// problem, constraint inversion for the three scalar models, the equivalence
// verdicts per constraint case, and a numerical upper bound on the
// constrained rate minimum over step graphons.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "graphens/graphon.hpp"

namespace graphens {

struct ScalarSolution {
    std::vector<double> maximizers; // global argmax set within the tie tolerance
    double value = 0.0;
    bool unique = true;
    bool simplify_hypothesis_ok = true; // theta >= 0 for every family with E_k >= 2
};

// Globally maximizes f(u) = sum_k theta_k u^{E_k} - I(u) on [0,1] by a dense
// grid plus Newton polish of every local maximum. Valid input for any sign of
// theta; the flag records whether the scalar identity with psi_infinity is
// guaranteed.
ScalarSolution scalar_sup(const std::vector<double>& theta, const std::vector<int>& exponents,
                          int grid_points = 10000, double tie_tol = 1e-9);

enum class ScalarModel { EdgeOnly, TriangleOnly, Star };

struct InvertResult {
    double theta = 0.0;
    double u_star = 0.0;
};

// theta_infinity such that the unique global maximizer u* satisfies
// u*^E = target. Throws infeasible_error (OutOfRegime) when the inversion via
// a unique global maximizer is not guaranteed (triangle target below 1/8).
InvertResult invert_constraint(ScalarModel model, int star_j, double target);

enum class SInfKind { Zero, PositiveLowerBound, PositiveQualitative, Unknown };
const char* s_inf_kind_name(SInfKind k);

struct SInfVerdict {
    SInfKind kind = SInfKind::Unknown;
    std::string case_label;
    std::vector<double> theta_inf;
    double u_star = std::numeric_limits<double>::quiet_NaN();
    double term_full = std::numeric_limits<double>::quiet_NaN();        // sup over W
    double term_constrained = std::numeric_limits<double>::quiet_NaN(); // sup over W*
    double term_gap = std::numeric_limits<double>::quiet_NaN();
    double micro_rate = std::numeric_limits<double>::quiet_NaN();       // II(d) entropy term
    double lower_bound = std::numeric_limits<double>::quiet_NaN();
};

SInfVerdict s_inf_triangle(double t2);
SInfVerdict s_inf_edge_triangle(double t1, double t2,
                                std::optional<double> theta2_inf = std::nullopt);
SInfVerdict s_inf_star(int j, double target);

struct MinRateOptions {
    int blocks = 4;
    int restarts = 16;
    std::uint64_t seed = 1;
    int threads = 0; // 0 = hardware
};

struct MinRateResult {
    double value = 0.0;          // I(h) at the best point: an UPPER bound on inf I
    StepGraphon graphon;
    double max_residual = 0.0;   // worst |t_k(h) - T_k*|
    bool feasible = false;
    int best_restart = -1;
};

// Quadratic-penalty local descent over equal-width k-block step graphons,
// multiple restarts, deterministic best-of reduction. Never certifies
// equivalence -- only an upper bound on the constrained infimum.
MinRateResult min_rate_on_levelset(const std::vector<SubgraphFamily>& families,
                                   const std::vector<double>& targets,
                                   const MinRateOptions& opt = {});

} // namespace graphens
