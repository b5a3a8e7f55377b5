// Step graphons (block-piecewise-constant symmetric kernels on [0,1]^2),
// homomorphism-density integrals, the large-deviation rate functionals,
// the cut distance, and the scallop optimizer family h*_eps.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "graphens/graph.hpp"

namespace graphens {

struct StepGraphon {
    std::vector<double> widths; // k block measures, positive, summing to 1
    std::vector<double> values; // k*k symmetric, entries in [0,1], row-major

    int blocks() const { return static_cast<int>(widths.size()); }
    double value(int a, int b) const { return values[static_cast<size_t>(a) * widths.size() + b]; }
    double& value(int a, int b) { return values[static_cast<size_t>(a) * widths.size() + b]; }

    static StepGraphon constant(double p);
    static StepGraphon uniform_blocks(int k, double fill = 0.0); // equal widths 1/k

    void check_valid() const; // throws usage_error on broken invariants
};

// n equal blocks of width 1/n carrying the adjacency entries.
StepGraphon graphon_of_graph(const LabeledGraph& g);

// t(F,h) as an exact finite block sum. O(k^3) worst case (triangle).
double density(const SubgraphFamily& f, const StepGraphon& h);

// I_p(u) when p is given, I(u) = (1/2)[u log u + (1-u) log(1-u)] otherwise.
// The 0 log 0 = 0 convention makes the endpoints finite.
double rate_scalar(double u, std::optional<double> p = std::nullopt);

// d/du of I(u), +inf/-inf at the endpoints.
double rate_scalar_derivative(double u);

// Integral of rate_scalar over the square, exact for step functions.
double rate_functional(const StepGraphon& h, std::optional<double> p = std::nullopt);

enum class CutDistanceMode { Auto, Exact };

struct CutDistanceResult {
    double value = 0.0;
    bool exact = true;     // false: alternating-maximization lower bound
    int refined_blocks = 0;
};

// Cut distance d_box for step functions. Exact via the 2^k subset scan on the
// common refinement up to max_exact_blocks; beyond that an alternating
// maximization from random restarts gives a certified lower bound.
CutDistanceResult cut_distance(const StepGraphon& h1, const StepGraphon& h2,
                               CutDistanceMode mode = CutDistanceMode::Auto,
                               int max_exact_blocks = 20, int restarts = 32,
                               std::uint64_t seed = 12345);

// Upper bound on the quotient metric delta_box: best cut distance over all
// block relabelings. Equal-width graphons with k <= 8 only.
double delta_cut_upper(const StepGraphon& h1, const StepGraphon& h2);

// The 3-block optimizer of the edge-triangle lower boundary at edge density
// 1/2 + eps: blocks A=[0,c), B=[c,(1+c)/2), C=[(1+c)/2,1]; value 1 between A
// and B+C, p between B and C, 0 elsewhere.
struct ScallopGraphon {
    StepGraphon h;
    double epsilon = 0.0;
    double c = 0.0;
    double p = 0.0;
};

ScallopGraphon scallop_graphon(double epsilon); // eps strictly in (0, 1/6)

// Text format: line 1 "k"; line 2 the k widths; then k lines of k values.
StepGraphon read_graphon_text(std::istream& in);
void write_graphon_text(const StepGraphon& h, std::ostream& out);

} // namespace graphens
