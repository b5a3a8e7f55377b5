// Metropolis edge-flip sampler for the canonical ensemble at sizes beyond
// enumeration range. Proposals toggle a uniform vertex pair; the Hamiltonian
// delta is O(n) from local statistics (codegree popcount, two degrees).
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "graphens/variational.hpp"

namespace graphens {

struct SamplerConfig {
    int n = 0;
    std::vector<SubgraphFamily> families;
    std::vector<double> theta;
    std::uint64_t total_steps = 0;  // proposals per chain, burn-in included
    std::uint64_t burnin_steps = 0;
    std::uint64_t thin = 1;         // record every thin-th proposal after burn-in
    std::uint64_t seed = 0;
    int chains = 1;
    double init_density = 0.5;      // ER initial state
    std::optional<LabeledGraph> init_graph; // overrides init_density (n <= 64)

    void check() const;
};

struct TraceSummary {
    std::vector<double> mean;             // per-family mean of t(F_k, G)
    std::vector<double> se;               // batch-means standard error of the mean
    std::vector<std::vector<double>> chain_mean; // per chain
    double acceptance_rate = 0.0;
    double ess_proxy = 0.0;               // sample variance / SE^2, ~samples if iid
    std::uint64_t samples = 0;            // recorded samples, all chains
};

// Called for every recorded sample when present; chains then run sequentially
// so the callback order is deterministic.
using SampleCallback = std::function<void(int chain, std::uint64_t sample_index,
                                          const std::vector<double>& t)>;

// Reproducible given the seed: chain c uses seed + c. Without a callback the
// chains run in parallel and merge deterministically.
TraceSummary run_chain(const SamplerConfig& cfg, const SampleCallback& cb = nullptr);

struct AveragingReport {
    double theta = 0.0;
    double u_star = 0.0;
    std::vector<double> expected; // u*^{E_k} per family
    std::vector<double> abs_error;
    TraceSummary trace;
    bool tie_warning = false; // near-tie of the scalar problem: torpid mixing expected
};

// Runs chains at theta = invert_constraint(target) and compares empirical
// means against the variational prediction u*^{E_k}.
AveragingReport averaging_check(ScalarModel model, int star_j, double target, SamplerConfig cfg);

} // namespace graphens
