// Exact enumeration of all labeled graphs on n <= 8 vertices, bucketed by the
// integer sufficient statistics of a family list. The canonical ensemble is
// constant on buckets, so everything downstream works on this table.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "graphens/graph.hpp"

namespace graphens {

// Raw integer counts per family: |E| for edges, #triangles for triangles,
// sum deg^j for wedges (j=2) and j-stars.
using StatKey = std::vector<std::int64_t>;

struct StatTable {
    int n = 0;
    std::vector<SubgraphFamily> families;
    std::vector<StatKey> keys;          // sorted lexicographically
    std::vector<std::uint64_t> counts;  // parallel to keys

    std::size_t size() const { return keys.size(); }
    std::optional<std::size_t> find(const StatKey& key) const;

    // Homomorphism-density vector t of a key: edge 2E/n^2, triangle 6R/n^3,
    // wedge/star R/n^{V}.
    std::vector<double> density_of(const StatKey& key) const;
    std::vector<double> density_of_index(std::size_t idx) const;
    double density_scale(std::size_t family_idx) const;

    std::uint64_t total_graphs() const; // sum of counts = 2^C(n,2)

    // m = 0 table: a single empty key covering all graphs. Used for the
    // unconstrained ensemble; enumerate_graphs itself rejects empty lists.
    static StatTable unconstrained(int n);
};

// Gray-code walk over all 2^C(n,2) edge masks with incremental statistic
// updates; the mask range is split into contiguous chunks processed in
// parallel and merged by key (result independent of thread count).
// threads = 0 picks hardware concurrency.
StatTable enumerate_graphs(int n, const std::vector<SubgraphFamily>& families, int threads = 0);

// Omega_{C*}: number of graphs realising the key exactly (0 = non-graphic).
std::uint64_t micro_count(const StatTable& table, const StatKey& key);

// Raw integer statistic vector of one graph under a family list.
StatKey stat_key_of_graph(const std::vector<SubgraphFamily>& families, const LabeledGraph& g);

} // namespace graphens
