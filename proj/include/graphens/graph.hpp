// Finite labeled graphs on up to 64 vertices (one adjacency word per row),
// the supported subgraph families, homomorphism counts and single-edge-flip
// deltas. Everything here is exact integer arithmetic.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "graphens/common.hpp"

namespace graphens {

enum class FamilyKind { Edge, Wedge, Triangle, Star };

// Edge / wedge / triangle / j-star descriptor. Wedge is literally Star(2):
// same vertex count, edge count and homomorphism closed form.
struct SubgraphFamily {
    FamilyKind kind = FamilyKind::Edge;
    int star_arity = 0; // j for Star, else unused

    static SubgraphFamily edge() { return {FamilyKind::Edge, 0}; }
    static SubgraphFamily wedge() { return {FamilyKind::Wedge, 2}; }
    static SubgraphFamily triangle() { return {FamilyKind::Triangle, 0}; }
    static SubgraphFamily star(int j);

    int vertices() const; // V_k
    int edges() const;    // E_k
    long permutations() const; // p_k, edge-preserving vertex permutations

    std::string name() const;
    static SubgraphFamily parse(const std::string& name);

    bool operator==(const SubgraphFamily& o) const {
        return kind == o.kind && (kind != FamilyKind::Star || star_arity == o.star_arity);
    }
};

std::vector<SubgraphFamily> parse_family_list(const std::string& comma_separated);

// Simple undirected graph, no loops. Row i holds the neighbor set of vertex i
// as a bitmask; symmetry and a zero diagonal are maintained by construction.
struct LabeledGraph {
    int n = 0;
    std::array<std::uint64_t, 64> adj{};

    static LabeledGraph empty(int n);
    static LabeledGraph complete(int n);
    static LabeledGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
    static LabeledGraph path(int n); // 0-1-2-...-(n-1)

    bool has_edge(int i, int j) const { return (adj[i] >> j) & 1u; }
    void set_edge(int i, int j, bool present);
    void toggle_edge(int i, int j);

    int degree(int i) const;
    int edge_count() const;
    std::uint64_t vertex_mask() const { return n == 64 ? ~0ull : ((1ull << n) - 1); }

    // Relabel vertices: vertex i of the result is perm[i] of *this.
    LabeledGraph permuted(const std::vector<int>& perm) const;

    void check_valid() const; // throws usage_error on broken invariants
};

// Number of homomorphisms from the family's graph into G. Closed forms:
// Edge -> 2|E|, Wedge/Star(j) -> sum_v deg(v)^j, Triangle -> trace(A^3).
u128 hom_count(const SubgraphFamily& f, const LabeledGraph& g);

// t(F,G) = hom(F,G) / n^{V(F)}.
double hom_density(const SubgraphFamily& f, const LabeledGraph& g);

// hom(F, G with edge {i,j} toggled) - hom(F, G), computed locally in O(1).
i128 toggle_delta(const SubgraphFamily& f, const LabeledGraph& g, int i, int j);

// Text format: first line "n", then one line "i j" per edge, 0-based.
LabeledGraph read_graph_text(std::istream& in);
void write_graph_text(const LabeledGraph& g, std::ostream& out);
LabeledGraph read_graph_file(const std::string& path);

} // namespace graphens
