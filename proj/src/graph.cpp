#include "graphens/graph.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace graphens {

SubgraphFamily SubgraphFamily::star(int j) {
    if (j < 2) throw usage_error("star arity must be >= 2");
    if (j > 32) throw usage_error("star arity too large for exact integer counting");
    return {FamilyKind::Star, j};
}

int SubgraphFamily::vertices() const {
    switch (kind) {
        case FamilyKind::Edge: return 2;
        case FamilyKind::Wedge: return 3;
        case FamilyKind::Triangle: return 3;
        case FamilyKind::Star: return star_arity + 1;
    }
    return 0;
}

int SubgraphFamily::edges() const {
    switch (kind) {
        case FamilyKind::Edge: return 1;
        case FamilyKind::Wedge: return 2;
        case FamilyKind::Triangle: return 3;
        case FamilyKind::Star: return star_arity;
    }
    return 0;
}

long SubgraphFamily::permutations() const {
    switch (kind) {
        case FamilyKind::Edge: return 2;
        case FamilyKind::Wedge: return 2;
        case FamilyKind::Triangle: return 6;
        case FamilyKind::Star: {
            long p = 1;
            for (int i = 2; i <= star_arity; ++i) p *= i;
            return p; // j! leaf permutations
        }
    }
    return 1;
}

std::string SubgraphFamily::name() const {
    switch (kind) {
        case FamilyKind::Edge: return "edge";
        case FamilyKind::Wedge: return "wedge";
        case FamilyKind::Triangle: return "triangle";
        case FamilyKind::Star: return "star" + std::to_string(star_arity);
    }
    return "?";
}

SubgraphFamily SubgraphFamily::parse(const std::string& name) {
    if (name == "edge") return edge();
    if (name == "wedge") return wedge();
    if (name == "triangle") return triangle();
    if (name.rfind("star", 0) == 0 && name.size() > 4) {
        int j = 0;
        try {
            j = std::stoi(name.substr(4));
        } catch (...) {
            throw usage_error("bad family name: " + name);
        }
        return star(j);
    }
    throw usage_error("unknown family: " + name + " (expected edge|wedge|triangle|starJ)");
}

std::vector<SubgraphFamily> parse_family_list(const std::string& csv) {
    std::vector<SubgraphFamily> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(SubgraphFamily::parse(tok));
    }
    if (out.empty()) throw usage_error("family list is empty");
    return out;
}

LabeledGraph LabeledGraph::empty(int n) {
    if (n < 2 || n > 64) throw usage_error("vertex count must be in [2, 64]");
    LabeledGraph g;
    g.n = n;
    return g;
}

LabeledGraph LabeledGraph::complete(int n) {
    LabeledGraph g = empty(n);
    for (int i = 0; i < n; ++i) g.adj[i] = g.vertex_mask() & ~(1ull << i);
    return g;
}

LabeledGraph LabeledGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    LabeledGraph g = empty(n);
    for (auto [i, j] : edges) g.set_edge(i, j, true);
    return g;
}

LabeledGraph LabeledGraph::path(int n) {
    LabeledGraph g = empty(n);
    for (int i = 0; i + 1 < n; ++i) g.set_edge(i, i + 1, true);
    return g;
}

void LabeledGraph::set_edge(int i, int j, bool present) {
    if (i == j || i < 0 || j < 0 || i >= n || j >= n)
        throw usage_error("edge endpoints out of range or equal");
    if (present) {
        adj[i] |= 1ull << j;
        adj[j] |= 1ull << i;
    } else {
        adj[i] &= ~(1ull << j);
        adj[j] &= ~(1ull << i);
    }
}

void LabeledGraph::toggle_edge(int i, int j) { set_edge(i, j, !has_edge(i, j)); }

int LabeledGraph::degree(int i) const { return std::popcount(adj[i]); }

int LabeledGraph::edge_count() const {
    int twice = 0;
    for (int i = 0; i < n; ++i) twice += degree(i);
    return twice / 2;
}

LabeledGraph LabeledGraph::permuted(const std::vector<int>& perm) const {
    LabeledGraph g = empty(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (has_edge(perm[i], perm[j])) g.set_edge(i, j, true);
    return g;
}

void LabeledGraph::check_valid() const {
    if (n < 2 || n > 64) throw usage_error("vertex count must be in [2, 64]");
    for (int i = 0; i < n; ++i) {
        if (adj[i] & ~vertex_mask()) throw usage_error("adjacency bits beyond vertex range");
        if ((adj[i] >> i) & 1u) throw usage_error("loop on vertex " + std::to_string(i));
        for (int j = 0; j < n; ++j)
            if (has_edge(i, j) != has_edge(j, i)) throw usage_error("adjacency not symmetric");
    }
}

namespace {

// Guard against deg^j overflowing the 128-bit accumulator.
void check_star_width(int n, int j) {
    double bits = j * std::log2(static_cast<double>(n > 1 ? n - 1 : 1)) + std::log2(static_cast<double>(n));
    if (bits >= 126.0)
        throw usage_error("star arity " + std::to_string(j) + " overflows 128-bit counts at n=" +
                          std::to_string(n));
}

} // namespace

u128 hom_count(const SubgraphFamily& f, const LabeledGraph& g) {
    switch (f.kind) {
        case FamilyKind::Edge: {
            u128 acc = 0;
            for (int v = 0; v < g.n; ++v) acc += static_cast<unsigned>(g.degree(v));
            return acc; // = 2|E|
        }
        case FamilyKind::Wedge:
        case FamilyKind::Star: {
            int j = (f.kind == FamilyKind::Wedge) ? 2 : f.star_arity;
            check_star_width(g.n, j);
            u128 acc = 0;
            for (int v = 0; v < g.n; ++v) acc += ipow_u128(static_cast<u128>(g.degree(v)), j);
            return acc;
        }
        case FamilyKind::Triangle: {
            // trace(A^3): closed walks of length 3, i.e. 6 * #triangles.
            u128 acc = 0;
            for (int v = 0; v < g.n; ++v) {
                std::uint64_t nbrs = g.adj[v];
                while (nbrs) {
                    int u = std::countr_zero(nbrs);
                    nbrs &= nbrs - 1;
                    acc += static_cast<unsigned>(std::popcount(g.adj[v] & g.adj[u]));
                }
            }
            return acc;
        }
    }
    return 0;
}

double hom_density(const SubgraphFamily& f, const LabeledGraph& g) {
    return static_cast<double>(hom_count(f, g)) /
           static_cast<double>(ipow_u128(static_cast<u128>(g.n), f.vertices()));
}

i128 toggle_delta(const SubgraphFamily& f, const LabeledGraph& g, int i, int j) {
    if (i == j) throw usage_error("toggle_delta needs two distinct vertices");
    i128 s = g.has_edge(i, j) ? -1 : +1;
    switch (f.kind) {
        case FamilyKind::Edge:
            return 2 * s;
        case FamilyKind::Triangle:
            // Common-neighbor bits exclude i and j themselves (zero diagonal),
            // so the count is unaffected by the {i,j} edge bit.
            return 6 * s * static_cast<i128>(std::popcount(g.adj[i] & g.adj[j]));
        case FamilyKind::Wedge:
        case FamilyKind::Star: {
            int j_arity = (f.kind == FamilyKind::Wedge) ? 2 : f.star_arity;
            check_star_width(g.n, j_arity);
            i128 di = g.degree(i), dj = g.degree(j);
            return ipow_i128(di + s, j_arity) - ipow_i128(di, j_arity) +
                   ipow_i128(dj + s, j_arity) - ipow_i128(dj, j_arity);
        }
    }
    return 0;
}

LabeledGraph read_graph_text(std::istream& in) {
    int n = 0;
    if (!(in >> n)) throw usage_error("graph file: missing vertex count");
    LabeledGraph g = LabeledGraph::empty(n);
    int i, j;
    while (in >> i >> j) g.set_edge(i, j, true);
    return g;
}

void write_graph_text(const LabeledGraph& g, std::ostream& out) {
    out << g.n << "\n";
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if (g.has_edge(i, j)) out << i << " " << j << "\n";
}

LabeledGraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open graph file: " + path);
    return read_graph_text(in);
}

} // namespace graphens
