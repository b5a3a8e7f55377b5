#include "graphens/stat_table.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <thread>
#include <unordered_map>

namespace graphens {

std::optional<std::size_t> StatTable::find(const StatKey& key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - keys.begin());
}

double StatTable::density_scale(std::size_t fi) const {
    const SubgraphFamily& f = families[fi];
    double nv = pow_int(static_cast<double>(n), f.vertices());
    switch (f.kind) {
        case FamilyKind::Edge: return 2.0 / nv;
        case FamilyKind::Triangle: return 6.0 / nv;
        case FamilyKind::Wedge:
        case FamilyKind::Star: return 1.0 / nv;
    }
    return 0.0;
}

std::vector<double> StatTable::density_of(const StatKey& key) const {
    std::vector<double> t(families.size());
    for (std::size_t k = 0; k < families.size(); ++k)
        t[k] = static_cast<double>(key[k]) * density_scale(k);
    return t;
}

std::vector<double> StatTable::density_of_index(std::size_t idx) const {
    return density_of(keys[idx]);
}

std::uint64_t StatTable::total_graphs() const {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return total;
}

StatTable StatTable::unconstrained(int n) {
    if (n < 2 || n > 8) throw usage_error("table vertex count must be in [2, 8]");
    StatTable t;
    t.n = n;
    t.keys.push_back({});
    t.counts.push_back(1ull << (n * (n - 1) / 2));
    return t;
}

StatKey stat_key_of_graph(const std::vector<SubgraphFamily>& families, const LabeledGraph& g) {
    StatKey key(families.size());
    for (std::size_t k = 0; k < families.size(); ++k) {
        u128 hom = hom_count(families[k], g);
        switch (families[k].kind) {
            case FamilyKind::Edge: key[k] = static_cast<std::int64_t>(hom / 2); break;
            case FamilyKind::Triangle: key[k] = static_cast<std::int64_t>(hom / 6); break;
            default: key[k] = static_cast<std::int64_t>(hom); break;
        }
    }
    return key;
}

namespace {

struct EnumState {
    int n;
    std::vector<std::pair<int, int>> pairs; // edge slot -> vertex pair
    LabeledGraph g;
    std::vector<int> deg;
    std::int64_t edges = 0;
    std::int64_t triangles = 0;
    std::vector<std::int64_t> star_sums;          // per star-like family
    std::vector<int> star_arity;                  // parallel
    std::vector<std::vector<std::int64_t>> powj;  // powj[s][d] = d^arity_s

    void init_from_mask(std::uint64_t mask) {
        g = LabeledGraph::empty(n);
        for (std::size_t b = 0; b < pairs.size(); ++b)
            if ((mask >> b) & 1u) g.set_edge(pairs[b].first, pairs[b].second, true);
        deg.assign(n, 0);
        for (int v = 0; v < n; ++v) deg[v] = g.degree(v);
        edges = g.edge_count();
        triangles = static_cast<std::int64_t>(hom_count(SubgraphFamily::triangle(), g) / 6);
        for (std::size_t s = 0; s < star_sums.size(); ++s) {
            star_sums[s] = 0;
            for (int v = 0; v < n; ++v) star_sums[s] += powj[s][deg[v]];
        }
    }

    void flip(int slot) {
        auto [i, j] = pairs[slot];
        int s = g.has_edge(i, j) ? -1 : +1;
        std::int64_t codeg = std::popcount(g.adj[i] & g.adj[j]);
        triangles += s * codeg;
        edges += s;
        for (std::size_t t = 0; t < star_sums.size(); ++t) {
            const auto& pw = powj[t];
            star_sums[t] += pw[deg[i] + s] - pw[deg[i]] + pw[deg[j] + s] - pw[deg[j]];
        }
        deg[i] += s;
        deg[j] += s;
        g.toggle_edge(i, j);
    }
};

} // namespace

StatTable enumerate_graphs(int n, const std::vector<SubgraphFamily>& families, int threads) {
    if (n < 2 || n > 8) throw usage_error("enumeration supports n in [2, 8]");
    if (families.empty()) throw usage_error("enumeration needs at least one family");

    const int slots = n * (n - 1) / 2;
    const std::uint64_t total = 1ull << slots;

    // Pack keys into one u64: strides from per-family maxima.
    const std::size_t m = families.size();
    std::vector<std::int64_t> maxraw(m);
    for (std::size_t k = 0; k < m; ++k) {
        switch (families[k].kind) {
            case FamilyKind::Edge: maxraw[k] = slots; break;
            case FamilyKind::Triangle: maxraw[k] = static_cast<std::int64_t>(n) * (n - 1) * (n - 2) / 6; break;
            case FamilyKind::Wedge: maxraw[k] = static_cast<std::int64_t>(n) * (n - 1) * (n - 1); break;
            case FamilyKind::Star: {
                std::int64_t p = 1;
                for (int i = 0; i < families[k].star_arity; ++i) p *= (n - 1);
                maxraw[k] = static_cast<std::int64_t>(n) * p;
                break;
            }
        }
    }
    std::vector<std::uint64_t> stride(m, 1);
    u128 span = 1;
    for (std::size_t k = m; k-- > 0;) {
        stride[k] = static_cast<std::uint64_t>(span);
        span *= static_cast<u128>(maxraw[k] + 1);
        if (span > (u128(1) << 63)) throw usage_error("family list produces too many buckets");
    }
    const std::uint64_t packed_span = static_cast<std::uint64_t>(span);
    const bool dense = packed_span <= (1u << 22);

    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::clamp<int>(nthreads, 1, 16);
    if (total < 4096) nthreads = 1;

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    struct ChunkResult {
        std::vector<std::uint64_t> dense;
        std::unordered_map<std::uint64_t, std::uint64_t> sparse;
    };
    std::vector<ChunkResult> results(nthreads);

    auto run_chunk = [&](int tid, std::uint64_t begin, std::uint64_t end) {
        EnumState st;
        st.n = n;
        st.pairs = pairs;
        for (const auto& f : families)
            if (f.kind == FamilyKind::Wedge || f.kind == FamilyKind::Star) {
                int j = (f.kind == FamilyKind::Wedge) ? 2 : f.star_arity;
                st.star_arity.push_back(j);
                std::vector<std::int64_t> pw(n + 1);
                for (int d = 0; d <= n; ++d) {
                    std::int64_t p = 1;
                    for (int i = 0; i < j; ++i) p *= d;
                    pw[d] = p;
                }
                st.powj.push_back(std::move(pw));
                st.star_sums.push_back(0);
            }

        ChunkResult& out = results[tid];
        if (dense) out.dense.assign(packed_span, 0);

        st.init_from_mask(begin ^ (begin >> 1));
        std::size_t star_cursor; // index into star_sums while packing
        auto record = [&]() {
            std::uint64_t idx = 0;
            star_cursor = 0;
            for (std::size_t k = 0; k < m; ++k) {
                std::int64_t raw;
                switch (families[k].kind) {
                    case FamilyKind::Edge: raw = st.edges; break;
                    case FamilyKind::Triangle: raw = st.triangles; break;
                    default: raw = st.star_sums[star_cursor++]; break;
                }
                idx += static_cast<std::uint64_t>(raw) * stride[k];
            }
            if (dense) ++out.dense[idx];
            else ++out.sparse[idx];
        };

        record();
        for (std::uint64_t k = begin + 1; k < end; ++k) {
            st.flip(std::countr_zero(k)); // gray(k) ^ gray(k-1) = 1 << ctz(k)
            record();
        }
    };

    if (nthreads == 1) {
        run_chunk(0, 0, total);
    } else {
        std::vector<std::thread> pool;
        std::uint64_t chunk = total / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            std::uint64_t b = t * chunk;
            std::uint64_t e = (t + 1 == nthreads) ? total : b + chunk;
            pool.emplace_back(run_chunk, t, b, e);
        }
        for (auto& th : pool) th.join();
    }

    // Merge chunks into a sorted key table.
    std::map<std::uint64_t, std::uint64_t> merged;
    for (auto& r : results) {
        if (dense) {
            for (std::uint64_t idx = 0; idx < r.dense.size(); ++idx)
                if (r.dense[idx]) merged[idx] += r.dense[idx];
        } else {
            for (auto& [idx, c] : r.sparse) merged[idx] += c;
        }
    }

    StatTable table;
    table.n = n;
    table.families = families;
    table.keys.reserve(merged.size());
    table.counts.reserve(merged.size());
    for (auto& [idx, c] : merged) {
        StatKey key(m);
        std::uint64_t rest = idx;
        for (std::size_t k = 0; k < m; ++k) {
            key[k] = static_cast<std::int64_t>(rest / stride[k]);
            rest %= stride[k];
        }
        table.keys.push_back(std::move(key));
        table.counts.push_back(c);
    }
    // Packed order is lexicographic in the raw key already; keep it sorted for find().
    return table;
}

std::uint64_t micro_count(const StatTable& table, const StatKey& key) {
    if (key.size() != table.families.size()) throw usage_error("key shape does not match table");
    auto idx = table.find(key);
    return idx ? table.counts[*idx] : 0;
}

} // namespace graphens
