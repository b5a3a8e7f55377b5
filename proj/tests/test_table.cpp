#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "graphens/ensemble.hpp"
#include "oracles.hpp"

using namespace graphens;

namespace {

const std::vector<SubgraphFamily> kEdgeTri = {SubgraphFamily::edge(), SubgraphFamily::triangle()};

// direct per-graph bucketing, independent of the Gray-code walk
std::map<StatKey, std::uint64_t> brute_table(int n, const std::vector<SubgraphFamily>& fams) {
    std::map<StatKey, std::uint64_t> out;
    for (const auto& g : oracle::all_graphs(n)) {
        StatKey key(fams.size());
        for (std::size_t k = 0; k < fams.size(); ++k) {
            std::uint64_t hom = static_cast<std::uint64_t>(oracle::brute_hom(fams[k], g));
            switch (fams[k].kind) {
                case FamilyKind::Edge: key[k] = static_cast<std::int64_t>(hom / 2); break;
                case FamilyKind::Triangle: key[k] = static_cast<std::int64_t>(hom / 6); break;
                default: key[k] = static_cast<std::int64_t>(hom); break;
            }
        }
        ++out[key];
    }
    return out;
}

} // namespace

TEST_CASE("n=3 edge-triangle table matches the 8-graph brute force") {
    StatTable t = enumerate_graphs(3, kEdgeTri);
    REQUIRE(t.size() == 4);
    CHECK(micro_count(t, {0, 0}) == 1);
    CHECK(micro_count(t, {1, 0}) == 3);
    CHECK(micro_count(t, {2, 0}) == 3);
    CHECK(micro_count(t, {3, 1}) == 1);
    CHECK(micro_count(t, {2, 1}) == 0); // a triangle needs 3 edges
}

TEST_CASE("enumeration matches per-graph bucketing for n=4, several family lists") {
    std::vector<std::vector<SubgraphFamily>> lists = {
        {SubgraphFamily::edge()},
        {SubgraphFamily::triangle()},
        kEdgeTri,
        {SubgraphFamily::wedge()},
        {SubgraphFamily::edge(), SubgraphFamily::star(3)},
        {SubgraphFamily::edge(), SubgraphFamily::wedge(), SubgraphFamily::triangle()},
    };
    for (const auto& fams : lists) {
        StatTable t = enumerate_graphs(4, fams);
        auto expect = brute_table(4, fams);
        REQUIRE(t.size() == expect.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            auto it = expect.find(t.keys[i]);
            REQUIRE(it != expect.end());
            CHECK(t.counts[i] == it->second);
        }
    }
}

TEST_CASE("total graph count is 2^C(n,2)") {
    for (int n = 2; n <= 7; ++n) {
        StatTable t = enumerate_graphs(n, kEdgeTri);
        CHECK(t.total_graphs() == (1ull << (n * (n - 1) / 2)));
    }
}

TEST_CASE("triangle-free count at n=4 is 41") {
    StatTable t = enumerate_graphs(4, {SubgraphFamily::triangle()});
    CHECK(micro_count(t, {0}) == 41);
}

TEST_CASE("chunked enumeration is independent of thread count") {
    for (int threads : {1, 2, 3, 5}) {
        StatTable t = enumerate_graphs(6, kEdgeTri, threads);
        StatTable ref = enumerate_graphs(6, kEdgeTri, 1);
        REQUIRE(t.size() == ref.size());
        CHECK(t.keys == ref.keys);
        CHECK(t.counts == ref.counts);
    }
    // high-arity stars overflow the dense bucket budget and take the sparse
    // path; results must not depend on it
    std::vector<SubgraphFamily> wide = {SubgraphFamily::edge(), SubgraphFamily::wedge(),
                                        SubgraphFamily::star(4)};
    StatTable s1 = enumerate_graphs(6, wide, 1);
    StatTable s3 = enumerate_graphs(6, wide, 3);
    CHECK(s1.keys == s3.keys);
    CHECK(s1.counts == s3.counts);
    CHECK(s1.total_graphs() == (1ull << 15));
    auto expect = brute_table(5, wide);
    StatTable s5 = enumerate_graphs(5, wide);
    REQUIRE(s5.size() == expect.size());
    for (std::size_t i = 0; i < s5.size(); ++i)
        CHECK(s5.counts[i] == expect[s5.keys[i]]);
}

TEST_CASE("enumeration argument guards") {
    CHECK_THROWS_AS(enumerate_graphs(9, kEdgeTri), usage_error);
    CHECK_THROWS_AS(enumerate_graphs(1, kEdgeTri), usage_error);
    CHECK_THROWS_AS(enumerate_graphs(4, {}), usage_error);
}

TEST_CASE("partition function at theta = 0") {
    for (int n : {3, 4, 5, 6}) {
        StatTable t = enumerate_graphs(n, kEdgeTri);
        double expect = (n * (n - 1) / 2) * std::log(2.0) / (n * n);
        CHECK(partition_log(t, {0.0, 0.0}) == doctest::Approx(expect).epsilon(1e-13));
    }
    StatTable t4 = enumerate_graphs(4, kEdgeTri);
    CHECK(partition_log(t4, {0.0, 0.0}) == doctest::Approx(0.259930192725).epsilon(1e-9));
}

TEST_CASE("edge-only partition function factorizes over independent edges") {
    // psi(theta) = (1/n^2) log (1+e^{2 theta})^{C(n,2)}
    StatTable t = enumerate_graphs(3, {SubgraphFamily::edge()});
    for (double theta : {-2.0, -0.5, 0.0, 0.3, 1.7}) {
        double expect = 3.0 * std::log1p(std::exp(2.0 * theta)) / 9.0;
        CHECK(partition_log(t, {theta}) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("deep negative triangle multiplier recovers the triangle-free count") {
    StatTable t = enumerate_graphs(4, {SubgraphFamily::triangle()});
    double psi = partition_log(t, {-50.0});
    CHECK(psi == doctest::Approx(std::log(41.0) / 16.0).epsilon(1e-10));
}

TEST_CASE("canonical means at theta = 0 are the uniform moments") {
    for (int n : {3, 4, 5, 6}) {
        StatTable t = enumerate_graphs(n, kEdgeTri);
        std::vector<double> mean = canonical_mean(t, {0.0, 0.0});
        CHECK(mean[0] == doctest::Approx((n - 1.0) / (2.0 * n)).epsilon(1e-13));
        // E[trace A^3]/n^3 = 6 C(n,3) / 8 / n^3
        double tri = 6.0 * n * (n - 1) * (n - 2) / 6.0 / 8.0 / std::pow(n, 3.0);
        CHECK(mean[1] == doctest::Approx(tri).epsilon(1e-13));
    }
    StatTable t4 = enumerate_graphs(4, kEdgeTri);
    CHECK(canonical_mean(t4, {0.0, 0.0})[0] == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(canonical_mean(t4, {0.0, 0.0})[1] == doctest::Approx(0.046875).epsilon(1e-14));
}

TEST_CASE("edge-only tilt reproduces the independent-edge mean") {
    StatTable t = enumerate_graphs(5, {SubgraphFamily::edge()});
    double theta = 0.5 * std::log(0.7 / 0.3);
    CHECK(canonical_mean(t, {theta})[0] == doctest::Approx(0.7 * 4.0 / 5.0).epsilon(1e-12));
}

TEST_CASE("canonical mean equals the finite-difference gradient of psi") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unif(-0.8, 0.8);
    StatTable t = enumerate_graphs(5, kEdgeTri);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> theta = {unif(rng), unif(rng)};
        std::vector<double> mean = canonical_mean(t, theta);
        double eps = 1e-6;
        for (int k = 0; k < 2; ++k) {
            std::vector<double> tp = theta, tm = theta;
            tp[k] += eps;
            tm[k] -= eps;
            double fd = (partition_log(t, tp) - partition_log(t, tm)) / (2.0 * eps);
            CHECK(mean[k] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("covariance of T is positive semi-definite at random theta") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> unif(-0.8, 0.8);
    StatTable t = enumerate_graphs(5, kEdgeTri);
    for (int trial = 0; trial < 20; ++trial) {
        CanonicalMoments mo = canonical_moments(t, {unif(rng), unif(rng)});
        double a = mo.cov[0], b = mo.cov[1], c = mo.cov[2], d = mo.cov[3];
        CHECK(b == doctest::Approx(c).epsilon(1e-12));
        CHECK(a >= -1e-15);
        CHECK(d >= -1e-15);
        CHECK(a * d - b * c >= -1e-18); // 2x2 determinant
    }
}

TEST_CASE("relative entropy closed form: n=3 edge-only, one edge") {
    StatTable t = enumerate_graphs(3, {SubgraphFamily::edge()});
    // target E = 1 -> p = 1/3 per edge, theta = (1/2) log(p/(1-p))
    double theta = 0.5 * std::log(0.5); // p/(1-p) = 1/2
    EntropyValue ev = relative_entropy(t, {1}, {theta});
    CHECK(ev.S_n == doctest::Approx(std::log(9.0 / 4.0)).epsilon(1e-10));
    CHECK(ev.s_n == doctest::Approx(std::log(9.0 / 4.0) / 9.0).epsilon(1e-10));
}

TEST_CASE("relative entropy rejects unfitted multipliers and infeasible keys") {
    StatTable t = enumerate_graphs(3, {SubgraphFamily::edge()});
    CHECK_THROWS_AS(relative_entropy(t, {1}, {2.0}), numerical_error);
    CHECK_THROWS_AS(relative_entropy(t, {7}, {0.0}), infeasible_error);
}

TEST_CASE("unconstrained table gives zero relative entropy") {
    StatTable t = StatTable::unconstrained(4);
    CHECK(t.total_graphs() == 64);
    EntropyValue ev = relative_entropy(t, {}, {});
    CHECK(ev.S_n == 0.0);
}

TEST_CASE("stat_key_of_graph matches the bucketing convention") {
    std::vector<SubgraphFamily> fams = {SubgraphFamily::edge(), SubgraphFamily::wedge(),
                                        SubgraphFamily::triangle(), SubgraphFamily::star(3)};
    LabeledGraph g = LabeledGraph::from_edges(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
    StatKey key = stat_key_of_graph(fams, g);
    CHECK(key[0] == 4); // edges
    CHECK(key[1] == static_cast<std::int64_t>(oracle::brute_hom(fams[1], g)));
    CHECK(key[2] == 1); // one triangle
    CHECK(key[3] == static_cast<std::int64_t>(oracle::brute_hom(fams[3], g)));
}

TEST_CASE("density vectors of keys") {
    StatTable t = enumerate_graphs(4, kEdgeTri);
    std::vector<double> d = t.density_of({3, 1});
    CHECK(d[0] == doctest::Approx(6.0 / 16.0).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(6.0 / 64.0).epsilon(1e-15));
}

TEST_CASE("triangle-free log-counts sit above the bipartite rate prediction") {
    // (1/n^2) log Omega_{tri-free} approaches log(2)/4 from above as n grows;
    // the gap stays small and one-sided over the reachable range
    double limit = std::log(2.0) / 4.0;
    for (int n : {5, 6, 7}) {
        StatTable t = enumerate_graphs(n, {SubgraphFamily::triangle()});
        double v = std::log(static_cast<double>(micro_count(t, {0}))) / (n * n);
        CHECK(v > limit);
        CHECK(v < limit + 0.08);
    }
}
