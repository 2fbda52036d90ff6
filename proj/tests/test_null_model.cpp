#include <doctest.h>

#include <cmath>
#include <numeric>

#include "r2v/null_model.hpp"
#include "test_util.hpp"

using namespace r2v;
using namespace r2v::testutil;

namespace {

NodeGrouping halves4() { return {{0, 0, 1, 1}, 2}; }

double block_entry(const BaselineModel& m, GroupId a, GroupId b) {
    for (const auto& [g, p] : m.block_rows[a])
        if (g == b) return p;
    return 0.0;
}

}  // namespace

TEST_CASE("fit_dcsbm on path with two halves") {
    auto m = fit_dcsbm(path4(), halves4());
    CHECK(m.group_stubs == std::vector<double>{3, 3});
    CHECK(block_entry(m, 0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(block_entry(m, 0, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(block_entry(m, 1, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(block_entry(m, 1, 1) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("fit_dcsbm with B=1 gives D=[2m], P=[[1]]") {
    Graph g = random_connected(20, 1.0, 3);
    auto m = fit_dcsbm(g, single_group(g.n()));
    CHECK(m.group_stubs[0] == doctest::Approx(g.total_weight_2m));
    CHECK(block_entry(m, 0, 0) == doctest::Approx(1.0));
}

TEST_CASE("fit_dcsbm on triangle with singleton groups") {
    auto m = fit_dcsbm(triangle(), identity_grouping(3));
    for (GroupId a = 0; a < 3; ++a)
        for (GroupId b = 0; b < 3; ++b)
            CHECK(block_entry(m, a, b) == doctest::Approx(a == b ? 0.0 : 0.5));
}

TEST_CASE("fit_dcsbm rejects empty groups") {
    NodeGrouping bad{{0, 0, 0, 0}, 2};
    CHECK_THROWS_AS(fit_dcsbm(path4(), bad), std::invalid_argument);
}

TEST_CASE("P_SBM rows sum to 1 and satisfy detailed balance") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Graph g = random_connected(30, 1.5, seed);
        auto grp = random_grouping(g.n(), 3, seed);
        auto m = fit_dcsbm(g, grp);
        for (GroupId a = 0; a < 3; ++a) {
            double s = 0.0;
            for (const auto& [b, p] : m.block_rows[a]) s += p;
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
            for (GroupId b = 0; b < 3; ++b)
                CHECK(m.group_stubs[a] * block_entry(m, a, b) ==
                      doctest::Approx(m.group_stubs[b] * block_entry(m, b, a)));
        }
    }
}

TEST_CASE("baseline_row on path halves at T=1") {
    auto m = fit_dcsbm(path4(), halves4());
    auto row = baseline_row(m, 0, 1);
    CHECK(row[0] == doctest::Approx(2.0 / 9.0));
    CHECK(row[1] == doctest::Approx(4.0 / 9.0));
    CHECK(row[2] == doctest::Approx(2.0 / 9.0));
    CHECK(row[3] == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("Table 1 reductions") {
    SUBCASE("B=1 equals d_j / 2m for any T and i") {
        Graph g = random_connected(15, 1.2, 11);
        auto m = config_model_baseline(g);
        for (int T : {1, 3, 7}) {
            auto row = baseline_row(m, 4, T);
            for (NodeId j = 0; j < g.n(); ++j)
                CHECK(row[j] == doctest::Approx(g.deg[j] / g.total_weight_2m)
                                    .epsilon(1e-12));
        }
    }
    SUBCASE("regular degrees give 1/N") {
        Graph g = cycle(8);
        auto m = config_model_baseline(g);
        auto row = baseline_row(m, 0, 4);
        for (double p : row) CHECK(p == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    }
}

TEST_CASE("config baseline examples") {
    auto mp = config_model_baseline(path4());
    auto row = baseline_row(mp, 2, 1);
    CHECK(row == std::vector<double>{1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6});

    auto mt = config_model_baseline(triangle());
    for (double p : baseline_row(mt, 0, 2)) CHECK(p == doctest::Approx(1.0 / 3.0));

    auto ms = config_model_baseline(star(3));
    auto srow = baseline_row(ms, 1, 1);
    CHECK(srow[0] == doctest::Approx(0.5));
    CHECK(srow[1] == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("erdos_renyi_baseline is uniform") {
    auto m4 = erdos_renyi_baseline(4);
    for (double p : baseline_row(m4, 2, 3)) CHECK(p == doctest::Approx(0.25));
    auto m1 = erdos_renyi_baseline(1);
    CHECK(baseline_row(m1, 0, 1)[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(erdos_renyi_baseline(0), std::invalid_argument);
}

TEST_CASE("baseline_row validates T and sums to 1 on random instances") {
    Graph g = random_connected(25, 1.5, 5);
    auto m = fit_dcsbm(g, random_grouping(g.n(), 4, 5));
    CHECK_THROWS_AS(baseline_row(m, 0, 0), std::invalid_argument);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Graph gg = random_connected(10 + seed, 1.0 + 0.1 * seed, seed);
        auto grp = random_grouping(gg.n(), 2 + seed % 3, seed);
        auto mm = fit_dcsbm(gg, grp);
        for (int T : {1, 2, 5}) {
            auto row = baseline_row(mm, static_cast<NodeId>(seed % gg.n()), T);
            CHECK(std::accumulate(row.begin(), row.end(), 0.0) ==
                  doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("null model preserves the stationary degree distribution") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Graph g = random_connected(20, 1.3, seed);
        auto m = fit_dcsbm(g, random_grouping(g.n(), 3, seed));
        int T = 1 + static_cast<int>(seed % 5);
        std::vector<double> marg(g.n(), 0.0);
        for (NodeId i = 0; i < g.n(); ++i) {
            auto row = baseline_row(m, i, T);
            for (NodeId j = 0; j < g.n(); ++j)
                marg[j] += g.deg[i] / g.total_weight_2m * row[j];
        }
        for (NodeId j = 0; j < g.n(); ++j)
            CHECK(marg[j] == doctest::Approx(g.deg[j] / g.total_weight_2m)
                                 .epsilon(1e-10));
    }
}

TEST_CASE("B=1 dcSBM equals config baseline exactly") {
    Graph g = random_connected(18, 1.2, 9);
    auto m1 = fit_dcsbm(g, single_group(g.n()));
    auto m2 = config_model_baseline(g);
    auto r1 = baseline_row(m1, 3, 4);
    auto r2 = baseline_row(m2, 3, 4);
    for (NodeId j = 0; j < g.n(); ++j)
        CHECK(std::abs(r1[j] - r2[j]) <= 1e-12);
}

TEST_CASE("sample_dcsbm reproduces expected degrees") {
    Graph g = random_connected(12, 1.0, 21);
    auto m = fit_dcsbm(g, random_grouping(g.n(), 2, 21));

    const int n_samples = 1000;
    std::vector<double> mean_deg(g.n(), 0.0), sq(g.n(), 0.0);
    for (int s = 0; s < n_samples; ++s) {
        Graph sample = sample_dcsbm(m, 1000 + s);
        for (NodeId i = 0; i < g.n(); ++i) {
            mean_deg[i] += sample.deg[i];
            sq[i] += sample.deg[i] * sample.deg[i];
        }
    }
    for (NodeId i = 0; i < g.n(); ++i) {
        double mean = mean_deg[i] / n_samples;
        double var = sq[i] / n_samples - mean * mean;
        double stderr3 = 3.0 * std::sqrt(var / n_samples);
        CHECK(std::abs(mean - g.deg[i]) <= stderr3 + 1e-9);
    }
}

TEST_CASE("sample_dcsbm reproduces expected group stub counts") {
    Graph g = random_connected(15, 1.4, 33);
    auto grp = random_grouping(g.n(), 3, 33);
    auto m = fit_dcsbm(g, grp);

    const int n_samples = 600;
    // expected stub counts D_g * P(g,g')
    std::vector<std::vector<double>> sum(3, std::vector<double>(3, 0.0));
    std::vector<std::vector<double>> sqsum(3, std::vector<double>(3, 0.0));
    for (int s = 0; s < n_samples; ++s) {
        Graph sample = sample_dcsbm(m, 5000 + s);
        std::vector<std::vector<double>> stubs(3, std::vector<double>(3, 0.0));
        for (NodeId i = 0; i < g.n(); ++i)
            for (const auto& [j, w] : sample.adj[i]) {
                if (j < i) continue;
                if (i == j)
                    stubs[grp.labels[i]][grp.labels[i]] += 2.0 * w;
                else {
                    stubs[grp.labels[i]][grp.labels[j]] += w;
                    stubs[grp.labels[j]][grp.labels[i]] += w;
                }
            }
        for (GroupId a = 0; a < 3; ++a)
            for (GroupId b = 0; b < 3; ++b) {
                sum[a][b] += stubs[a][b];
                sqsum[a][b] += stubs[a][b] * stubs[a][b];
            }
    }
    for (GroupId a = 0; a < 3; ++a)
        for (GroupId b = 0; b < 3; ++b) {
            double expect = 0.0;
            for (const auto& [gp, p] : m.block_rows[a])
                if (gp == b) expect = m.group_stubs[a] * p;
            double mean = sum[a][b] / n_samples;
            double var = sqsum[a][b] / n_samples - mean * mean;
            double stderr3 = 3.0 * std::sqrt(var / n_samples);
            CHECK(std::abs(mean - expect) <= stderr3 + 1e-9);
        }
}

TEST_CASE("sample_dcsbm is deterministic given seed") {
    Graph g = random_connected(10, 1.0, 2);
    auto m = config_model_baseline(g);
    Graph a = sample_dcsbm(m, 42);
    Graph b = sample_dcsbm(m, 42);
    REQUIRE(a.n() == b.n());
    for (NodeId i = 0; i < a.n(); ++i) CHECK(a.adj[i] == b.adj[i]);
}

TEST_CASE("load_grouping parses and validates") {
    std::vector<std::string> names{"a", "b", "c"};
    {
        std::istringstream in("a\tx\nb\ty\nc\tx\n");
        auto grp = load_grouping(in, names);
        CHECK(grp.n_groups == 2);
        CHECK(grp.labels == std::vector<GroupId>{0, 1, 0});
    }
    {
        std::istringstream in("a\tx\n");
        CHECK_THROWS_AS(load_grouping(in, names), std::runtime_error);
    }
    {
        std::istringstream in("a\tx\n");
        auto grp = load_grouping(in, names, /*default_group=*/true);
        CHECK(grp.labels == std::vector<GroupId>{0, 0, 0});
    }
}
