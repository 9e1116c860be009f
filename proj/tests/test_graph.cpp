#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "relsamp/graph.hpp"
#include "relsamp/io_util.hpp"

using namespace relsamp;

namespace {

MultiRelGraph tiny() {
    // 4 nodes, 2 relations: r0 path 0-1-2, r1 edges 0-2, 0-3
    return MultiRelGraph::from_edges(4, 2, {{0, 0, 1}, {1, 0, 2}, {0, 1, 2}, {0, 1, 3}});
}

}  // namespace

TEST_CASE("adjacency queries") {
    MultiRelGraph g = tiny();
    CHECK(g.num_nodes() == 4);
    CHECK(g.num_relations() == 2);
    CHECK(g.relation_counts() == std::vector<int64_t>{2, 2});

    auto n01 = g.neighbors(0, 0);
    REQUIRE(n01.size() == 1);
    CHECK(n01[0] == 1);
    auto n11 = g.neighbors(1, 0);
    REQUIRE(n11.size() == 2);  // sorted
    CHECK(n11[0] == 0);
    CHECK(n11[1] == 2);
    CHECK(g.degree(0, 1) == 2);
    CHECK(g.total_degree(0) == 3);
    CHECK(g.total_degree(3) == 1);

    CHECK(g.has_edge(0, 0, 1));
    CHECK(g.has_edge(1, 0, 0));  // undirected
    CHECK(!g.has_edge(0, 0, 2));
    CHECK(!g.has_edge(1, 1, 2));

    ad::Mat counts = g.neighbor_count_matrix();
    CHECK(counts(0, 0) == 1);
    CHECK(counts(0, 1) == 2);
    CHECK(counts(3, 0) == 0);
    CHECK(counts(3, 1) == 1);
}

TEST_CASE("tsv round-trip preserves names and edges") {
    const std::string path = "/tmp/relsamp_test_graph.tsv";
    write_file_atomic(path,
                      "alice\tknows\tbob\n"
                      "bob\tknows\tcarol\n"
                      "alice\tworks_with\tcarol\n");
    MultiRelGraph g = MultiRelGraph::load_tsv(path);
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_relations() == 2);
    CHECK(g.node_names()[0] == "alice");
    CHECK(g.relation_names()[1] == "works_with");

    const std::string copy = "/tmp/relsamp_test_graph2.tsv";
    g.write_tsv(copy);
    MultiRelGraph h = MultiRelGraph::load_tsv(copy);
    CHECK(h.edges() == g.edges());
    CHECK(h.node_names() == g.node_names());
    std::remove(path.c_str());
    std::remove(copy.c_str());
}

TEST_CASE("split is a disjoint partition with the requested sizes") {
    std::vector<Edge> edges;
    for (int u = 0; u < 50; ++u)
        for (int v = u + 1; v < 50; v += 7) edges.push_back({u, 0, v});
    MultiRelGraph g = MultiRelGraph::from_edges(50, 1, edges);

    EdgeSplit s = split_edges(g, 0.6, 0.2, 0.2, 123);
    const size_t total = g.edges().size();
    CHECK(s.train.size() + s.valid.size() + s.test.size() == total);
    CHECK(s.train.size() == static_cast<size_t>(std::llround(0.6 * total)));

    std::set<Edge> seen(s.train.begin(), s.train.end());
    seen.insert(s.valid.begin(), s.valid.end());
    seen.insert(s.test.begin(), s.test.end());
    CHECK(seen.size() == total);  // no duplicates across splits

    EdgeSplit again = split_edges(g, 0.6, 0.2, 0.2, 123);
    CHECK(again.train == s.train);  // seeded determinism
}

TEST_CASE("negative samples are absent from the graph") {
    MultiRelGraph g = tiny();
    std::vector<Edge> negs = sample_negatives(g, g.edges(), 40, 7);
    CHECK(negs.size() == 40);
    for (const Edge& e : negs) {
        CHECK(!g.has_edge(e.u, e.r, e.v));
        CHECK(e.u != e.v);
        CHECK(e.u < e.v);  // canonical
    }
}

TEST_CASE("inverse-frequency logits") {
    std::vector<Edge> edges{{0, 0, 1}};
    for (int v = 1; v <= 10; ++v) edges.push_back({0, 1, v + 1});
    MultiRelGraph g = MultiRelGraph::from_edges(12, 2, edges);
    std::vector<double> l = inverse_frequency_logits(g);
    REQUIRE(l.size() == 2);
    CHECK(l[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(l[1] == doctest::Approx(-std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("dense feature file loads") {
    const std::string path = "/tmp/relsamp_test_feat.txt";
    write_file_atomic(path, "2 3\n1 2 3\n4 5 6\n");
    ad::Mat f = load_feature_file(path);
    REQUIRE(f.rows == 2);
    REQUIRE(f.cols == 3);
    CHECK(f(1, 2) == 6.0);
    std::remove(path.c_str());
}
