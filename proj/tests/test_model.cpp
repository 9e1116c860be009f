#include <cmath>
#include <vector>

#include "doctest.h"
#include "relsamp/graph.hpp"
#include "relsamp/model.hpp"

using namespace relsamp;

namespace {

MultiRelGraph toy() {
    return MultiRelGraph::from_edges(
        5, 3, {{0, 0, 1}, {1, 0, 2}, {0, 1, 3}, {2, 1, 3}, {3, 2, 4}, {0, 2, 4}});
}

ModelConfig base_config() {
    ModelConfig cfg;
    cfg.hidden_dim = 4;
    cfg.num_layers = 2;
    cfg.num_bases = 2;
    cfg.decoder = DecoderKind::distmult;
    return cfg;
}

}  // namespace

TEST_CASE("init shapes and parameter inventory") {
    MultiRelGraph g = toy();
    ModelConfig cfg = base_config();
    Model m = Model::init(g, cfg, {}, 3);

    CHECK(m.num_nodes == 5);
    CHECK(m.num_relations == 3);
    CHECK(m.one_hot_features);
    CHECK(m.feature_dim == 5);
    REQUIRE(m.layers.size() == 2);
    CHECK(m.layers[0].use_basis);  // num_bases 2 < 3 relations
    REQUIRE(m.layers[0].bases.size() == 2);
    CHECK(m.layers[0].bases[0].rows == 5);  // one-hot input dim
    CHECK(m.layers[0].bases[0].cols == 4);
    CHECK(m.layers[1].bases[0].rows == 4);
    CHECK(m.layers[0].coefficients.rows == 3);
    CHECK(m.layers[0].self_weight.rows == 5);

    // basis layers: 2 bases + coefficients + self per layer, plus distmult diag
    CHECK(m.tensor_parameters().size() == 2 * (2 + 1 + 1) + 1);

    cfg.num_bases = 8;  // >= |R|: full per-relation matrices
    Model full = Model::init(g, cfg, {}, 3);
    CHECK(!full.layers[0].use_basis);
    REQUIRE(full.layers[0].full.size() == 3);
    CHECK(full.tensor_parameters().size() == 2 * (3 + 1) + 1);

    Model again = Model::init(g, cfg, {}, 3);
    CHECK(again.layers[0].full[0].v == full.layers[0].full[0].v);  // seeded init
}

TEST_CASE("scores are probabilities for both decoders") {
    MultiRelGraph g = toy();
    for (DecoderKind kind : {DecoderKind::distmult, DecoderKind::dedicom}) {
        ModelConfig cfg = base_config();
        cfg.decoder = kind;
        Model m = Model::init(g, cfg, {}, 5);
        ad::Tape tape;
        ModelGraph mg(tape, m);
        ad::Var h = mg.encode_full(g);
        ad::Var p = mg.score_edges(h, g.edges());
        const ad::Mat& v = tape.value(p);
        REQUIRE(v.rows == static_cast<int>(g.edges().size()));
        for (double x : v.v) {
            CHECK(x > 0.0);
            CHECK(x < 1.0);
        }
    }
}

TEST_CASE("relation weights are invariant to a constant logit shift") {
    // c(u,r) is a softmax over the node's relations, so l and l + const encode
    // identically under relation weighting
    MultiRelGraph g = toy();
    ModelConfig cfg = base_config();
    Model a = Model::init(g, cfg, {}, 11);
    a.weighting = WeightingMode::relation_weighted;
    a.logits.l = {0.3, -1.2, 0.8};

    Model b = Model::init(g, cfg, {}, 11);  // identical tensors
    b.weighting = WeightingMode::relation_weighted;
    b.logits.l = {0.3 + 5.0, -1.2 + 5.0, 0.8 + 5.0};

    ad::Tape t1, t2;
    ModelGraph m1(t1, a), m2(t2, b);
    const ad::Mat& h1 = t1.value(m1.encode_full(g));
    const ad::Mat& h2 = t2.value(m2.encode_full(g));
    REQUIRE(h1.v.size() == h2.v.size());
    for (size_t i = 0; i < h1.v.size(); ++i)
        CHECK(h1.v[i] == doctest::Approx(h2.v[i]).epsilon(1e-12));
}
