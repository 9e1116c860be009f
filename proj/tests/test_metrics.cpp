#include <vector>

#include "doctest.h"
#include "relsamp/metrics.hpp"

using namespace relsamp;

TEST_CASE("roc-auc hand example") {
    // pos {0.9, 0.7}, neg {0.8, 0.6}: 3 of 4 pairs ordered correctly
    std::vector<double> s{0.9, 0.8, 0.7, 0.6};
    std::vector<int> y{1, 0, 1, 0};
    CHECK(roc_auc(s, y) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("roc-auc of a perfect and a reversed ranking") {
    std::vector<double> s{3, 2, 1, 0};
    CHECK(roc_auc(s, {1, 1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(roc_auc(s, {0, 0, 1, 1}) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("all-tied scores give chance roc and prevalence pr") {
    std::vector<double> s{0.5, 0.5, 0.5, 0.5, 0.5};
    std::vector<int> y{1, 0, 1, 0, 0};
    CHECK(roc_auc(s, y) == doctest::Approx(0.5).epsilon(1e-15));
    // one tie group: precision = prevalence at recall 1
    CHECK(pr_auc(s, y) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("pr-auc hand example") {
    // descending sweep: t=0.9 -> P=1, R=1/2; t=0.7 -> P=2/3, R=1
    std::vector<double> s{0.9, 0.8, 0.7};
    std::vector<int> y{1, 0, 1};
    CHECK(pr_auc(s, y) == doctest::Approx(0.5 * 1.0 + 0.5 * (2.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("pr-auc of a perfect ranking is one") {
    std::vector<double> s{0.9, 0.8, 0.7, 0.2, 0.1};
    std::vector<int> y{1, 1, 1, 0, 0};
    CHECK(pr_auc(s, y) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tie group counted at one threshold") {
    // scores: pos 0.8, tied pair (0.5 pos, 0.5 neg), neg 0.2
    std::vector<double> s{0.8, 0.5, 0.5, 0.2};
    std::vector<int> y{1, 1, 0, 0};
    // thresholds: 0.8 -> P=1, R=1/2; 0.5 -> P=2/3, R=1; area = 1/2 + 1/2 * 2/3
    CHECK(pr_auc(s, y) == doctest::Approx(0.5 + 0.5 * 2.0 / 3.0).epsilon(1e-15));
    // roc: pairs (0.8 vs 0.5), (0.8 vs 0.2), (0.5 vs 0.2) win, (0.5 vs 0.5) half
    CHECK(roc_auc(s, y) == doctest::Approx(3.5 / 4.0).epsilon(1e-15));
}
