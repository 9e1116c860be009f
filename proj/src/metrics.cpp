#include "relsamp/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace relsamp {

namespace {

void check_input(const std::vector<double>& scores, const std::vector<int>& labels,
                 bool need_negatives) {
    if (scores.empty() || scores.size() != labels.size())
        throw std::invalid_argument("metrics: scores and labels must be non-empty, equal length");
    long pos = 0, neg = 0;
    for (int y : labels) (y != 0 ? pos : neg)++;
    if (pos == 0) throw std::invalid_argument("metrics: no positive labels");
    if (need_negatives && neg == 0) throw std::invalid_argument("metrics: no negative labels");
}

// Indices sorted by score descending; ties keep stable order (irrelevant to
// both metrics, which collapse tie groups).
std::vector<size_t> order_desc(const std::vector<double>& scores) {
    std::vector<size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](size_t a, size_t b) { return scores[a] > scores[b]; });
    return idx;
}

}  // namespace

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_input(scores, labels, true);
    const std::vector<size_t> idx = order_desc(scores);
    double pos_total = 0, neg_total = 0;
    for (int y : labels) (y != 0 ? pos_total : neg_total) += 1.0;
    // sweep ascending so "neg seen so far" counts neg strictly below the group
    double wins = 0.0;
    double neg_below = 0.0;
    size_t i = idx.size();
    while (i > 0) {
        size_t j = i;
        double gp = 0, gn = 0;
        while (j > 0 && scores[idx[j - 1]] == scores[idx[i - 1]]) {
            (labels[idx[j - 1]] != 0 ? gp : gn) += 1.0;
            --j;
        }
        wins += gp * (neg_below + 0.5 * gn);
        neg_below += gn;
        i = j;
    }
    return wins / (pos_total * neg_total);
}

double pr_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_input(scores, labels, false);
    const std::vector<size_t> idx = order_desc(scores);
    double pos_total = 0;
    for (int y : labels) pos_total += y != 0 ? 1.0 : 0.0;
    double tp = 0, fp = 0, area = 0, prev_recall = 0;
    size_t i = 0;
    while (i < idx.size()) {
        size_t j = i;
        while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
            (labels[idx[j]] != 0 ? tp : fp) += 1.0;
            ++j;
        }
        const double recall = tp / pos_total;
        const double precision = tp / (tp + fp);
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    return area;
}

}  // namespace relsamp
