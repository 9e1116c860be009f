#pragma once

#include <vector>

namespace relsamp {

// Exact tie-aware ROC-AUC (Mann-Whitney form):
// (#(pos > neg) + 0.5 * #(pos == neg)) / (P * N).
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

// Exact PR-AUC under the average-precision convention: descending-score sweep,
// tie groups collapse to one threshold, area = sum (R_i - R_{i-1}) * P_i.
double pr_auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct MetricsReport {
    double pr_auc = 0.0;
    double roc_auc = 0.0;
    double loss = 0.0;
    double ms_sampling = 0.0;
    double ms_forward = 0.0;
    double ms_backward = 0.0;
};

}  // namespace relsamp
