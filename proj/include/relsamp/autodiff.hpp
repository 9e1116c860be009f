#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace relsamp::ad {

// Dense row-major matrix of doubles. Everything in the engine is 64-bit.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }
    size_t size() const { return v.size(); }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
bool same_shape(const Mat& a, const Mat& b);

// Handle to a node on a Tape.
struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

// Reverse-mode tape over dense matrices. Build a fresh tape per forward pass;
// parameters live outside and are fed in via input().
class Tape {
public:
    Var input(Mat value, bool requires_grad = false);

    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);                // elementwise
    Var mul_scalar(Var a, double s);      // constant scalar
    Var mul_entry(Var a, Var s, int i, int j);  // a * s(i,j), grads to both
    Var matmul(Var a, Var b);
    Var relu(Var a);
    Var sigmoid(Var a);
    Var softmax(Var a);                   // over a 1 x K vector
    Var row_sum(Var a);                   // rows x cols -> rows x 1
    Var gather_rows(Var x, std::vector<int> idx);
    Var scatter_add_rows(Var x, std::vector<int> idx, int num_rows);
    Var scale_rows(Var x, std::vector<double> scales);  // constant per-row scale
    // Row i of x scaled by s(idx[i].first, idx[i].second); grads to x and s.
    Var scale_rows_gather(Var x, Var s, std::vector<std::pair<int, int>> idx);
    // W = sum_b coeffs(r, b) * bases[b], one node regardless of basis count.
    Var basis_combine(const std::vector<Var>& bases, Var coeffs, int r);
    // c(u,r) = exp(l_r) / sum_r' counts(u,r') exp(l_r'); logits is 1 x R,
    // counts is a constant N x R neighborhood-size matrix.
    Var relation_weights(Var logits, Mat counts);
    // Mean binary cross-entropy; probabilities clamped to [1e-12, 1-1e-12].
    Var bce_loss(Var probs, Mat labels);

    void backward(Var loss);

    const Mat& value(Var v) const;
    const Mat& grad(Var v) const;
    size_t num_nodes() const { return nodes_.size(); }

    static constexpr double kBceClamp = 1e-12;

private:
    struct Node {
        Mat value;
        Mat grad;
        bool requires_grad = false;
        std::function<void()> backprop;  // accumulates into input grads
    };

    Var push(Mat value, bool requires_grad, std::function<void()> backprop = {});
    Node& at(Var v);
    const Node& at(Var v) const;

    std::vector<Node> nodes_;
    bool backward_done_ = false;
};

// Adam with bias correction. Moments are keyed by position in the parameter
// list, which must stay stable across steps.
struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.99;  // per training setup; 0.9 is the usual default
    double beta2 = 0.999;
    double eps = 1e-8;
};

class Adam {
public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    void step(std::vector<Mat*> params, const std::vector<const Mat*>& grads);
    void reset();

    const AdamConfig& config() const { return cfg_; }
    int step_count() const { return t_; }
    std::vector<Mat>& first_moments() { return m_; }
    std::vector<Mat>& second_moments() { return v_; }
    void restore(int t, std::vector<Mat> m, std::vector<Mat> v);

private:
    AdamConfig cfg_;
    int t_ = 0;
    std::vector<Mat> m_;
    std::vector<Mat> v_;
};

[[noreturn]] void shape_error(const std::string& op, const Mat& a, const Mat& b);

}  // namespace relsamp::ad
