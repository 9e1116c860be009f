#include "relsamp/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relsamp::ad {

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols != b.rows) shape_error("matmul", a, b);
    Mat out(a.rows, b.cols);
    // ikj order keeps the inner loop contiguous.
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = &a.v[static_cast<size_t>(i) * a.cols];
        double* orow = &out.v[static_cast<size_t>(i) * out.cols];
        for (int k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = &b.v[static_cast<size_t>(k) * b.cols];
            for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Mat transpose(const Mat& a) {
    Mat out(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) out(j, i) = a(i, j);
    return out;
}

bool same_shape(const Mat& a, const Mat& b) { return a.rows == b.rows && a.cols == b.cols; }

void shape_error(const std::string& op, const Mat& a, const Mat& b) {
    throw std::invalid_argument(op + ": incompatible shapes (" + std::to_string(a.rows) + "x" +
                                std::to_string(a.cols) + ") vs (" + std::to_string(b.rows) + "x" +
                                std::to_string(b.cols) + ")");
}

Var Tape::push(Mat value, bool requires_grad, std::function<void()> backprop) {
    Node n;
    n.grad = Mat(value.rows, value.cols);
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    n.backprop = std::move(backprop);
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

Tape::Node& Tape::at(Var v) { return nodes_.at(static_cast<size_t>(v.id)); }
const Tape::Node& Tape::at(Var v) const { return nodes_.at(static_cast<size_t>(v.id)); }

const Mat& Tape::value(Var v) const { return at(v).value; }
const Mat& Tape::grad(Var v) const { return at(v).grad; }

Var Tape::input(Mat value, bool requires_grad) { return push(std::move(value), requires_grad); }

Var Tape::add(Var a, Var b) {
    const Mat& av = value(a);
    const Mat& bv = value(b);
    if (!same_shape(av, bv)) shape_error("add", av, bv);
    Mat out = av;
    for (size_t i = 0; i < out.size(); ++i) out.v[i] += bv.v[i];
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, a, b] {
        const Mat& g = at(r).grad;
        Mat& ga = at(a).grad;
        Mat& gb = at(b).grad;
        for (size_t i = 0; i < g.size(); ++i) {
            ga.v[i] += g.v[i];
            gb.v[i] += g.v[i];
        }
    });
}

Var Tape::sub(Var a, Var b) {
    const Mat& av = value(a);
    const Mat& bv = value(b);
    if (!same_shape(av, bv)) shape_error("sub", av, bv);
    Mat out = av;
    for (size_t i = 0; i < out.size(); ++i) out.v[i] -= bv.v[i];
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, a, b] {
        const Mat& g = at(r).grad;
        Mat& ga = at(a).grad;
        Mat& gb = at(b).grad;
        for (size_t i = 0; i < g.size(); ++i) {
            ga.v[i] += g.v[i];
            gb.v[i] -= g.v[i];
        }
    });
}

Var Tape::mul(Var a, Var b) {
    const Mat& av = value(a);
    const Mat& bv = value(b);
    if (!same_shape(av, bv)) shape_error("mul", av, bv);
    Mat out = av;
    for (size_t i = 0; i < out.size(); ++i) out.v[i] *= bv.v[i];
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, a, b] {
        const Mat& g = at(r).grad;
        const Mat& av2 = at(a).value;
        const Mat& bv2 = at(b).value;
        Mat& ga = at(a).grad;
        Mat& gb = at(b).grad;
        for (size_t i = 0; i < g.size(); ++i) {
            ga.v[i] += g.v[i] * bv2.v[i];
            gb.v[i] += g.v[i] * av2.v[i];
        }
    });
}

Var Tape::mul_scalar(Var a, double s) {
    Mat out = value(a);
    for (double& x : out.v) x *= s;
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, a, s] {
        const Mat& g = at(r).grad;
        Mat& ga = at(a).grad;
        for (size_t i = 0; i < g.size(); ++i) ga.v[i] += g.v[i] * s;
    });
}

Var Tape::mul_entry(Var a, Var s, int i, int j) {
    const double sv = value(s)(i, j);
    Mat out = value(a);
    for (double& x : out.v) x *= sv;
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, a, s, i, j, sv] {
        const Mat& g = at(r).grad;
        const Mat& av = at(a).value;
        Mat& ga = at(a).grad;
        Mat& gs = at(s).grad;
        double acc = 0.0;
        for (size_t k = 0; k < g.size(); ++k) {
            ga.v[k] += g.v[k] * sv;
            acc += g.v[k] * av.v[k];
        }
        gs(i, j) += acc;
    });
}

Var Tape::matmul(Var a, Var b) {
    Mat out = relsamp::ad::matmul(value(a), value(b));
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, a, b] {
        const Mat& g = at(r).grad;
        const Mat& av = at(a).value;
        const Mat& bv = at(b).value;
        // dA = G B^T, dB = A^T G
        Mat da = relsamp::ad::matmul(g, transpose(bv));
        Mat db = relsamp::ad::matmul(transpose(av), g);
        Mat& ga = at(a).grad;
        Mat& gb = at(b).grad;
        for (size_t i = 0; i < da.size(); ++i) ga.v[i] += da.v[i];
        for (size_t i = 0; i < db.size(); ++i) gb.v[i] += db.v[i];
    });
}

Var Tape::relu(Var a) {
    Mat out = value(a);
    for (double& x : out.v) x = x > 0.0 ? x : 0.0;
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, a] {
        const Mat& g = at(r).grad;
        const Mat& av = at(a).value;
        Mat& ga = at(a).grad;
        for (size_t i = 0; i < g.size(); ++i)
            if (av.v[i] > 0.0) ga.v[i] += g.v[i];
    });
}

Var Tape::sigmoid(Var a) {
    Mat out = value(a);
    for (double& x : out.v) x = 1.0 / (1.0 + std::exp(-x));
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, a] {
        const Mat& g = at(r).grad;
        const Mat& ov = at(r).value;
        Mat& ga = at(a).grad;
        for (size_t i = 0; i < g.size(); ++i) ga.v[i] += g.v[i] * ov.v[i] * (1.0 - ov.v[i]);
    });
}

Var Tape::softmax(Var a) {
    const Mat& av = value(a);
    if (av.rows != 1) throw std::invalid_argument("softmax: expected a 1 x K vector");
    double mx = av.v[0];
    for (double x : av.v) mx = std::max(mx, x);
    Mat out = av;
    double z = 0.0;
    for (double& x : out.v) {
        x = std::exp(x - mx);
        z += x;
    }
    for (double& x : out.v) x /= z;
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, a] {
        const Mat& g = at(r).grad;
        const Mat& p = at(r).value;
        Mat& ga = at(a).grad;
        double dot = 0.0;
        for (size_t i = 0; i < g.size(); ++i) dot += g.v[i] * p.v[i];
        for (size_t i = 0; i < g.size(); ++i) ga.v[i] += p.v[i] * (g.v[i] - dot);
    });
}

Var Tape::row_sum(Var a) {
    const Mat& av = value(a);
    Mat out(av.rows, 1);
    for (int i = 0; i < av.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < av.cols; ++j) s += av(i, j);
        out(i, 0) = s;
    }
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, a] {
        const Mat& g = at(r).grad;
        Mat& ga = at(a).grad;
        for (int i = 0; i < ga.rows; ++i)
            for (int j = 0; j < ga.cols; ++j) ga(i, j) += g(i, 0);
    });
}

Var Tape::gather_rows(Var x, std::vector<int> idx) {
    const Mat& xv = value(x);
    Mat out(static_cast<int>(idx.size()), xv.cols);
    for (size_t i = 0; i < idx.size(); ++i)
        for (int j = 0; j < xv.cols; ++j) out(static_cast<int>(i), j) = xv(idx[i], j);
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, x, idx = std::move(idx)] {
        const Mat& g = at(r).grad;
        Mat& gx = at(x).grad;
        for (size_t i = 0; i < idx.size(); ++i)
            for (int j = 0; j < g.cols; ++j) gx(idx[i], j) += g(static_cast<int>(i), j);
    });
}

Var Tape::scatter_add_rows(Var x, std::vector<int> idx, int num_rows) {
    const Mat& xv = value(x);
    if (static_cast<int>(idx.size()) != xv.rows)
        throw std::invalid_argument("scatter_add_rows: index count != row count");
    Mat out(num_rows, xv.cols);
    for (size_t i = 0; i < idx.size(); ++i)
        for (int j = 0; j < xv.cols; ++j) out(idx[i], j) += xv(static_cast<int>(i), j);
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, x, idx = std::move(idx)] {
        const Mat& g = at(r).grad;
        Mat& gx = at(x).grad;
        // adjoint of scatter-add is gather
        for (size_t i = 0; i < idx.size(); ++i)
            for (int j = 0; j < gx.cols; ++j) gx(static_cast<int>(i), j) += g(idx[i], j);
    });
}

Var Tape::scale_rows(Var x, std::vector<double> scales) {
    const Mat& xv = value(x);
    if (static_cast<int>(scales.size()) != xv.rows)
        throw std::invalid_argument("scale_rows: scale count != row count");
    Mat out = xv;
    for (int i = 0; i < out.rows; ++i)
        for (int j = 0; j < out.cols; ++j) out(i, j) *= scales[static_cast<size_t>(i)];
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, x, scales = std::move(scales)] {
        const Mat& g = at(r).grad;
        Mat& gx = at(x).grad;
        for (int i = 0; i < gx.rows; ++i)
            for (int j = 0; j < gx.cols; ++j) gx(i, j) += g(i, j) * scales[static_cast<size_t>(i)];
    });
}

Var Tape::scale_rows_gather(Var x, Var s, std::vector<std::pair<int, int>> idx) {
    const Mat& xv = value(x);
    const Mat& sv = value(s);
    if (static_cast<int>(idx.size()) != xv.rows)
        throw std::invalid_argument("scale_rows_gather: index count != row count");
    Mat out = xv;
    for (int i = 0; i < out.rows; ++i) {
        const double c = sv(idx[static_cast<size_t>(i)].first, idx[static_cast<size_t>(i)].second);
        for (int j = 0; j < out.cols; ++j) out(i, j) *= c;
    }
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, x, s, idx = std::move(idx)] {
        const Mat& g = at(r).grad;
        const Mat& xv2 = at(x).value;
        const Mat& sv2 = at(s).value;
        Mat& gx = at(x).grad;
        Mat& gs = at(s).grad;
        for (int i = 0; i < gx.rows; ++i) {
            const auto [a, b] = idx[static_cast<size_t>(i)];
            const double c = sv2(a, b);
            double acc = 0.0;
            for (int j = 0; j < gx.cols; ++j) {
                gx(i, j) += g(i, j) * c;
                acc += g(i, j) * xv2(i, j);
            }
            gs(a, b) += acc;
        }
    });
}

Var Tape::basis_combine(const std::vector<Var>& bases, Var coeffs, int r) {
    if (bases.empty()) throw std::invalid_argument("basis_combine: no bases");
    const Mat& cv = value(coeffs);
    if (cv.cols != static_cast<int>(bases.size()))
        throw std::invalid_argument("basis_combine: coefficient width != basis count");
    Mat out(value(bases[0]).rows, value(bases[0]).cols);
    for (size_t b = 0; b < bases.size(); ++b) {
        const Mat& vb = value(bases[b]);
        if (!same_shape(vb, out)) shape_error("basis_combine", out, vb);
        const double c = cv(r, static_cast<int>(b));
        for (size_t i = 0; i < out.size(); ++i) out.v[i] += c * vb.v[i];
    }
    Var res{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, res, bases, coeffs, r] {
        const Mat& g = at(res).grad;
        const Mat& cv2 = at(coeffs).value;
        Mat& gc = at(coeffs).grad;
        for (size_t b = 0; b < bases.size(); ++b) {
            const Mat& vb = at(bases[b]).value;
            Mat& gb = at(bases[b]).grad;
            const double c = cv2(r, static_cast<int>(b));
            double acc = 0.0;
            for (size_t i = 0; i < g.size(); ++i) {
                gb.v[i] += c * g.v[i];
                acc += g.v[i] * vb.v[i];
            }
            gc(r, static_cast<int>(b)) += acc;
        }
    });
}

Var Tape::relation_weights(Var logits, Mat counts) {
    const Mat& lv = value(logits);
    if (lv.rows != 1 || lv.cols != counts.cols)
        throw std::invalid_argument("relation_weights: logits must be 1 x R matching counts");
    double mx = lv.v[0];
    for (double x : lv.v) mx = std::max(mx, x);
    std::vector<double> z(lv.v.size());
    for (size_t r = 0; r < z.size(); ++r) z[r] = std::exp(lv.v[r] - mx);
    Mat out(counts.rows, counts.cols);
    for (int u = 0; u < counts.rows; ++u) {
        double denom = 0.0;
        for (int r = 0; r < counts.cols; ++r) denom += counts(u, r) * z[static_cast<size_t>(r)];
        if (denom > 0.0)
            for (int r = 0; r < counts.cols; ++r) out(u, r) = z[static_cast<size_t>(r)] / denom;
    }
    Var res{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, res, logits, counts = std::move(counts)] {
        const Mat& g = at(res).grad;
        const Mat& c = at(res).value;  // c(u,r)
        Mat& gl = at(logits).grad;
        // d c(u,r) / d l_s = delta(r,s) c(u,r) - c(u,r) counts(u,s) c(u,s)
        for (int u = 0; u < counts.rows; ++u) {
            double inner = 0.0;  // sum_r gbar(u,r) c(u,r)
            for (int r = 0; r < counts.cols; ++r) inner += g(u, r) * c(u, r);
            for (int s = 0; s < counts.cols; ++s)
                gl(0, s) += g(u, s) * c(u, s) - inner * counts(u, s) * c(u, s);
        }
    });
}

Var Tape::bce_loss(Var probs, Mat labels) {
    const Mat& pv = value(probs);
    if (!same_shape(pv, labels)) shape_error("bce_loss", pv, labels);
    const double n = static_cast<double>(pv.size());
    double loss = 0.0;
    for (size_t i = 0; i < pv.size(); ++i) {
        const double p = std::clamp(pv.v[i], kBceClamp, 1.0 - kBceClamp);
        const double y = labels.v[i];
        loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    }
    Mat out(1, 1);
    out(0, 0) = loss / n;
    Var r{static_cast<int>(nodes_.size())};
    return push(std::move(out), true, [this, r, probs, labels = std::move(labels), n] {
        const double g = at(r).grad(0, 0);
        const Mat& pv2 = at(probs).value;
        Mat& gp = at(probs).grad;
        for (size_t i = 0; i < pv2.size(); ++i) {
            const double raw = pv2.v[i];
            if (raw < kBceClamp || raw > 1.0 - kBceClamp) continue;  // clamped: zero slope
            const double y = labels.v[i];
            gp.v[i] += g * (-y / raw + (1.0 - y) / (1.0 - raw)) / n;
        }
    });
}

void Tape::backward(Var loss) {
    if (backward_done_) throw std::logic_error("Tape::backward called twice without reset");
    const Mat& lv = value(loss);
    if (lv.rows != 1 || lv.cols != 1) throw std::invalid_argument("backward: loss must be 1x1");
    backward_done_ = true;
    at(loss).grad(0, 0) = 1.0;
    for (int i = loss.id; i >= 0; --i) {
        if (nodes_[static_cast<size_t>(i)].backprop) nodes_[static_cast<size_t>(i)].backprop();
    }
}

void Adam::step(std::vector<Mat*> params, const std::vector<const Mat*>& grads) {
    if (params.size() != grads.size()) throw std::invalid_argument("Adam::step: size mismatch");
    if (m_.empty()) {
        for (const Mat* p : params) {
            m_.emplace_back(p->rows, p->cols);
            v_.emplace_back(p->rows, p->cols);
        }
    }
    if (m_.size() != params.size()) throw std::invalid_argument("Adam::step: parameter count changed");
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
    const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
    for (size_t k = 0; k < params.size(); ++k) {
        Mat& p = *params[k];
        const Mat& g = *grads[k];
        Mat& m = m_[k];
        Mat& v = v_[k];
        for (size_t i = 0; i < p.size(); ++i) {
            m.v[i] = cfg_.beta1 * m.v[i] + (1.0 - cfg_.beta1) * g.v[i];
            v.v[i] = cfg_.beta2 * v.v[i] + (1.0 - cfg_.beta2) * g.v[i] * g.v[i];
            const double mhat = m.v[i] / bc1;
            const double vhat = v.v[i] / bc2;
            p.v[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

void Adam::reset() {
    t_ = 0;
    m_.clear();
    v_.clear();
}

void Adam::restore(int t, std::vector<Mat> m, std::vector<Mat> v) {
    t_ = t;
    m_ = std::move(m);
    v_ = std::move(v);
}

}  // namespace relsamp::ad
