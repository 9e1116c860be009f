#include <cmath>
#include <vector>

#include "doctest.h"
#include "relsamp/autodiff.hpp"
#include "relsamp/rng.hpp"

using namespace relsamp;
using ad::Mat;
using ad::Tape;
using ad::Var;

namespace {

Mat random_mat(int r, int c, Rng& rng) {
    Mat m(r, c);
    for (auto& x : m.v) x = rng.next_normal();
    return m;
}

}  // namespace

TEST_CASE("matmul matches a hand example") {
    Mat a(2, 2);
    a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
    Mat b(2, 2);
    b(0, 0) = 5; b(0, 1) = 6; b(1, 0) = 7; b(1, 1) = 8;
    Mat c = ad::matmul(a, b);
    CHECK(c(0, 0) == 19);
    CHECK(c(0, 1) == 22);
    CHECK(c(1, 0) == 43);
    CHECK(c(1, 1) == 50);
}

TEST_CASE("transpose") {
    Mat a(2, 3);
    for (int i = 0; i < 6; ++i) a.v[static_cast<size_t>(i)] = i;
    Mat t = ad::transpose(a);
    REQUIRE(t.rows == 3);
    REQUIRE(t.cols == 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) CHECK(t(j, i) == a(i, j));
}

TEST_CASE("sigmoid value") {
    Tape tape;
    Var x = tape.input(Mat(1, 1, 1.0));
    Var s = tape.sigmoid(x);
    CHECK(tape.value(s)(0, 0) == doctest::Approx(0.7310585786300049).epsilon(1e-12));
}

TEST_CASE("bce of probability one-half is ln 2") {
    Tape tape;
    Var p = tape.input(Mat(3, 1, 0.5));
    Mat labels(3, 1);
    labels(0, 0) = 1; labels(1, 0) = 0; labels(2, 0) = 1;
    Var loss = tape.bce_loss(p, labels);
    CHECK(tape.value(loss)(0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("softmax normalizes and matches hand values") {
    Tape tape;
    Mat x(1, 3);
    x(0, 0) = 0.0; x(0, 1) = std::log(2.0); x(0, 2) = std::log(3.0);
    Var s = tape.softmax(tape.input(x));
    const Mat& v = tape.value(s);
    CHECK(v(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(v(0, 1) == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
    CHECK(v(0, 2) == doctest::Approx(3.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("relation_weights: zero logits reduce to degree normalization") {
    Tape tape;
    Mat counts(2, 3);
    counts(0, 0) = 2; counts(0, 1) = 1; counts(0, 2) = 1;
    counts(1, 0) = 0; counts(1, 1) = 5; counts(1, 2) = 0;
    Var c = tape.relation_weights(tape.input(Mat(1, 3, 0.0)), counts);
    CHECK(tape.value(c)(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(tape.value(c)(1, 1) == doctest::Approx(0.2).epsilon(1e-12));
}

// Composite finite-difference check exercising most ops on one tape.
TEST_CASE("backward matches central finite differences") {
    Rng rng(99);
    Mat x0 = random_mat(4, 3, rng);
    Mat w0 = random_mat(3, 3, rng);
    Mat l0 = random_mat(1, 2, rng);
    Mat counts(4, 2);
    counts(0, 0) = 1; counts(0, 1) = 2;
    counts(1, 0) = 3; counts(1, 1) = 0;
    counts(2, 0) = 2; counts(2, 1) = 2;
    counts(3, 0) = 0; counts(3, 1) = 1;
    Mat labels(2, 1);
    labels(0, 0) = 1; labels(1, 0) = 0;

    auto forward = [&](const Mat& x, const Mat& w, const Mat& l, Tape& tape,
                       Var* gx = nullptr, Var* gw = nullptr, Var* gl = nullptr) {
        Var vx = tape.input(x, true);
        Var vw = tape.input(w, true);
        Var vl = tape.input(l, true);
        Var h = tape.relu(tape.matmul(vx, vw));
        Var c = tape.relation_weights(vl, counts);
        Var scaled = tape.scale_rows_gather(h, c, {{0, 0}, {1, 0}, {2, 1}, {3, 1}});
        Var pooled = tape.scatter_add_rows(scaled, {0, 1, 0, 1}, 2);
        Var probs = tape.sigmoid(tape.row_sum(tape.mul(pooled, pooled)));
        Var loss = tape.bce_loss(probs, labels);
        if (gx) *gx = vx;
        if (gw) *gw = vw;
        if (gl) *gl = vl;
        return loss;
    };

    Tape tape;
    Var vx, vw, vl;
    Var loss = forward(x0, w0, l0, tape, &vx, &vw, &vl);
    tape.backward(loss);

    const double eps = 1e-6;
    auto fd_check = [&](Mat& param, const Mat& grad) {
        for (size_t i = 0; i < param.v.size(); ++i) {
            const double keep = param.v[i];
            param.v[i] = keep + eps;
            Tape tp;
            const double up = tp.value(forward(x0, w0, l0, tp))(0, 0);
            param.v[i] = keep - eps;
            Tape tm;
            const double dn = tm.value(forward(x0, w0, l0, tm))(0, 0);
            param.v[i] = keep;
            const double fd = (up - dn) / (2 * eps);
            CHECK(grad.v[i] == doctest::Approx(fd).epsilon(1e-5));
        }
    };
    fd_check(x0, tape.grad(vx));
    fd_check(w0, tape.grad(vw));
    fd_check(l0, tape.grad(vl));
}

TEST_CASE("basis_combine materializes the coefficient mix") {
    Tape tape;
    Mat b0(2, 2, 1.0), b1(2, 2, 2.0);
    Mat coeffs(3, 2);
    coeffs(1, 0) = 0.5;
    coeffs(1, 1) = -1.0;
    Var w = tape.basis_combine({tape.input(b0), tape.input(b1)}, tape.input(coeffs), 1);
    CHECK(tape.value(w)(0, 0) == doctest::Approx(0.5 * 1.0 - 1.0 * 2.0).epsilon(1e-12));
}

TEST_CASE("adam first step is roughly lr in gradient sign") {
    ad::Adam opt({.lr = 0.01, .beta1 = 0.9, .beta2 = 0.999, .eps = 1e-8});
    Mat p(1, 2, 1.0);
    Mat g(1, 2);
    g(0, 0) = 3.0;
    g(0, 1) = -0.2;
    opt.step({&p}, {&g});
    // bias-corrected first step = lr * g / (|g| + eps)
    CHECK(p(0, 0) == doctest::Approx(1.0 - 0.01).epsilon(1e-6));
    CHECK(p(0, 1) == doctest::Approx(1.0 + 0.01).epsilon(1e-6));
    CHECK(opt.step_count() == 1);
}
