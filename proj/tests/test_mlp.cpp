#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hsinr/error.hpp"
#include "hsinr/mlp.hpp"

using namespace hsinr;
using Mat = Matrix<double>;

namespace {

SirenSpec make_spec(int n_hidden, int width, int out) {
  SirenSpec s;
  s.n_hidden = n_hidden;
  s.hidden_width = width;
  s.out_dim = out;
  return s;
}

std::vector<double> widen(const std::vector<float>& v) { return {v.begin(), v.end()}; }

// Plain loops over the canonical parameter layout; shares nothing with the
// Eigen implementation.
std::vector<double> scalar_forward(const SirenSpec& s, const std::vector<double>& p,
                                   const std::vector<double>& in) {
  std::vector<double> act = in;
  std::size_t offset = 0;
  for (int l = 0; l <= s.n_hidden; ++l) {
    const std::size_t fan_in = act.size();
    const std::size_t fan_out = l == s.n_hidden ? s.out_dim : s.hidden_width;
    std::vector<double> next(fan_out);
    for (std::size_t o = 0; o < fan_out; ++o) {
      double z = p[offset + fan_in * fan_out + o];
      for (std::size_t i = 0; i < fan_in; ++i) z += p[offset + o * fan_in + i] * act[i];
      next[o] = l == s.n_hidden ? z : std::sin(s.w0 * z);
    }
    offset += fan_in * fan_out + fan_out;
    act = std::move(next);
  }
  return act;
}

Batch<double> random_batch(std::mt19937& rng, int n, int out) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0), target(0.0, 1.0);
  Batch<double> b;
  b.inputs.resize(n, 2);
  b.targets.resize(n, out);
  for (int r = 0; r < n; ++r) {
    b.inputs(r, 0) = coord(rng);
    b.inputs(r, 1) = coord(rng);
    for (int k = 0; k < out; ++k) b.targets(r, k) = target(rng);
  }
  return b;
}

// Largest entrywise difference relative to the larger gradient's max magnitude.
double max_rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
  }
  return scale > 0.0 ? diff / scale : diff;
}

// Worst entry measured against that entry alone.
double max_entry_rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-12});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("affine_forward examples") {
  LayerParams<double> id{Eigen::Matrix<double, -1, -1, Eigen::RowMajor>::Identity(2, 2),
                         Eigen::VectorXd::Zero(2)};
  Mat x(1, 2);
  x << 0.3, -0.7;
  const Mat y = affine_forward(id, x);
  CHECK(y(0, 0) == 0.3);
  CHECK(y(0, 1) == -0.7);

  LayerParams<double> bias_only{Eigen::Matrix<double, -1, -1, Eigen::RowMajor>::Zero(2, 2),
                                Eigen::VectorXd(2)};
  bias_only.biases << 1, 2;
  const Mat yb = affine_forward(bias_only, x);
  CHECK(yb(0, 0) == 1.0);
  CHECK(yb(0, 1) == 2.0);

  LayerParams<double> dot{Eigen::Matrix<double, -1, -1, Eigen::RowMajor>::Ones(1, 2),
                          Eigen::VectorXd::Zero(1)};
  Mat x2(1, 2);
  x2 << 2, 3;
  CHECK(affine_forward(dot, x2)(0, 0) == 5.0);

  const Mat wide = Mat::Zero(1, 3);
  CHECK_THROWS_AS(affine_forward(dot, wide), ArgumentError);
}

TEST_CASE("sine_forward examples") {
  CHECK(sine_forward<double>(Mat(Mat::Zero(2, 2)), 30.0).cwiseAbs().maxCoeff() == 0.0);
  Mat z(1, 1);
  z << std::numbers::pi / 60.0;
  CHECK(sine_forward<double>(z, 30.0)(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sine derivative at zero is w0") {
  // one hidden unit with zero pre-activation feeding a unit head
  const auto s = make_spec(1, 1, 1);
  std::vector<double> p(param_count(s), 0.0);
  p[3] = 1.0;  // head weight; layout: W1(2) b1(1) W2(1) b2(1)
  Batch<double> b{Mat::Zero(1, 2), Mat::Constant(1, 1, 0.25)};
  const auto lg = mlp_loss_and_grad<double>(s, p, b);
  // dL/db1 = 2 (out - t) * head * w0 cos(0)
  CHECK(lg.grads[2] == doctest::Approx(2.0 * (0.0 - 0.25) * 30.0));
}

TEST_CASE("mlp_forward basics") {
  const auto s = make_spec(2, 5, 3);
  std::vector<double> zeros(param_count(s), 0.0);
  std::mt19937 rng(2);
  const auto batch = random_batch(rng, 4, 3);
  CHECK(mlp_forward<double>(s, zeros, batch.inputs).cwiseAbs().maxCoeff() == 0.0);

  const auto p = widen(init_params(s, 4));
  Mat one = batch.inputs.topRows(1);
  Mat two(2, 2);
  two << one, one;
  const Mat y1 = mlp_forward<double>(s, p, one);
  const Mat y2 = mlp_forward<double>(s, p, two);
  CHECK(y2.row(0) == y2.row(1));
  CHECK((y2.row(0) - y1.row(0)).cwiseAbs().maxCoeff() <= 1e-15);

  std::vector<double> short_p(p.begin(), p.end() - 1);
  CHECK_THROWS_AS(mlp_forward<double>(s, short_p, batch.inputs), ArgumentError);
  CHECK_THROWS_AS(mlp_forward<double>(s, p, Mat::Zero(2, 3)), ArgumentError);
}

TEST_CASE("mlp_forward matches the scalar evaluator") {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> width(1, 12), out(1, 6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = make_spec(3, width(rng), out(rng));
    const auto p = widen(init_params(s, trial));
    const auto batch = random_batch(rng, 7, s.out_dim);
    const Mat y = mlp_forward<double>(s, p, batch.inputs);
    for (int r = 0; r < batch.inputs.rows(); ++r) {
      const auto ref = scalar_forward(s, p, {batch.inputs(r, 0), batch.inputs(r, 1)});
      for (int k = 0; k < s.out_dim; ++k) {
        CHECK(std::abs(y(r, k) - ref[k]) <= 1e-12 * std::max(1.0, std::abs(ref[k])));
      }
    }
  }
}

TEST_CASE("loss is zero at the targets") {
  const auto s = make_spec(2, 6, 3);
  const auto p = widen(init_params(s, 8));
  std::mt19937 rng(8);
  auto batch = random_batch(rng, 5, 3);
  batch.targets = mlp_forward<double>(s, p, batch.inputs);
  const auto lg = mlp_loss_and_grad<double>(s, p, batch);
  CHECK(lg.loss == 0.0);
  CHECK(std::all_of(lg.grads.begin(), lg.grads.end(), [](double g) { return g == 0.0; }));
}

TEST_CASE("doubling the residual quadruples the loss") {
  const auto s = make_spec(2, 6, 3);
  const auto p = widen(init_params(s, 9));
  std::mt19937 rng(9);
  auto batch = random_batch(rng, 6, 3);
  const Mat out = mlp_forward<double>(s, p, batch.inputs);
  const double base = mlp_loss_and_grad<double>(s, p, batch).loss;
  batch.targets = out + 2.0 * (batch.targets - out);
  CHECK(mlp_loss_and_grad<double>(s, p, batch).loss == doctest::Approx(4.0 * base).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> layers(1, 3), width(1, 8), out(1, 4), rows(1, 16);
  double worst = 0.0, fine = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = make_spec(layers(rng), width(rng), out(rng));
    const auto p = widen(init_params(s, 100 + trial));
    const auto batch = random_batch(rng, rows(rng), s.out_dim);
    const auto analytic = mlp_loss_and_grad<double>(s, p, batch).grads;
    const auto numeric = numeric_gradient<double>(s, p, batch, 1e-4);
    worst = std::max(worst, max_rel_error(analytic, numeric));
    // a smaller step removes the O(eps^2) truncation from every single entry
    fine = std::max(fine, max_entry_rel_error(analytic, numeric_gradient<double>(s, p, batch, 1e-6)));
  }
  CHECK(worst < 1e-4);
  CHECK(fine < 1e-4);
}

TEST_CASE("central differences are exact for the linear head") {
  // the loss is quadratic in the head parameters
  const auto s = make_spec(2, 5, 3);
  const auto p = widen(init_params(s, 31));
  std::mt19937 rng(31);
  const auto batch = random_batch(rng, 9, 3);
  const auto analytic = mlp_loss_and_grad<double>(s, p, batch).grads;
  const auto numeric = numeric_gradient<double>(s, p, batch, 1e-3);
  const auto head = layer_shapes(s).back();
  for (std::size_t i = head.offset; i < head.end(); ++i) {
    CHECK(std::abs(analytic[i] - numeric[i]) <= 1e-10 * std::max(1.0, std::abs(analytic[i])));
  }
}

TEST_CASE("numeric gradient is robust to the step size") {
  const auto s = make_spec(2, 6, 2);
  const auto p = widen(init_params(s, 41));
  std::mt19937 rng(41);
  const auto batch = random_batch(rng, 8, 2);
  const auto a = numeric_gradient<double>(s, p, batch, 1e-4);
  const auto b = numeric_gradient<double>(s, p, batch, 1e-5);
  CHECK(max_rel_error(a, b) < 1e-3);
  CHECK_THROWS_AS(numeric_gradient<double>(s, p, batch, 0.0), ArgumentError);
}

TEST_CASE("row permutation permutes outputs") {
  const auto s = make_spec(3, 7, 4);
  const auto p = widen(init_params(s, 51));
  std::mt19937 rng(51);
  const auto batch = random_batch(rng, 10, 4);
  std::vector<int> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Mat shuffled(10, 2);
  for (int r = 0; r < 10; ++r) shuffled.row(r) = batch.inputs.row(perm[r]);
  const Mat y = mlp_forward<double>(s, p, batch.inputs);
  const Mat ys = mlp_forward<double>(s, p, shuffled);
  for (int r = 0; r < 10; ++r) {
    CHECK((ys.row(r) - y.row(perm[r])).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("GradientEvaluator matches mlp_loss_and_grad across calls") {
  const auto s = make_spec(2, 8, 3);
  auto p = init_params(s, 61);
  GradientEvaluator<float> eval(s);
  std::vector<float> grads(p.size());
  std::mt19937 rng(61);
  for (int rows : {16, 3, 16}) {
    const auto b64 = random_batch(rng, rows, 3);
    Batch<float> b{b64.inputs.cast<float>(), b64.targets.cast<float>()};
    const float loss = eval(p, b, grads);
    const auto ref = mlp_loss_and_grad<float>(s, p, b);
    CHECK(loss == ref.loss);
    CHECK(grads == ref.grads);
    CHECK(loss >= 0.0f);
  }
}
