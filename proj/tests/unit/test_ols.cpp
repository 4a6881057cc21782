#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "doctest.h"
#include "pricedisp/error.hpp"
#include "pricedisp/ols.hpp"
#include "pricedisp/rng.hpp"

using namespace pricedisp;
using namespace pricedisp::econometrics;

namespace {

Eigen::MatrixXd with_intercept(const Eigen::VectorXd& x) {
  Eigen::MatrixXd X(x.size(), 2);
  X.col(0).setOnes();
  X.col(1) = x;
  return X;
}

std::vector<std::string> names(Eigen::Index k) {
  std::vector<std::string> out{"(intercept)"};
  for (Eigen::Index j = 1; j < k; ++j) out.push_back("x" + std::to_string(j));
  return out;
}

Eigen::MatrixXd random_design(rng::Stream& s, Eigen::Index n, Eigen::Index k) {
  Eigen::MatrixXd X(n, k);
  X.col(0).setOnes();
  for (Eigen::Index j = 1; j < k; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = s.uniform(-3.0, 3.0);
  }
  return X;
}

Eigen::VectorXd random_vector(rng::Stream& s, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = s.uniform(-1.0, 1.0);
  return v;
}

}  // namespace

TEST_CASE("exact line") {
  Eigen::VectorXd x(3), y(3);
  x << 0, 1, 2;
  y << 1, 3, 5;
  const auto r = ols(y, with_intercept(x), names(2));
  CHECK(r.at("(intercept)").coefficient == doctest::Approx(1.0));
  CHECK(r.at("x1").coefficient == doctest::Approx(2.0));
  CHECK(r.r_squared == doctest::Approx(1.0));
  CHECK(r.degenerate);
}

TEST_CASE("hand example") {
  Eigen::VectorXd x(3), y(3);
  x << 0, 1, 2;
  y << 0, 1, 3;
  const auto r = ols(y, with_intercept(x), names(2));
  CHECK(std::abs(r.at("x1").coefficient - 1.5) < 1e-10);
  CHECK(std::abs(r.at("(intercept)").coefficient + 1.0 / 6.0) < 1e-10);
  CHECK(std::abs(r.r_squared - 27.0 / 28.0) < 1e-10);
  CHECK(r.n_obs == 3);
  CHECK(r.dof == 1);
  // residuals (1/6, -1/3, 1/6): SSE = 1/6; Var(slope) = SSE / Sxx = (1/6)/2
  CHECK(r.sse == doctest::Approx(1.0 / 6.0));
  CHECK(r.at("x1").std_error == doctest::Approx(std::sqrt(1.0 / 12.0)));
  const auto& t = r.at("x1");
  CHECK(t.ci_low == doctest::Approx(t.coefficient - 1.96 * t.std_error));
  CHECK(t.ci_high == doctest::Approx(t.coefficient + 1.96 * t.std_error));
}

TEST_CASE("intercept only") {
  rng::Stream s(41);
  const auto y = random_vector(s, 25);
  const Eigen::MatrixXd X = Eigen::MatrixXd::Ones(25, 1);
  const auto r = ols(y, X, {"(intercept)"});
  CHECK(r.at("(intercept)").coefficient == doctest::Approx(y.mean()).epsilon(1e-12));
  CHECK(r.r_squared == doctest::Approx(0.0));
}

TEST_CASE("agreement with SVD pseudoinverse") {
  rng::Stream s(42);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = s.uniform_int(20, 200);
    const Eigen::Index k = s.uniform_int(2, 10);
    const auto X = random_design(s, n, k);
    const Eigen::VectorXd y = random_vector(s, n) * 10.0;
    const auto r = ols(y, X, names(k));
    REQUIRE(r.terms.size() == static_cast<std::size_t>(k));

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd beta = svd.solve(y);
    Eigen::VectorXd inv_s = svd.singularValues().cwiseInverse();
    const Eigen::MatrixXd xtx_inv =
        svd.matrixV() * inv_s.cwiseAbs2().asDiagonal() * svd.matrixV().transpose();
    const double sigma2 = (y - X * beta).squaredNorm() / static_cast<double>(n - k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto& t = r.terms[static_cast<std::size_t>(j)];
      CHECK(std::abs(t.coefficient - beta(j)) < 1e-8 * std::max(1.0, std::abs(beta(j))));
      CHECK(t.std_error == doctest::Approx(std::sqrt(sigma2 * xtx_inv(j, j))).epsilon(1e-8));
    }
    // normal equations
    Eigen::VectorXd b(k);
    for (Eigen::Index j = 0; j < k; ++j) b(j) = r.terms[static_cast<std::size_t>(j)].coefficient;
    const Eigen::VectorXd score = X.transpose() * (y - X * b);
    CHECK(score.cwiseAbs().maxCoeff() < 1e-8 * (X.norm() * y.norm()));
  }
}

TEST_CASE("r squared never decreases with extra regressors") {
  rng::Stream s(43);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 60;
    const auto X = random_design(s, n, 6);
    const auto y = random_vector(s, n);
    double prev = -1.0;
    for (Eigen::Index k = 1; k <= 6; ++k) {
      const auto r = ols(y, X.leftCols(k), names(k));
      CHECK(r.r_squared >= 0.0);
      CHECK(r.r_squared <= 1.0);
      CHECK(r.r_squared >= prev - 1e-12);
      prev = r.r_squared;
    }
  }
}

TEST_CASE("rescaling a regressor leaves its t-ratio unchanged") {
  rng::Stream s(44);
  for (int trial = 0; trial < 50; ++trial) {
    auto X = random_design(s, 50, 4);
    const auto y = random_vector(s, 50);
    const auto base = ols(y, X, names(4));
    const double k = s.uniform(0.5, 20.0) * (trial % 2 ? -1.0 : 1.0);
    X.col(2) *= k;
    const auto scaled = ols(y, X, names(4));
    const auto& a = base.at("x2");
    const auto& b = scaled.at("x2");
    CHECK(b.coefficient == doctest::Approx(a.coefficient / k).epsilon(1e-10));
    CHECK(b.std_error == doctest::Approx(a.std_error / std::abs(k)).epsilon(1e-10));
    CHECK(std::abs(b.coefficient / b.std_error * (k < 0 ? -1 : 1) -
                   a.coefficient / a.std_error) < 1e-10 * std::max(1.0, std::abs(a.coefficient / a.std_error)));
  }
}

TEST_CASE("collinear columns are dropped in order") {
  rng::Stream s(45);
  Eigen::MatrixXd X = random_design(s, 30, 4);
  Eigen::MatrixXd Xd(30, 6);
  Xd << X.col(0), X.col(1), 2.0 * X.col(1) - X.col(0), X.col(2), X.col(3),
      X.col(3) + X.col(2);
  const auto y = random_vector(s, 30);
  const auto r = ols(y, Xd, {"(intercept)", "a", "b", "c", "d", "e"});
  REQUIRE(r.dropped_terms == std::vector<std::string>{"b", "e"});
  const auto full = ols(y, X, {"(intercept)", "a", "c", "d"});
  for (const char* name : {"a", "c", "d"}) {
    CHECK(r.at(name).coefficient == doctest::Approx(full.at(name).coefficient).epsilon(1e-10));
  }
  CHECK(r.dof == 26);

  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(30, 2);
  zero.col(0).setOnes();
  CHECK(ols(y, zero, {"(intercept)", "z"}).dropped_terms ==
        std::vector<std::string>{"z"});
}

TEST_CASE("too few observations") {
  Eigen::VectorXd x(2), y(2);
  x << 0, 1;
  y << 1, 2;
  CHECK_THROWS_AS(ols(y, with_intercept(x), names(2)), InsufficientObservations);
  Eigen::VectorXd x3(3), y3(3);
  x3 << 0, 1, 2;
  y3 << 1, 2, 4;
  OlsOptions opt;
  opt.absorbed_dof = 1;
  CHECK_THROWS_AS(ols(y3, with_intercept(x3), names(2), opt), InsufficientObservations);
}

TEST_CASE("bad inputs") {
  Eigen::VectorXd x(3), y(3);
  x << 0, 1, 2;
  y << 1, NAN, 4;
  CHECK_THROWS_AS(ols(y, with_intercept(x), names(2)), std::invalid_argument);
  y << 1, 2, 4;
  CHECK_THROWS_AS(ols(y, with_intercept(x), {"a"}), std::invalid_argument);
  CHECK_THROWS_AS(ols(y.head(2), with_intercept(x), names(2)), std::invalid_argument);
}

TEST_CASE("constant response") {
  Eigen::VectorXd x(4), y(4);
  x << 0, 1, 2, 3;
  y << 2, 2, 2, 2;
  const auto r = ols(y, with_intercept(x), names(2));
  CHECK(r.r_squared == 0.0);
  CHECK(r.degenerate);
  CHECK(r.at("x1").coefficient == doctest::Approx(0.0));
}

TEST_CASE("coefficient csv") {
  Eigen::VectorXd x(3), y(3);
  x << 0, 1, 2;
  y << 1, 3, 5;
  const auto r = ols(y, with_intercept(x), names(2));
  std::ostringstream os;
  write_coefficients_csv(os, r);
  const auto text = os.str();
  CHECK(text.rfind("term,coefficient,std_error,ci_low,ci_high\n(intercept),", 0) == 0);
  CHECK(text.find("\nx1,") != std::string::npos);
}
