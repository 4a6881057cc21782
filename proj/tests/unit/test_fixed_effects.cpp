#include <cmath>

#include "doctest.h"
#include "pricedisp/error.hpp"
#include "pricedisp/fixed_effects.hpp"
#include "pricedisp/ols.hpp"
#include "pricedisp/regression.hpp"
#include "pricedisp/rng.hpp"

using namespace pricedisp;
using namespace pricedisp::econometrics;

namespace {

struct Instance {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;  // intercept first
  std::vector<Factor> factors;
};

Eigen::MatrixXd dummies(const Factor& f) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(f.codes.size()),
                                            static_cast<Eigen::Index>(f.levels()) - 1);
  for (std::size_t i = 0; i < f.codes.size(); ++i) {
    if (f.codes[i] > 0) D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f.codes[i]) - 1) = 1.0;
  }
  return D;
}

Instance random_instance(rng::Stream& s, int n_factors) {
  Instance inst;
  const Eigen::Index n = s.uniform_int(40, 150);
  const Eigen::Index k = s.uniform_int(1, 4);
  inst.X.resize(n, k + 1);
  inst.X.col(0).setOnes();
  for (Eigen::Index j = 1; j <= k; ++j)
    for (Eigen::Index i = 0; i < n; ++i) inst.X(i, j) = s.uniform(-2.0, 2.0);
  inst.y = Eigen::VectorXd(n);
  std::vector<std::vector<double>> effects;
  for (int f = 0; f < n_factors; ++f) {
    const auto levels = s.uniform_int(2, 8);
    std::vector<std::string> values;
    for (Eigen::Index i = 0; i < n; ++i) {
      values.push_back("g" + std::to_string(s.uniform_int(0, levels - 1)));
    }
    inst.factors.push_back(make_factor("f" + std::to_string(f), values));
    std::vector<double> e(inst.factors.back().levels());
    for (auto& v : e) v = s.uniform(-5.0, 5.0);
    effects.push_back(e);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = 3.0 + s.uniform(-1.0, 1.0);
    for (Eigen::Index j = 1; j <= k; ++j) v += 0.5 * j * inst.X(i, j);
    for (int f = 0; f < n_factors; ++f) {
      v += effects[static_cast<std::size_t>(f)][inst.factors[static_cast<std::size_t>(f)].codes[static_cast<std::size_t>(i)]];
    }
    inst.y(i) = v;
  }
  return inst;
}

std::vector<std::string> names(Eigen::Index cols) {
  std::vector<std::string> out{"(intercept)"};
  for (Eigen::Index j = 1; j < cols; ++j) out.push_back("x" + std::to_string(j));
  return out;
}

// Full-dummy regression on the same data.
RegressionResult explicit_dummies(const Instance& inst) {
  Eigen::Index cols = inst.X.cols();
  for (const auto& f : inst.factors) cols += static_cast<Eigen::Index>(f.levels()) - 1;
  Eigen::MatrixXd D(inst.X.rows(), cols);
  D.leftCols(inst.X.cols()) = inst.X;
  Eigen::Index at = inst.X.cols();
  auto n = names(inst.X.cols());
  for (const auto& f : inst.factors) {
    const auto block = dummies(f);
    D.middleCols(at, block.cols()) = block;
    for (Eigen::Index j = 0; j < block.cols(); ++j) n.push_back(f.name + "=" + std::to_string(j));
    at += block.cols();
  }
  return ols(inst.y, D, n);
}

void check_equivalence(const Instance& inst, bool check_se) {
  const auto full = explicit_dummies(inst);
  const auto within = absorb_fixed_effects(inst.y, inst.X, inst.factors);
  OlsOptions opt;
  opt.absorbed_dof = within.absorbed_dof;
  const auto absorbed = ols(within.y, within.X, names(inst.X.cols()), opt);
  for (Eigen::Index j = 1; j < inst.X.cols(); ++j) {
    const std::string name = "x" + std::to_string(j);
    CHECK(std::abs(absorbed.at(name).coefficient - full.at(name).coefficient) < 1e-8);
    CHECK(absorbed.sse == doctest::Approx(full.sse).epsilon(1e-8));
    if (check_se) {
      CHECK(absorbed.dof == full.dof);
      CHECK(absorbed.at(name).std_error ==
            doctest::Approx(full.at(name).std_error).epsilon(1e-8));
    }
  }
}

}  // namespace

TEST_CASE("one factor covering everything subtracts the grand mean") {
  rng::Stream s(51);
  Eigen::VectorXd y(10);
  Eigen::MatrixXd X(10, 1);
  for (int i = 0; i < 10; ++i) {
    y(i) = s.uniform(0, 10);
    X(i, 0) = s.uniform(0, 10);
  }
  const auto f = make_factor("all", std::vector<std::string>(10, "a"));
  const auto a = absorb_fixed_effects(y, X, {f});
  // grand means are restored, so a single group leaves the data unchanged
  CHECK((a.y - y).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(a.absorbed_dof == 0);
}

TEST_CASE("two-group toy matches explicit dummies") {
  Instance inst;
  inst.y = Eigen::VectorXd(6);
  inst.y << 1.0, 2.5, 2.9, 7.2, 8.1, 9.4;
  inst.X = Eigen::MatrixXd(6, 2);
  inst.X << 1, 0.5, 1, 1.0, 1, 2.0, 1, 0.0, 1, 1.5, 1, 3.0;
  inst.factors = {make_factor("g", {"a", "a", "a", "b", "b", "b"})};
  check_equivalence(inst, true);
  const auto within = absorb_fixed_effects(inst.y, inst.X, inst.factors);
  CHECK(within.absorbed_dof == 1);
}

TEST_CASE("random one- and two-factor instances match explicit dummies") {
  rng::Stream s(52);
  for (int trial = 0; trial < 100; ++trial) check_equivalence(random_instance(s, 1), true);
  for (int trial = 0; trial < 100; ++trial) check_equivalence(random_instance(s, 2), true);
}

TEST_CASE("three-factor instances match explicit dummies") {
  rng::Stream s(53);
  for (int trial = 0; trial < 50; ++trial) check_equivalence(random_instance(s, 3), false);
}

TEST_CASE("disconnected two-factor designs count redundant levels") {
  // levels of f1 {a,b} only meet f2 {x}; {c} only meets {y}
  const auto f1 = make_factor("f1", {"a", "b", "a", "c", "c", "c", "b", "a"});
  const auto f2 = make_factor("f2", {"x", "x", "x", "y", "y", "y", "x", "x"});
  Instance inst;
  inst.factors = {f1, f2};
  inst.y = Eigen::VectorXd(8);
  inst.y << 1, 2, 3, 4, 5, 7, 2, 1;
  inst.X = Eigen::MatrixXd(8, 2);
  inst.X << 1, 0.1, 1, 0.7, 1, 0.2, 1, 0.9, 1, 0.3, 1, 0.5, 1, 0.6, 1, 0.4;
  const auto within = absorb_fixed_effects(inst.y, inst.X, inst.factors);
  CHECK(within.absorbed_dof == 2);
  check_equivalence(inst, true);
}

TEST_CASE("absorbing the dependent's own structure is flagged") {
  const auto f = make_factor("g", {"a", "a", "b", "b", "c", "c"});
  Eigen::VectorXd y(6);
  y << 4, 4, 9, 9, 1, 1;
  Eigen::MatrixXd X(6, 2);
  X << 1, 0.3, 1, 0.1, 1, 0.5, 1, 0.2, 1, 0.9, 1, 0.4;
  const auto within = absorb_fixed_effects(y, X, {f});
  CHECK(within.dependent_fully_absorbed);

  econometrics::Table t;
  t.add_numeric("y", {4, 4, 9, 9, 1, 1});
  t.add_numeric("x", {0.3, 0.1, 0.5, 0.2, 0.9, 0.4});
  t.add_categorical("g", {"a", "a", "b", "b", "c", "c"});
  RegressionSpec spec;
  spec.dependent = "y";
  spec.regressors = {"x"};
  spec.absorbed_fixed_effects = {"g"};
  const auto fitted = fit(t, spec);
  CHECK(fitted.regression.degenerate);
  CHECK(fitted.regression.sse < 1e-20);
  CHECK(fitted.regression.r_squared == doctest::Approx(1.0));
}

TEST_CASE("singleton-only factors are rejected") {
  Eigen::VectorXd y(3);
  y << 1, 2, 3;
  const Eigen::MatrixXd X = Eigen::MatrixXd::Ones(3, 1);
  CHECK_THROWS_AS(absorb_fixed_effects(y, X, {make_factor("id", {"a", "b", "c"})}),
                  AbsorptionFailure);
}

TEST_CASE("non-convergence is an error") {
  rng::Stream s(54);
  auto inst = random_instance(s, 3);
  CHECK_THROWS_AS(absorb_fixed_effects(inst.y, inst.X, inst.factors, 1e-10, 1),
                  AbsorptionFailure);
}

TEST_CASE("fit with absorbed effects equals fit with dummy sets") {
  rng::Stream s(55);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_instance(s, 2);
    Table t;
    const auto n = static_cast<std::size_t>(inst.y.size());
    t.add_numeric("y", std::vector<double>(inst.y.data(), inst.y.data() + n));
    std::vector<std::string> regs;
    for (Eigen::Index j = 1; j < inst.X.cols(); ++j) {
      const std::string name = "x" + std::to_string(j);
      Eigen::VectorXd col = inst.X.col(j);
      t.add_numeric(name, std::vector<double>(col.data(), col.data() + n));
      regs.push_back(name);
    }
    for (const auto& f : inst.factors) {
      std::vector<std::string> labels;
      for (auto c : f.codes) labels.push_back(f.labels[c]);
      t.add_categorical(f.name, labels);
    }
    RegressionSpec dummy;
    dummy.dependent = "y";
    dummy.regressors = regs;
    dummy.dummy_sets = {"f0", "f1"};
    RegressionSpec absorbed = dummy;
    absorbed.dummy_sets.clear();
    absorbed.absorbed_fixed_effects = {"f0", "f1"};
    const auto a = fit(t, dummy).regression;
    const auto b = fit(t, absorbed).regression;
    for (const auto& name : regs) {
      CHECK(std::abs(a.at(name).coefficient - b.at(name).coefficient) < 1e-8);
      CHECK(a.at(name).std_error == doctest::Approx(b.at(name).std_error).epsilon(1e-8));
    }
    CHECK(a.r_squared == doctest::Approx(b.r_squared).epsilon(1e-10));

    RegressionSpec mixed = dummy;
    mixed.dummy_sets = {"f0"};
    mixed.absorbed_fixed_effects = {"f1"};
    const auto c = fit(t, mixed).regression;
    for (const auto& name : regs) {
      CHECK(std::abs(a.at(name).coefficient - c.at(name).coefficient) < 1e-8);
    }
  }
}

TEST_CASE("spec validation and filters") {
  Table t;
  t.add_numeric("y", {1, 2, 3, 5, 4, 6});
  t.add_numeric("x", {0, 1, 2, 3, 4, 5});
  t.add_categorical("g", {"a", "a", "a", "b", "b", "b"});
  CHECK_THROWS_AS(t.add_numeric("z", {1, 2}), std::invalid_argument);

  RegressionSpec spec;
  spec.dependent = "y";
  spec.regressors = {"y"};
  CHECK_THROWS_AS(fit(t, spec), std::invalid_argument);
  spec.regressors = {"x"};
  spec.dummy_sets = {"g"};
  spec.absorbed_fixed_effects = {"g"};
  CHECK_THROWS_AS(fit(t, spec), std::invalid_argument);

  spec.absorbed_fixed_effects.clear();
  const auto r = fit(t, spec).regression;
  CHECK(r.find("g=b") != nullptr);
  CHECK(r.find("g=a") == nullptr);
  CHECK(r.terms.front().name == "(intercept)");

  spec.dummy_sets.clear();
  spec.sample_filter = [](const Table& tab, std::size_t i) { return tab.numeric("x")[i] < 4; };
  const auto filtered = fit(t, spec);
  CHECK(filtered.rows_excluded == 2);
  CHECK(filtered.regression.n_obs == 4);
}
