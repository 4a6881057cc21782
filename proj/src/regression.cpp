#include "pricedisp/regression.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pricedisp/fixed_effects.hpp"

namespace pricedisp::econometrics {

void Table::check_rows(const std::string& name, std::size_t n) {
  if (sized_ && n != rows_) {
    throw std::invalid_argument("table column '" + name +
                                "' has the wrong length");
  }
  rows_ = n;
  sized_ = true;
}

void Table::add_numeric(const std::string& name, std::vector<double> values) {
  check_rows(name, values.size());
  numeric_[name] = std::move(values);
}

void Table::add_categorical(const std::string& name,
                            std::vector<std::string> values) {
  check_rows(name, values.size());
  categorical_[name] = std::move(values);
}

bool Table::has_numeric(const std::string& name) const {
  return numeric_.count(name) != 0;
}

bool Table::has_categorical(const std::string& name) const {
  return categorical_.count(name) != 0;
}

const std::vector<double>& Table::numeric(const std::string& name) const {
  const auto it = numeric_.find(name);
  if (it == numeric_.end()) {
    throw std::out_of_range("no numeric column '" + name + "'");
  }
  return it->second;
}

const std::vector<std::string>& Table::categorical(
    const std::string& name) const {
  const auto it = categorical_.find(name);
  if (it == categorical_.end()) {
    throw std::out_of_range("no categorical column '" + name + "'");
  }
  return it->second;
}

void RegressionSpec::validate() const {
  if (dependent.empty()) {
    throw std::invalid_argument("regression spec needs a dependent variable");
  }
  if (std::find(regressors.begin(), regressors.end(), dependent) !=
      regressors.end()) {
    throw std::invalid_argument("dependent variable '" + dependent +
                                "' is also a regressor");
  }
  const std::set<std::string> expanded(dummy_sets.begin(), dummy_sets.end());
  for (const auto& a : absorbed_fixed_effects) {
    if (expanded.count(a)) {
      throw std::invalid_argument("'" + a +
                                  "' is both expanded and absorbed");
    }
  }
}

FitResult fit(const Table& table, const RegressionSpec& spec) {
  spec.validate();

  std::vector<std::size_t> rows;
  rows.reserve(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (!spec.sample_filter || spec.sample_filter(table, i)) rows.push_back(i);
  }
  FitResult out;
  out.rows_excluded = table.rows() - rows.size();
  const auto n = static_cast<Eigen::Index>(rows.size());

  // Column layout: intercept, numeric regressors, then dummy blocks.
  std::vector<std::string> names{kInterceptName};
  for (const auto& r : spec.regressors) names.push_back(r);
  std::vector<Factor> dummy_factors;
  for (const auto& d : spec.dummy_sets) {
    std::vector<std::string> values;
    values.reserve(rows.size());
    const auto& col = table.categorical(d);
    for (auto i : rows) values.push_back(col[i]);
    dummy_factors.push_back(make_factor(d, values));
    const auto& f = dummy_factors.back();
    for (std::size_t level = 1; level < f.levels(); ++level) {
      names.push_back(d + "=" + f.labels[level]);
    }
  }

  Eigen::VectorXd y(n);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(names.size()));
  {
    const auto& dep = table.numeric(spec.dependent);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = dep[rows[static_cast<std::size_t>(i)]];
    X.col(0).setOnes();
    Eigen::Index col = 1;
    for (const auto& r : spec.regressors) {
      const auto& values = table.numeric(r);
      for (Eigen::Index i = 0; i < n; ++i) {
        X(i, col) = values[rows[static_cast<std::size_t>(i)]];
      }
      ++col;
    }
    for (const auto& f : dummy_factors) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto level = f.codes[static_cast<std::size_t>(i)];
        if (level > 0) X(i, col + static_cast<Eigen::Index>(level) - 1) = 1.0;
      }
      col += static_cast<Eigen::Index>(f.levels()) - 1;
    }
  }

  OlsOptions options;
  if (spec.absorbed_fixed_effects.empty()) {
    out.regression = ols(y, X, names, options);
    return out;
  }

  std::vector<Factor> absorbed;
  for (const auto& a : spec.absorbed_fixed_effects) {
    std::vector<std::string> values;
    values.reserve(rows.size());
    const auto& col = table.categorical(a);
    for (auto i : rows) values.push_back(col[i]);
    absorbed.push_back(make_factor(a, values));
  }
  const double sst =
      n > 0 ? (y.array() - y.mean()).matrix().squaredNorm() : 0.0;
  const auto within = absorb_fixed_effects(y, X, absorbed);
  options.absorbed_dof = within.absorbed_dof;
  options.sst = sst;
  // The intercept column was demeaned and restored to ones, so it is still
  // the first column of within.X.
  out.regression = ols(within.y, within.X, names, options);
  if (within.dependent_fully_absorbed) out.regression.degenerate = true;
  return out;
}

}  // namespace pricedisp::econometrics
