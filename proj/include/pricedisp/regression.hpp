#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pricedisp/ols.hpp"

namespace pricedisp::econometrics {

// Column store handed to fit(): numeric regressors and categorical keys.
class Table {
 public:
  void add_numeric(const std::string& name, std::vector<double> values);
  void add_categorical(const std::string& name,
                       std::vector<std::string> values);

  std::size_t rows() const { return rows_; }
  bool has_numeric(const std::string& name) const;
  bool has_categorical(const std::string& name) const;
  // Throw std::out_of_range.
  const std::vector<double>& numeric(const std::string& name) const;
  const std::vector<std::string>& categorical(const std::string& name) const;

 private:
  void check_rows(const std::string& name, std::size_t n);

  std::size_t rows_ = 0;
  bool sized_ = false;
  std::map<std::string, std::vector<double>> numeric_;
  std::map<std::string, std::vector<std::string>> categorical_;
};

using RowFilter = std::function<bool(const Table&, std::size_t row)>;

// dependent ~ 1 + regressors + dummies(dummy_sets) | absorbed_fixed_effects.
// Each dummy set drops its first level (sorted); the intercept is always
// present.
struct RegressionSpec {
  std::string id;
  std::string dependent;
  std::vector<std::string> regressors;
  std::vector<std::string> dummy_sets;
  std::vector<std::string> absorbed_fixed_effects;
  std::string sample_filter_description = "all rows";
  RowFilter sample_filter;

  // Throws std::invalid_argument on overlapping roles.
  void validate() const;
};

inline constexpr const char* kInterceptName = "(intercept)";

struct FitResult {
  RegressionResult regression;
  std::size_t rows_excluded = 0;
};

// Applies the sample filter, builds the design and solves. With absorbed
// effects R^2 is measured against the untransformed dependent variable, so
// it equals the full-dummy R^2.
FitResult fit(const Table& table, const RegressionSpec& spec);

}  // namespace pricedisp::econometrics
