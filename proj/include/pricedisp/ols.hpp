#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pricedisp::econometrics {

// Normal critical value for two-sided 95% intervals.
inline constexpr double kCritical95 = 1.96;

struct Term {
  std::string name;
  double coefficient = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct RegressionResult {
  std::vector<Term> terms;
  std::vector<std::string> dropped_terms;
  double r_squared = 0.0;
  double sse = 0.0;
  double sst = 0.0;
  std::size_t n_obs = 0;
  std::size_t dof = 0;
  // Zero residual or zero total variance: standard errors are meaningless.
  bool degenerate = false;

  // nullptr when the term was dropped or never present.
  const Term* find(const std::string& name) const;
  // Throws std::out_of_range.
  const Term& at(const std::string& name) const;
};

struct OlsOptions {
  // Degrees of freedom consumed by effects absorbed before the call.
  std::size_t absorbed_dof = 0;
  // Total sum of squares to report R^2 against; default is y about its mean.
  std::optional<double> sst;
  // A column is collinear when its residual norm after projection on the
  // kept columns falls below this fraction of its own norm.
  double collinearity_tolerance = 1e-9;
};

// Least squares by Householder QR with homoskedastic standard errors
// se_j = sqrt(sigma^2 [(X'X)^-1]_jj), sigma^2 = SSE / (n - k - absorbed).
// X must already carry the intercept column. Collinear columns are dropped,
// later index first, and listed in dropped_terms.
// Throws InsufficientObservations when no residual degrees of freedom remain.
RegressionResult ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                     const std::vector<std::string>& names,
                     const OlsOptions& options = {});

// Indices of columns kept by the ordered collinearity screen.
std::vector<Eigen::Index> independent_columns(const Eigen::MatrixXd& X,
                                              double tolerance);

inline constexpr const char* kCoefficientHeader =
    "term,coefficient,std_error,ci_low,ci_high";

void write_coefficients_csv(std::ostream& os, const RegressionResult& result);

}  // namespace pricedisp::econometrics
