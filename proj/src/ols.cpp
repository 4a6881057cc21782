#include "pricedisp/ols.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pricedisp/csv.hpp"
#include "pricedisp/error.hpp"

namespace pricedisp::econometrics {

const Term* RegressionResult::find(const std::string& name) const {
  for (const auto& t : terms) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const Term& RegressionResult::at(const std::string& name) const {
  if (const Term* t = find(name)) return *t;
  throw std::out_of_range("no regression term named '" + name + "'");
}

std::vector<Eigen::Index> independent_columns(const Eigen::MatrixXd& X,
                                              double tolerance) {
  // Gram-Schmidt with one reorthogonalisation pass against the kept basis.
  std::vector<Eigen::Index> kept;
  Eigen::MatrixXd basis(X.rows(), 0);
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double norm = X.col(j).norm();
    if (norm == 0.0) continue;
    Eigen::VectorXd r = X.col(j) / norm;
    for (int pass = 0; pass < 2 && basis.cols() > 0; ++pass) {
      r -= basis * (basis.transpose() * r);
    }
    const double rn = r.norm();
    if (rn <= tolerance) continue;
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = r / rn;
    kept.push_back(j);
  }
  return kept;
}

RegressionResult ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                     const std::vector<std::string>& names,
                     const OlsOptions& options) {
  if (X.rows() != y.size()) {
    throw std::invalid_argument("ols: design rows differ from response length");
  }
  if (static_cast<std::size_t>(X.cols()) != names.size()) {
    throw std::invalid_argument("ols: one name per design column required");
  }
  if (!y.allFinite() || !X.allFinite()) {
    throw std::invalid_argument("ols: non-finite value in data");
  }

  RegressionResult result;
  const auto n = static_cast<std::size_t>(y.size());
  result.n_obs = n;

  const auto kept = independent_columns(X, options.collinearity_tolerance);
  {
    std::size_t next = 0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (next < kept.size() && kept[next] == j) {
        ++next;
      } else {
        result.dropped_terms.push_back(names[static_cast<std::size_t>(j)]);
      }
    }
  }
  const std::size_t k = kept.size();
  if (n <= k + options.absorbed_dof) {
    std::ostringstream os;
    os << "ols: " << n << " observations for " << k << " regressors and "
       << options.absorbed_dof << " absorbed effects";
    throw InsufficientObservations(os.str());
  }
  result.dof = n - k - options.absorbed_dof;

  Eigen::MatrixXd Xk(X.rows(), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    Xk.col(static_cast<Eigen::Index>(i)) = X.col(kept[i]);
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  Eigen::VectorXd inv_diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  Eigen::VectorXd residual = y;
  if (k > 0) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Xk);
    beta = qr.solve(y);
    residual = y - Xk * beta;
    const auto ki = static_cast<Eigen::Index>(k);
    const Eigen::MatrixXd R =
        qr.matrixQR().topLeftCorner(ki, ki).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(ki, ki));
    // (X'X)^-1 = R^-1 R^-T, whose diagonal is the row norms of R^-1.
    inv_diag = r_inv.rowwise().squaredNorm();
  }

  result.sse = residual.squaredNorm();
  result.sst = options.sst ? *options.sst
                           : (y.array() - y.mean()).matrix().squaredNorm();
  if (result.sst > 0.0) {
    result.r_squared = std::clamp(1.0 - result.sse / result.sst, 0.0, 1.0);
  }
  result.degenerate =
      result.sst == 0.0 || result.sse <= 1e-24 * std::max(1.0, result.sst);

  const double sigma2 = result.sse / static_cast<double>(result.dof);
  result.terms.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    Term t;
    t.name = names[static_cast<std::size_t>(kept[i])];
    t.coefficient = beta(ii);
    t.std_error = std::sqrt(sigma2 * inv_diag(ii));
    t.ci_low = t.coefficient - kCritical95 * t.std_error;
    t.ci_high = t.coefficient + kCritical95 * t.std_error;
    result.terms.push_back(std::move(t));
  }
  return result;
}

void write_coefficients_csv(std::ostream& os, const RegressionResult& result) {
  using csv::format_number;
  os << kCoefficientHeader << '\n';
  for (const auto& t : result.terms) {
    os << t.name << ',' << format_number(t.coefficient) << ','
       << format_number(t.std_error) << ',' << format_number(t.ci_low) << ','
       << format_number(t.ci_high) << '\n';
  }
}

}  // namespace pricedisp::econometrics
