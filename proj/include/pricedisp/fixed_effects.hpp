#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

namespace pricedisp::econometrics {

// A categorical variable coded 0..levels-1 in sorted label order.
struct Factor {
  std::string name;
  std::vector<std::size_t> codes;
  std::vector<std::string> labels;

  std::size_t levels() const { return labels.size(); }
};

Factor make_factor(std::string name, const std::vector<std::string>& values);

struct AbsorbedData {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  // Rank of the absorbed dummies beyond the intercept.
  std::size_t absorbed_dof = 0;
  int sweeps = 0;
  // Every observation's y was explained by the absorbed groups.
  bool dependent_fully_absorbed = false;
};

inline constexpr double kDemeanTolerance = 1e-10;
inline constexpr int kMaxDemeanSweeps = 10000;

// Within transformation: alternately subtracts group means for each factor
// until no entry moves by more than tolerance in a sweep. The grand means
// of y and X are then added back so a following OLS with an intercept
// reproduces full-dummy slopes and the full-dummy residuals.
//
// Throws AbsorptionFailure when a factor has only singleton groups or the
// sweeps do not converge.
AbsorbedData absorb_fixed_effects(const Eigen::VectorXd& y,
                                  const Eigen::MatrixXd& X,
                                  const std::vector<Factor>& factors,
                                  double tolerance = kDemeanTolerance,
                                  int max_sweeps = kMaxDemeanSweeps);

}  // namespace pricedisp::econometrics
