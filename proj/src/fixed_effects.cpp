#include "pricedisp/fixed_effects.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "pricedisp/error.hpp"

namespace pricedisp::econometrics {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

// Connected components of the bipartite level graph of two factors.
std::size_t components(const Factor& a, const Factor& b) {
  const std::size_t na = a.levels();
  std::vector<std::size_t> parent(na + b.levels());
  std::iota(parent.begin(), parent.end(), 0);
  std::size_t count = parent.size();
  for (std::size_t i = 0; i < a.codes.size(); ++i) {
    const auto ra = find_root(parent, a.codes[i]);
    const auto rb = find_root(parent, na + b.codes[i]);
    if (ra != rb) {
      parent[ra] = rb;
      --count;
    }
  }
  return count;
}

}  // namespace

Factor make_factor(std::string name, const std::vector<std::string>& values) {
  Factor f;
  f.name = std::move(name);
  std::map<std::string, std::size_t> index;
  for (const auto& v : values) index.emplace(v, 0);
  std::size_t next = 0;
  for (auto& [label, code] : index) {
    code = next++;
    f.labels.push_back(label);
  }
  f.codes.reserve(values.size());
  for (const auto& v : values) f.codes.push_back(index.at(v));
  return f;
}

AbsorbedData absorb_fixed_effects(const Eigen::VectorXd& y,
                                  const Eigen::MatrixXd& X,
                                  const std::vector<Factor>& factors,
                                  double tolerance, int max_sweeps) {
  const Eigen::Index n = y.size();
  if (X.rows() != n) {
    throw AbsorptionFailure("absorb: design rows differ from response length");
  }
  for (const auto& f : factors) {
    if (static_cast<Eigen::Index>(f.codes.size()) != n) {
      throw AbsorptionFailure("absorb: factor '" + f.name +
                              "' does not cover every observation");
    }
    if (n > 0 && static_cast<Eigen::Index>(f.levels()) == n) {
      throw AbsorptionFailure("absorb: factor '" + f.name +
                              "' has only singleton groups; all variation "
                              "would be absorbed");
    }
  }

  Eigen::MatrixXd data(n, X.cols() + 1);
  data.col(0) = y;
  data.rightCols(X.cols()) = X;
  const Eigen::RowVectorXd grand_mean =
      n > 0 ? Eigen::RowVectorXd(data.colwise().mean())
            : Eigen::RowVectorXd::Zero(data.cols());

  AbsorbedData out;
  if (!factors.empty() && n > 0) {
    bool converged = false;
    while (out.sweeps < max_sweeps) {
      ++out.sweeps;
      double max_change = 0.0;
      for (const auto& f : factors) {
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(
            static_cast<Eigen::Index>(f.levels()), data.cols());
        std::vector<double> counts(f.levels(), 0.0);
        for (Eigen::Index i = 0; i < n; ++i) {
          const auto g = static_cast<Eigen::Index>(f.codes[static_cast<std::size_t>(i)]);
          sums.row(g) += data.row(i);
          counts[static_cast<std::size_t>(g)] += 1.0;
        }
        for (Eigen::Index g = 0; g < sums.rows(); ++g) {
          sums.row(g) /= counts[static_cast<std::size_t>(g)];
        }
        max_change = std::max(max_change, sums.cwiseAbs().maxCoeff());
        for (Eigen::Index i = 0; i < n; ++i) {
          data.row(i) -= sums.row(
              static_cast<Eigen::Index>(f.codes[static_cast<std::size_t>(i)]));
        }
      }
      if (max_change < tolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "absorb: demeaning did not converge in " << max_sweeps
         << " sweeps";
      throw AbsorptionFailure(os.str());
    }
  }

  const double y_scale = std::max(1.0, y.size() ? y.cwiseAbs().maxCoeff() : 0.0);
  out.dependent_fully_absorbed =
      n > 0 && data.col(0).cwiseAbs().maxCoeff() <= 1e-9 * y_scale;

  data.rowwise() += grand_mean;
  out.y = data.col(0);
  out.X = data.rightCols(X.cols());

  std::size_t dof = 0;
  for (const auto& f : factors) dof += f.levels() - 1;
  if (factors.size() == 2) {
    // Disconnected level graphs add one redundant dummy per extra component.
    dof -= components(factors[0], factors[1]) - 1;
  }
  out.absorbed_dof = dof;
  return out;
}

}  // namespace pricedisp::econometrics
