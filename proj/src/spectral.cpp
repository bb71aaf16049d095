#include "epx/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "epx/errors.hpp"

namespace epx
{

namespace
{

// Greedy assignment of left vectors to right vectors by largest |overlap|.
std::vector<int> pair_by_overlap(const CMatrix &right, const CMatrix &left)
{
  const int n = static_cast<int>(right.cols());
  const Eigen::MatrixXd overlap = (left.adjoint() * right).cwiseAbs();
  std::vector<int> left_for_right(n, -1);
  std::vector<bool> left_used(n, false);
  for (int round = 0; round < n; ++round)
  {
    double best = -1.0;
    int bi = -1;
    int bj = -1;
    for (int j = 0; j < n; ++j)
    {
      if (left_for_right[j] >= 0)
      {
        continue;
      }
      for (int i = 0; i < n; ++i)
      {
        if (!left_used[i] && overlap(i, j) > best)
        {
          best = overlap(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    left_for_right[bj] = bi;
    left_used[bi] = true;
  }
  return left_for_right;
}

}  // namespace

EigenSystem eigensystem(const CMatrix &m)
{
  if (!m.allFinite())
  {
    throw std::invalid_argument("eigensystem: matrix has non-finite entries");
  }
  Eigen::ComplexEigenSolver<CMatrix> rsolver(m, true);
  if (rsolver.info() != Eigen::Success)
  {
    throw NumericalFailure("eigensystem: right eigen-iteration did not converge (all " +
                           std::to_string(m.rows()) + " indices affected)");
  }
  Eigen::ComplexEigenSolver<CMatrix> lsolver(m.adjoint(), true);
  if (lsolver.info() != Eigen::Success)
  {
    throw NumericalFailure("eigensystem: left eigen-iteration did not converge (all " +
                           std::to_string(m.rows()) + " indices affected)");
  }

  const int n = static_cast<int>(m.rows());
  EigenSystem sys;
  sys.values.assign(rsolver.eigenvalues().begin(), rsolver.eigenvalues().end());
  sys.right = rsolver.eigenvectors();
  const CMatrix lraw = lsolver.eigenvectors();
  for (int j = 0; j < n; ++j)
  {
    sys.right.col(j).normalize();
  }

  const std::vector<int> pairing = pair_by_overlap(sys.right, lraw);
  sys.left.resize(n, n);
  sys.residuals.resize(n);
  sys.condition.resize(n);
  for (int j = 0; j < n; ++j)
  {
    sys.left.col(j) = lraw.col(pairing[j]).normalized();
    sys.residuals[j] = (m * sys.right.col(j) - sys.values[j] * sys.right.col(j)).norm();
    const double s = std::abs(sys.left.col(j).dot(sys.right.col(j)));
    sys.condition[j] = s > 0.0 ? 1.0 / s : std::numeric_limits<double>::infinity();
  }
  return sys;
}

std::vector<Complex> eigenvalues(const CMatrix &m)
{
  Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
  if (solver.info() != Eigen::Success)
  {
    throw NumericalFailure("eigenvalues: eigen-iteration did not converge");
  }
  return {solver.eigenvalues().begin(), solver.eigenvalues().end()};
}

EigenSystem biorthonormalize(const EigenSystem &sys, double threshold)
{
  EigenSystem out = sys;
  for (int j = 0; j < sys.size(); ++j)
  {
    if (!(sys.condition[j] <= threshold))
    {
      throw NearDefective("biorthonormalize: eigenvalue " + std::to_string(j) +
                          " has condition number " + std::to_string(sys.condition[j]) +
                          "; the matrix is at or near an exceptional point");
    }
    const Complex s = sys.left.col(j).dot(sys.right.col(j));
    Eigen::Index k = 0;
    sys.right.col(j).cwiseAbs().maxCoeff(&k);
    const Complex pivot = sys.right(k, j);
    const Complex alpha = std::conj(pivot) / std::abs(pivot) / std::sqrt(std::abs(s));
    const Complex beta = std::conj(1.0 / (alpha * s));
    out.right.col(j) = alpha * sys.right.col(j);
    out.left.col(j) = beta * sys.left.col(j);
  }
  return out;
}

DefectivityReport defectivity(const EigenSystem &sys, double threshold)
{
  DefectivityReport rep;
  rep.min_pair_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sys.size(); ++i)
  {
    for (int j = i + 1; j < sys.size(); ++j)
    {
      rep.min_pair_gap = std::min(rep.min_pair_gap, std::abs(sys.values[i] - sys.values[j]));
    }
    rep.max_condition = std::max(rep.max_condition, sys.condition[i]);
  }
  rep.near_defective = rep.max_condition > threshold;
  return rep;
}

double biorthogonality_error(const EigenSystem &sys)
{
  const CMatrix g = sys.left.adjoint() * sys.right;
  return (g - CMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace epx
