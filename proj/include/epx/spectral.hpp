#pragma once

#include <vector>

#include "epx/model.hpp"

namespace epx
{

// Eigenvalue condition number above which a matrix is treated as sitting on
// an exceptional point. Equivalent to |<left|right>| < 1e-8 at unit norms.
inline constexpr double kDefectiveThreshold = 1e8;

// Full eigendecomposition with paired left and right eigenvectors.
//
// right.col(i) solves H r = values[i] r; left.col(i) solves H^H l = conj(values[i]) l,
// so <left_i|right_j> = left.col(i).adjoint() * right.col(j). Before
// biorthonormalization both sets have unit 2-norm.
struct EigenSystem
{
  std::vector<Complex> values;
  CMatrix right;
  CMatrix left;
  std::vector<double> residuals;
  // 1 / |<left_i|right_i>| at unit norms, measured before any rescaling.
  std::vector<double> condition;

  int size() const { return static_cast<int>(values.size()); }
};

struct DefectivityReport
{
  double min_pair_gap = 0.0;
  double max_condition = 0.0;
  bool near_defective = false;
};

EigenSystem eigensystem(const CMatrix &m);

// Eigenvalues only, in the order returned by the Schur-based solver.
std::vector<Complex> eigenvalues(const CMatrix &m);

// Scales each pair so that <left_i|right_j> = delta_ij with ||left_i|| == ||right_i||,
// and rotates the phase so the largest component of right_i is real positive.
// Throws NearDefective if any condition number exceeds `threshold`.
EigenSystem biorthonormalize(const EigenSystem &sys, double threshold = kDefectiveThreshold);

DefectivityReport defectivity(const EigenSystem &sys, double threshold = kDefectiveThreshold);

// max_ij |<left_i|right_j> - delta_ij|.
double biorthogonality_error(const EigenSystem &sys);

}  // namespace epx
