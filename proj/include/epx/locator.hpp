#pragma once

#include <utility>
#include <vector>

#include "epx/kernels.hpp"
#include "epx/model.hpp"

namespace epx
{

// Discriminant of det(E - H(lambda)) as a polynomial in lambda, recovered from
// samples of prod_{i<j} (E_i - E_j)^2 on a circle of radius `radius`.
struct DiscriminantPoly
{
  // Ascending order, trimmed to the numerically significant degree.
  std::vector<Complex> coeffs;
  // N (N - 1): the degree for a generic family.
  int nominal_degree = 0;
  double radius = 1.0;
  // Ratio of largest to smallest Vandermonde column norm on the sample circle.
  double condition = 1.0;
  // max_k |c_k| radius^k before trimming.
  double scale = 0.0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool generic() const { return degree() == nominal_degree; }
  Complex operator()(Complex lambda) const;
};

struct ExceptionalPoint
{
  Complex lambda_c;
  // Coalescing levels, 0-based, ordering eigenvalues at the probe points by
  // ascending real part (ties by imaginary part).
  std::pair<int, int> level_pair{0, 1};
  // |discriminant(lambda_c)| from a direct eigensolve.
  double residual = 0.0;
  // |E_i - E_j| of the coalescing pair at lambda_c + delta.
  double gap_at_offset = 0.0;
  int multiplicity = 1;
  // False when Newton refinement did not meet its tolerance.
  bool refined = true;
  // Set when a third level sits as close to the pair as the pair members are to each other.
  bool ambiguous = false;
};

struct LocatorOptions
{
  // Relative residual target for Newton refinement against the direct discriminant.
  double newton_tolerance = 1e-10;
  int max_newton_iterations = 80;
  // Roots closer than cluster_tolerance * radius merge into one point with multiplicity.
  double cluster_tolerance = 1e-6;
  // Probe offset for level classification, relative to |lambda_c|.
  double probe_offset = 1e-4;
  // Coefficients below trim_tolerance * scale count as zero when fixing the degree.
  double trim_tolerance = 1e-9;
  kernels::Exec exec = kernels::Exec::parallel;
};

Complex discriminant_at(const MatrixFamily &f, Complex lambda);

// Throws DegenerateFamily when the discriminant vanishes identically.
DiscriminantPoly discriminant_poly(const MatrixFamily &f,
                                   kernels::Exec exec = kernels::Exec::parallel,
                                   double trim_tolerance = 1e-9);

// All finite exceptional points, sorted by (real, imag) of lambda_c.
std::vector<ExceptionalPoint> locate_eps(const MatrixFamily &f, const LocatorOptions &opts = {});

// Total count with multiplicity.
int count_with_multiplicity(const std::vector<ExceptionalPoint> &eps);

}  // namespace epx
