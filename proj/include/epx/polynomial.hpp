#pragma once

#include <span>
#include <utility>
#include <vector>

#include "epx/model.hpp"

namespace epx::poly
{

// Coefficients are stored in ascending order: c[0] + c[1] z + ... + c[n] z^n.

Complex evaluate(std::span<const Complex> coeffs, Complex z);

// Value and first derivative by a single Horner pass.
std::pair<Complex, Complex> evaluate_with_derivative(std::span<const Complex> coeffs, Complex z);

// sum_k |c_k| |z|^k, the natural magnitude for backward-error tests at z.
double magnitude(std::span<const Complex> coeffs, Complex z);

struct RootSet
{
  std::vector<Complex> roots;
  int iterations = 0;
  bool converged = false;
};

// All roots of the polynomial by simultaneous Aberth-Ehrlich iteration.
// The leading coefficient must be nonzero. Roots are returned with multiplicity.
RootSet aberth_roots(std::span<const Complex> coeffs, int max_iterations = 500);

}  // namespace epx::poly
