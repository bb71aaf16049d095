#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <vector>

#include "epx/model.hpp"

// Batched eigen-workloads. Each kernel has an OpenMP path and a serial
// reference; both produce bitwise identical results because every index is
// computed independently and nothing is reduced across threads.
namespace epx::kernels
{

enum class Exec
{
  serial,
  parallel
};

// Calls fn(i) for i in [0, n). The first exception thrown by any index is
// rethrown on the calling thread after the loop completes.
void for_each_index(std::size_t n, Exec exec, const std::function<void(std::size_t)> &fn);

// prod_{i<j} (E_i - E_j)^2 of the given eigenvalues.
Complex discriminant_of(std::span<const Complex> values);

// Smallest |E_i - E_j| over pairs.
double min_gap_of(std::span<const Complex> values);

struct DiscriminantSamples
{
  std::vector<Complex> values;
  std::vector<double> min_gaps;
  // max_i |E_i| over all samples.
  double spectral_scale = 0.0;
};

DiscriminantSamples sample_discriminant(const MatrixFamily &f, std::span<const Complex> lambdas,
                                        Exec exec);

// Eigenvalues at each lambda, sorted by (real, imag).
std::vector<std::vector<Complex>> sample_spectra(const MatrixFamily &f,
                                                 std::span<const Complex> lambdas, Exec exec);

}  // namespace epx::kernels
