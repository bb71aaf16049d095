#include "epx/locator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include "epx/errors.hpp"
#include "epx/polynomial.hpp"
#include "epx/spectral.hpp"

namespace epx
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Sampling radius: one plus the ratio of the unperturbed to the perturbation scale.
double sample_radius(const MatrixFamily &f)
{
  const double n1 = f.h1().norm();
  return n1 > 0.0 ? 1.0 + f.h0().norm() / n1 : 1.0;
}

std::vector<Complex> sorted_values(const MatrixFamily &f, Complex lambda)
{
  std::vector<Complex> ev = eigenvalues(evaluate(f, lambda));
  std::sort(ev.begin(), ev.end(),
            [](Complex a, Complex b)
            { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return ev;
}

struct Refined
{
  Complex z;
  double residual;
  bool converged;
};

// Newton on the directly evaluated discriminant, with the Aberth correction
// against the other root estimates so neighbouring roots cannot collapse.
Refined refine_root(const MatrixFamily &f, const DiscriminantPoly &poly,
                    std::span<const Complex> estimates, std::size_t k,
                    const LocatorOptions &opts)
{
  Complex z = estimates[k];
  Complex fz = discriminant_at(f, z);
  for (int it = 0; it < opts.max_newton_iterations; ++it)
  {
    const double mag = poly::magnitude(poly.coeffs, z);
    if (std::abs(fz) <= opts.newton_tolerance * mag)
    {
      return {z, std::abs(fz), true};
    }
    const double h = 1e-5 * (1.0 + std::abs(z));
    const Complex df = (discriminant_at(f, z + h) - discriminant_at(f, z - h)) / (2.0 * h);
    if (df == 0.0)
    {
      break;
    }
    Complex sum = 0.0;
    for (std::size_t j = 0; j < estimates.size(); ++j)
    {
      if (j != k && estimates[j] != z)
      {
        sum += 1.0 / (z - estimates[j]);
      }
    }
    const Complex w = fz / df;
    Complex step = w / (1.0 - w * sum);

    // Damping: shrink the step while it increases |f|.
    Complex znew = z - step;
    Complex fnew = discriminant_at(f, znew);
    for (int halving = 0; halving < 8 && std::abs(fnew) > std::abs(fz); ++halving)
    {
      step *= 0.5;
      znew = z - step;
      fnew = discriminant_at(f, znew);
    }
    const bool stalled = std::abs(step) <= 4.0 * kEps * (1.0 + std::abs(z));
    z = znew;
    fz = fnew;
    if (stalled)
    {
      // At the rounding floor; accept if the residual is at most modestly above target.
      const double m = poly::magnitude(poly.coeffs, z);
      return {z, std::abs(fz), std::abs(fz) <= 1e3 * opts.newton_tolerance * m};
    }
  }
  const double mag = poly::magnitude(poly.coeffs, z);
  return {z, std::abs(fz), std::abs(fz) <= opts.newton_tolerance * mag};
}

void classify(const MatrixFamily &f, ExceptionalPoint &ep, const LocatorOptions &opts)
{
  const double base = std::abs(ep.lambda_c) > 0.0 ? std::abs(ep.lambda_c) : 1.0;
  const double delta = opts.probe_offset * base;
  const Complex dirs[] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};

  std::map<std::pair<int, int>, int> votes;
  std::map<std::pair<int, int>, double> gaps;
  bool ambiguous = false;
  for (const Complex dir : dirs)
  {
    const std::vector<Complex> ev = sorted_values(f, ep.lambda_c + delta * dir);
    const int n = static_cast<int>(ev.size());
    double best = std::numeric_limits<double>::infinity();
    std::pair<int, int> pair{0, 1};
    for (int i = 0; i < n; ++i)
    {
      for (int j = i + 1; j < n; ++j)
      {
        const double g = std::abs(ev[i] - ev[j]);
        if (g < best)
        {
          best = g;
          pair = {i, j};
        }
      }
    }
    for (int m = 0; m < n; ++m)
    {
      if (m == pair.first || m == pair.second)
      {
        continue;
      }
      const double third = std::min(std::abs(ev[m] - ev[pair.first]),
                                    std::abs(ev[m] - ev[pair.second]));
      if (third < 10.0 * best)
      {
        ambiguous = true;
      }
    }
    ++votes[pair];
    if (!gaps.contains(pair))
    {
      gaps[pair] = best;
    }
  }
  const auto modal = std::max_element(votes.begin(), votes.end(),
                                      [](const auto &a, const auto &b)
                                      { return a.second < b.second; });
  ep.level_pair = modal->first;
  ep.gap_at_offset = gaps[modal->first];
  ep.ambiguous = ambiguous;
}

}  // namespace

Complex DiscriminantPoly::operator()(Complex lambda) const
{
  return poly::evaluate(coeffs, lambda);
}

Complex discriminant_at(const MatrixFamily &f, Complex lambda)
{
  const std::vector<Complex> ev = eigenvalues(evaluate(f, lambda));
  return kernels::discriminant_of(ev);
}

DiscriminantPoly discriminant_poly(const MatrixFamily &f, kernels::Exec exec,
                                   double trim_tolerance)
{
  const int n = f.dim();
  const int degree = n * (n - 1);
  const int samples = 2 * (degree + 1);
  const double rho = sample_radius(f);

  std::vector<Complex> lambdas(samples);
  for (int m = 0; m < samples; ++m)
  {
    lambdas[m] = std::polar(rho, 2.0 * std::numbers::pi * m / samples);
  }
  const kernels::DiscriminantSamples s = kernels::sample_discriminant(f, lambdas, exec);

  const double gap_floor = 1e-7 * std::max(s.spectral_scale, std::numeric_limits<double>::min());
  if (std::all_of(s.min_gaps.begin(), s.min_gaps.end(),
                  [&](double g) { return g <= gap_floor; }))
  {
    throw DegenerateFamily("discriminant vanishes identically: two levels are degenerate "
                           "for every lambda");
  }

  // Least squares on roots of unity reduces to a scaled discrete Fourier transform,
  // because the Vandermonde columns are orthogonal for k < samples.
  DiscriminantPoly out;
  out.nominal_degree = degree;
  out.radius = rho;
  out.condition = std::pow(std::max(rho, 1.0 / rho), degree);
  out.coeffs.resize(degree + 1);
  std::vector<double> scaled(degree + 1);
  for (int k = 0; k <= degree; ++k)
  {
    Complex acc = 0.0;
    for (int m = 0; m < samples; ++m)
    {
      const long phase = (static_cast<long>(k) * m) % samples;
      acc += s.values[m] * std::polar(1.0, -2.0 * std::numbers::pi * phase / samples);
    }
    acc /= static_cast<double>(samples);
    scaled[k] = std::abs(acc);
    out.coeffs[k] = acc / std::pow(rho, k);
  }
  out.scale = *std::max_element(scaled.begin(), scaled.end());

  int top = degree;
  while (top > 0 && scaled[top] <= trim_tolerance * out.scale)
  {
    --top;
  }
  out.coeffs.resize(top + 1);
  return out;
}

std::vector<ExceptionalPoint> locate_eps(const MatrixFamily &f, const LocatorOptions &opts)
{
  const DiscriminantPoly poly = discriminant_poly(f, opts.exec, opts.trim_tolerance);
  if (poly.degree() < 1)
  {
    return {};
  }

  const poly::RootSet roots = poly::aberth_roots(poly.coeffs);
  const std::vector<Complex> &estimates = roots.roots;

  std::vector<Refined> refined(estimates.size());
  kernels::for_each_index(estimates.size(), opts.exec,
                          [&](std::size_t k)
                          { refined[k] = refine_root(f, poly, estimates, k, opts); });

  // Single-linkage clustering of the refined roots.
  const std::size_t nroots = refined.size();
  std::vector<std::size_t> parent(nroots);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x)
  {
    while (parent[x] != x)
    {
      x = parent[x] = parent[parent[x]];
    }
    return x;
  };
  const double merge = opts.cluster_tolerance * poly.radius;
  for (std::size_t i = 0; i < nroots; ++i)
  {
    for (std::size_t j = i + 1; j < nroots; ++j)
    {
      if (std::abs(refined[i].z - refined[j].z) <= merge)
      {
        parent[find(i)] = find(j);
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < nroots; ++i)
  {
    clusters[find(i)].push_back(i);
  }

  std::vector<ExceptionalPoint> eps;
  eps.reserve(clusters.size());
  for (const auto &[root, members] : clusters)
  {
    ExceptionalPoint ep;
    Complex centroid = 0.0;
    bool ok = true;
    for (std::size_t m : members)
    {
      centroid += refined[m].z;
      ok = ok && refined[m].converged;
    }
    ep.lambda_c = members.size() == 1 ? refined[members.front()].z
                                      : centroid / static_cast<double>(members.size());
    ep.multiplicity = static_cast<int>(members.size());
    ep.refined = ok;
    eps.push_back(ep);
  }

  kernels::for_each_index(eps.size(), opts.exec,
                          [&](std::size_t k)
                          {
                            eps[k].residual = std::abs(discriminant_at(f, eps[k].lambda_c));
                            classify(f, eps[k], opts);
                          });

  // Real parts closer than the refinement noise count as equal, so conjugate
  // pairs always list the lower half-plane member first.
  const double tie = 1e-9 * poly.radius;
  std::sort(eps.begin(), eps.end(),
            [tie](const ExceptionalPoint &a, const ExceptionalPoint &b)
            {
              return std::abs(a.lambda_c.real() - b.lambda_c.real()) > tie
                         ? a.lambda_c.real() < b.lambda_c.real()
                         : a.lambda_c.imag() < b.lambda_c.imag();
            });
  return eps;
}

int count_with_multiplicity(const std::vector<ExceptionalPoint> &eps)
{
  int total = 0;
  for (const auto &ep : eps)
  {
    total += ep.multiplicity;
  }
  return total;
}

}  // namespace epx
