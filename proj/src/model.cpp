#include "epx/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "epx/errors.hpp"

namespace epx
{

namespace
{

bool all_finite(const CMatrix &m)
{
  return m.allFinite();
}

}  // namespace

MatrixFamily::MatrixFamily(CMatrix h0, CMatrix h1) : h0_(std::move(h0)), h1_(std::move(h1))
{
  if (h0_.rows() != h0_.cols() || h1_.rows() != h1_.cols())
  {
    throw std::invalid_argument("family matrices must be square");
  }
  if (h0_.rows() != h1_.rows())
  {
    throw std::invalid_argument("h0 and h1 must have the same dimension");
  }
  if (h0_.rows() < 2)
  {
    throw std::invalid_argument("family dimension must be at least 2");
  }
  if (!all_finite(h0_) || !all_finite(h1_))
  {
    throw std::invalid_argument("family matrices contain non-finite entries");
  }
}

bool MatrixFamily::is_real() const
{
  return h0_.imag().isZero(0.0) && h1_.imag().isZero(0.0);
}

bool MatrixFamily::is_symmetric(double tol) const
{
  const double s0 = (h0_ - h0_.transpose()).cwiseAbs().maxCoeff();
  const double s1 = (h1_ - h1_.transpose()).cwiseAbs().maxCoeff();
  return s0 <= tol && s1 <= tol;
}

CMatrix evaluate(const MatrixFamily &f, Complex lambda)
{
  return f.h0() + lambda * f.h1();
}

void TwoLevelParams::validate() const
{
  for (double v : {eps1, eps2, om1, om2, phi})
  {
    if (!std::isfinite(v))
    {
      throw std::invalid_argument("two-level parameters must be finite");
    }
  }
  if (eps1 == eps2)
  {
    throw DegenerateFamily("two-level family requires eps1 != eps2");
  }
  if (om1 == om2)
  {
    throw DegenerateFamily("two-level family requires om1 != om2");
  }
}

MatrixFamily two_level_family(const TwoLevelParams &p)
{
  p.validate();
  const double c = std::cos(p.phi);
  const double s = std::sin(p.phi);

  CMatrix h0 = CMatrix::Zero(2, 2);
  h0(0, 0) = p.eps1;
  h0(1, 1) = p.eps2;

  // U diag(om1, om2) U^T, expanded.
  CMatrix h1(2, 2);
  h1(0, 0) = p.om1 * c * c + p.om2 * s * s;
  h1(1, 1) = p.om1 * s * s + p.om2 * c * c;
  h1(0, 1) = (p.om1 - p.om2) * s * c;
  h1(1, 0) = h1(0, 1);
  return MatrixFamily(std::move(h0), std::move(h1));
}

Contour::Contour(std::vector<Complex> points, bool closed, std::optional<int> winding_hint)
  : points_(std::move(points)), closed_(closed), winding_hint_(winding_hint)
{
  if (points_.size() < 3)
  {
    throw std::invalid_argument("a contour needs at least 3 points");
  }
  for (std::size_t i = 0; i < points_.size(); ++i)
  {
    if (!is_finite(points_[i]))
    {
      throw std::invalid_argument("contour point " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && points_[i] == points_[i - 1])
    {
      throw std::invalid_argument("contour points " + std::to_string(i - 1) + " and " +
                                  std::to_string(i) + " coincide");
    }
  }
  if (closed_ && points_.front() != points_.back())
  {
    throw std::invalid_argument("closed contour must end exactly at its first point");
  }
}

double Contour::scale() const
{
  double d = 0.0;
  for (const auto &z : points_)
  {
    d = std::max(d, std::abs(z - points_.front()));
  }
  return d;
}

Contour Contour::reversed() const
{
  std::vector<Complex> pts(points_.rbegin(), points_.rend());
  std::optional<int> hint;
  if (winding_hint_)
  {
    hint = -*winding_hint_;
  }
  return Contour(std::move(pts), closed_, hint);
}

Contour Contour::rotated(std::size_t start) const
{
  if (!closed_)
  {
    throw std::invalid_argument("only closed contours can be rotated");
  }
  const std::size_t n = points_.size() - 1;
  if (start >= n)
  {
    throw std::out_of_range("rotation start outside the contour");
  }
  std::vector<Complex> pts;
  pts.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k)
  {
    pts.push_back(points_[(start + k) % n]);
  }
  pts.push_back(pts.front());
  return Contour(std::move(pts), true, winding_hint_);
}

Contour circle_contour(Complex center, double radius, int samples, int turns)
{
  if (!(radius > 0.0) || !std::isfinite(radius))
  {
    throw std::invalid_argument("circle radius must be positive");
  }
  if (samples < 16)
  {
    throw std::invalid_argument("circle needs at least 16 samples per turn");
  }
  if (turns == 0)
  {
    throw std::invalid_argument("circle needs a nonzero number of turns");
  }
  const int n = samples * std::abs(turns);
  const double dir = turns > 0 ? 1.0 : -1.0;
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k)
  {
    // Angles are reduced per revolution so repeated turns land on identical samples.
    const int j = k % samples;
    const double angle = dir * 2.0 * std::numbers::pi * j / samples;
    pts.push_back(center + std::polar(radius, angle));
  }
  pts.push_back(pts.front());
  return Contour(std::move(pts), true, turns);
}

Contour detour_path(double start, double end, Complex bulge, int samples)
{
  if (!(start < end))
  {
    throw std::invalid_argument("detour requires start < end");
  }
  if (bulge.imag() == 0.0)
  {
    throw std::invalid_argument("detour bulge must lie off the real axis");
  }
  if (samples < 3)
  {
    throw std::invalid_argument("detour needs at least 3 samples");
  }
  const Complex a(start, 0.0);
  const Complex b(end, 0.0);
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k)
  {
    const double t = static_cast<double>(k) / (samples - 1);
    // Quadratic Lagrange interpolant through t = 0, 1/2, 1.
    pts.push_back(a * (1.0 - t) * (1.0 - 2.0 * t) + bulge * (4.0 * t * (1.0 - t)) +
                  b * (t * (2.0 * t - 1.0)));
  }
  pts.front() = a;
  pts.back() = b;
  return Contour(std::move(pts), false);
}

Contour segment_contour(Complex start, Complex end, int samples)
{
  if (samples < 3)
  {
    throw std::invalid_argument("segment needs at least 3 samples");
  }
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k)
  {
    const double t = static_cast<double>(k) / (samples - 1);
    pts.push_back(start + (end - start) * t);
  }
  pts.back() = end;
  return Contour(std::move(pts), false);
}

Contour concatenate(const Contour &first, const Contour &second, bool close)
{
  if (first.back() != second.front())
  {
    throw std::invalid_argument("concatenated paths must share their joint point");
  }
  std::vector<Complex> pts(first.points().begin(), first.points().end());
  pts.insert(pts.end(), second.points().begin() + 1, second.points().end());
  if (close && pts.front() != pts.back())
  {
    throw std::invalid_argument("concatenation does not close");
  }
  return Contour(std::move(pts), close);
}

double winding_number(std::span<const Complex> polyline, Complex point)
{
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < polyline.size(); ++k)
  {
    total += std::arg((polyline[k + 1] - point) / (polyline[k] - point));
  }
  return total / (2.0 * std::numbers::pi);
}

double distance_to_polyline(std::span<const Complex> polyline, Complex point)
{
  double best = std::abs(polyline.front() - point);
  for (std::size_t k = 0; k + 1 < polyline.size(); ++k)
  {
    const Complex a = polyline[k];
    const Complex d = polyline[k + 1] - a;
    const double len2 = std::norm(d);
    double t = len2 > 0.0 ? (std::conj(d) * (point - a)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::abs(a + t * d - point));
  }
  return best;
}

}  // namespace epx
