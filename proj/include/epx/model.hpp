#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace epx
{

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline bool is_finite(Complex z)
{
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// A linear pencil H(lambda) = h0 + lambda * h1 of square complex matrices.
class MatrixFamily
{
public:
  MatrixFamily(CMatrix h0, CMatrix h1);

  int dim() const { return static_cast<int>(h0_.rows()); }
  const CMatrix &h0() const { return h0_; }
  const CMatrix &h1() const { return h1_; }

  // True when both matrices have vanishing imaginary parts.
  bool is_real() const;
  bool is_symmetric(double tol = 0.0) const;

  bool operator==(const MatrixFamily &other) const
  {
    return h0_ == other.h0_ && h1_ == other.h1_;
  }

private:
  CMatrix h0_;
  CMatrix h1_;
};

CMatrix evaluate(const MatrixFamily &f, Complex lambda);

// Two-level model: diag(eps1, eps2) + lambda * U(phi) diag(om1, om2) U(phi)^T,
// with U the planar rotation by phi.
struct TwoLevelParams
{
  double eps1 = 0.0;
  double eps2 = 0.0;
  double om1 = 0.0;
  double om2 = 0.0;
  double phi = 0.0;

  // Throws DegenerateFamily for eps1 == eps2 or om1 == om2, std::invalid_argument
  // for non-finite values.
  void validate() const;

  double delta_eps() const { return eps1 - eps2; }
  double delta_om() const { return om1 - om2; }
};

MatrixFamily two_level_family(const TwoLevelParams &p);

// Sampled path in the complex lambda plane. Closed contours repeat their first
// point exactly as the last one.
class Contour
{
public:
  Contour(std::vector<Complex> points, bool closed,
          std::optional<int> winding_hint = std::nullopt);

  std::span<const Complex> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool closed() const { return closed_; }
  std::optional<int> winding_hint() const { return winding_hint_; }

  Complex front() const { return points_.front(); }
  Complex back() const { return points_.back(); }

  // Largest distance between any sample and the first one; used as the
  // length scale for step and closure tolerances.
  double scale() const;

  // Same path traversed backwards.
  Contour reversed() const;

  // Closed contour with the same trace, starting at vertex `start`
  // (0 <= start < size() - 1).
  Contour rotated(std::size_t start) const;

private:
  std::vector<Complex> points_;
  bool closed_;
  std::optional<int> winding_hint_;
};

// `samples` distinct points per revolution; negative turns run clockwise.
Contour circle_contour(Complex center, double radius, int samples, int turns);

// Open quadratic arc through (start, bulge, end), uniform in the curve parameter.
Contour detour_path(double start, double end, Complex bulge, int samples = 128);

Contour segment_contour(Complex start, Complex end, int samples);

// Concatenation of open paths sharing an endpoint. Drops the duplicated joint.
Contour concatenate(const Contour &first, const Contour &second, bool close);

// Sum of argument increments of (z - point) along the polyline, divided by 2*pi.
// Exact for polylines; assumes no vertex coincides with `point`.
double winding_number(std::span<const Complex> polyline, Complex point);

// Nearest distance from `point` to the polyline (segments between samples).
double distance_to_polyline(std::span<const Complex> polyline, Complex point);

}  // namespace epx
