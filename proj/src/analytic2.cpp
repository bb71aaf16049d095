#include "epx/analytic2.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace epx::analytic2
{

namespace
{

// Root of D^2 = 4 R^2 on the requested sheet.
Complex level_difference(const TwoLevelParams &p, Complex lambda, Sheet sheet)
{
  Complex d = 2.0 * std::sqrt(radicand(p, lambda));
  const Complex diabatic = p.delta_eps() + lambda * p.delta_om();
  if ((d * std::conj(diabatic)).real() < 0.0)
  {
    d = -d;
  }
  return sheet == Sheet::upper ? d : -d;
}

}  // namespace

Complex radicand(const TwoLevelParams &p, Complex lambda)
{
  const double de = p.delta_eps();
  const double dw = p.delta_om();
  const Complex half_coupled = lambda * dw / 2.0;
  return (de / 2.0) * (de / 2.0) + half_coupled * half_coupled +
         0.5 * lambda * de * dw * std::cos(2.0 * p.phi);
}

std::pair<Complex, Complex> eigenvalues_closed(const TwoLevelParams &p, Complex lambda)
{
  const Complex mean = (p.eps1 + p.eps2 + lambda * (p.om1 + p.om2)) / 2.0;
  const Complex r = std::sqrt(radicand(p, lambda));
  return {mean + r, mean - r};
}

EpPair exceptional_points_closed(const TwoLevelParams &p)
{
  const double ratio = -p.delta_eps() / p.delta_om();
  return {ratio * std::polar(1.0, 2.0 * p.phi), ratio * std::polar(1.0, -2.0 * p.phi)};
}

RealAxisGap min_real_gap(const TwoLevelParams &p)
{
  const double c = std::cos(2.0 * p.phi);
  const double s = std::sin(2.0 * p.phi);
  return {std::abs(p.delta_eps() * s), -p.delta_eps() * c / p.delta_om()};
}

ThetaValue theta(const TwoLevelParams &p, Complex lambda, Sheet sheet)
{
  const double de = p.delta_eps();
  const double dw = p.delta_om();
  const Complex r = std::sqrt(radicand(p, lambda));
  const double scale = std::abs(de) / 2.0 + std::abs(lambda) * std::abs(dw) / 2.0;

  ThetaValue out{};
  out.sheet = sheet;
  if (std::abs(r) < kEpTolerance * scale)
  {
    out.divergent = true;
    out.theta = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    out.tan_theta = out.theta;
    return out;
  }

  const Complex d = level_difference(p, lambda, sheet);
  const Complex a = de + lambda * dw * std::cos(2.0 * p.phi);
  const Complex num = lambda * dw * std::sin(2.0 * p.phi);

  // tan(theta) = num / (D + a) = (D - a) / num; use whichever denominator is larger.
  bool infinite = false;
  Complex t;
  if (std::abs(d + a) >= std::abs(d - a))
  {
    t = num / (d + a);
  }
  else if (num != 0.0)
  {
    t = (d - a) / num;
  }
  else
  {
    infinite = true;
  }

  if (infinite)
  {
    out.tan_theta = Complex(std::numeric_limits<double>::infinity(), 0.0);
    out.theta = Complex(std::numbers::pi / 2.0, 0.0);
    return out;
  }

  out.tan_theta = t;
  Complex th = std::atan(t);
  // Principal value with real part in (-pi/2, pi/2].
  if (th.real() <= -std::numbers::pi / 2.0)
  {
    th += std::numbers::pi;
  }
  out.theta = th;
  return out;
}

Complex tan2_theta(const TwoLevelParams &p, Complex lambda, Sheet sheet)
{
  const Complex d = level_difference(p, lambda, sheet);
  const Complex a = p.delta_eps() + lambda * p.delta_om() * std::cos(2.0 * p.phi);
  return (d - a) / (d + a);
}

std::pair<std::array<Complex, 2>, std::array<Complex, 2>> wavefunctions_from_theta(Complex theta)
{
  const Complex c = std::cos(theta);
  const Complex s = std::sin(theta);
  return {{c, s}, {-s, c}};
}

EpPair absorption_ep(const TwoLevelParams &p)
{
  // lambda = -i G  =>  G = i lambda.
  const EpPair lc = exceptional_points_closed(p);
  const Complex i(0.0, 1.0);
  return {i * lc.plus, i * lc.minus};
}

}  // namespace epx::analytic2
