#pragma once

#include <array>
#include <utility>

#include "epx/model.hpp"

// Closed forms for the two-level family. These are the oracles the numerical
// modules are checked against.
namespace epx::analytic2
{

// Which root of (E1 - E2)^2 = 4 R^2 is meant when evaluating the mixing angle.
//
// `upper` is the root aligned with the uncoupled level difference
// (eps1 - eps2) + lambda (om1 - om2), i.e. E1 is the level that reduces to
// eps1 + lambda om1 when phi -> 0. On the real axis this gives theta(0) = 0 and
// theta -> phi for large |lambda|. `lower` is the other root.
enum class Sheet
{
  upper,
  lower
};

struct ThetaValue
{
  Complex theta;
  // tan(theta) itself; infinite (real part +inf) when theta == pi/2.
  Complex tan_theta;
  Sheet sheet;
  // Set when |R| falls below the EP tolerance; theta is then meaningless.
  bool divergent = false;
};

struct EpPair
{
  Complex plus;
  Complex minus;
};

// R^2 = ((e1-e2)/2)^2 + (lambda (w1-w2)/2)^2 + lambda (e1-e2)(w1-w2) cos(2 phi) / 2.
Complex radicand(const TwoLevelParams &p, Complex lambda);

// (E1, E2) = mean +- R with the principal square root; E1 carries the + sign.
std::pair<Complex, Complex> eigenvalues_closed(const TwoLevelParams &p, Complex lambda);

// lambda_c = -((e1-e2)/(w1-w2)) exp(+-2 i phi).
EpPair exceptional_points_closed(const TwoLevelParams &p);

// Minimum of |E1 - E2| over real lambda, |e1 - e2| |sin 2 phi|, and where it is attained.
struct RealAxisGap
{
  double gap;
  double lambda;
};
RealAxisGap min_real_gap(const TwoLevelParams &p);

// Relative tolerance on |R| below which theta is reported divergent.
inline constexpr double kEpTolerance = 1e-8;

ThetaValue theta(const TwoLevelParams &p, Complex lambda, Sheet sheet);

// Right-hand side of tan^2 theta = (D - a) / (D + a) with D = E1 - E2 on `sheet`.
Complex tan2_theta(const TwoLevelParams &p, Complex lambda, Sheet sheet);

// psi1 = (cos theta, sin theta), psi2 = (-sin theta, cos theta).
std::pair<std::array<Complex, 2>, std::array<Complex, 2>> wavefunctions_from_theta(Complex theta);

// Exceptional points of the absorptive family obtained by lambda = -i G.
EpPair absorption_ep(const TwoLevelParams &p);

}  // namespace epx::analytic2
