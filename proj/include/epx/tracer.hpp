#pragma once

#include <optional>
#include <vector>

#include "epx/locator.hpp"
#include "epx/model.hpp"
#include "epx/spectral.hpp"

namespace epx
{

struct TraceOptions
{
  // Accept a step only if every branch moves by less than gap_guard times its
  // distance to the nearest other branch.
  double gap_guard = 0.2;
  // Bisection floor, relative to the contour scale.
  double min_step = 1e-12;
  double defective_threshold = kDefectiveThreshold;
  // Exceptional points the contour must keep clear of, by ep_exclusion times
  // min(contour scale, 1 + |lambda_c|). The cap keeps long open paths usable.
  // Empty disables the pre-check; the defectivity guard stays on.
  std::vector<Complex> known_eps;
  double ep_exclusion = 1e-3;
  // Branch indices (start-point order) to report; empty reports all.
  std::vector<int> branches;
};

// Eigenvalues and transported eigenvectors along a contour.
//
// Branches are numbered by ascending (real, imag) eigenvalue at the start
// point. Vectors are carried by biorthogonal transport: at each accepted step
// the new pair is rescaled by c (right) and 1/conj(c) (left) with
// c^2 = <l_new|r_prev> / <l_prev|r_new>, the sign picked so that
// Re <r_prev|r_new> > 0. For complex-symmetric families this keeps r^T r fixed,
// so the transported vectors are the analytic continuation of the start frame.
struct BranchTrajectory
{
  std::vector<Complex> lambdas;
  // values[s][b], right[s].col(b), left[s].col(b).
  std::vector<std::vector<Complex>> values;
  std::vector<CMatrix> right;
  std::vector<CMatrix> left;
  // matched[s] describes the step from sample s to s + 1.
  std::vector<bool> matched;
  // Sample index of every contour vertex.
  std::vector<std::size_t> vertex_samples;
  // Start-order indices of the reported branches.
  std::vector<int> branches;

  std::size_t samples() const { return lambdas.size(); }
  int num_branches() const { return static_cast<int>(branches.size()); }
};

// Throws EpTooClose when bisection collapses below the minimum step, when an
// eigensolve is near-defective, or when a known EP lies within the exclusion radius.
BranchTrajectory trace(const MatrixFamily &f, const Contour &c, const TraceOptions &opts = {});

struct MonodromyResult
{
  // End branch i continues into start branch permutation[i].
  std::vector<int> permutation;
  // right_end[i] = factors[i] * right_start[permutation[i]].
  std::vector<Complex> factors;
  // factors[i] / |factors[i]|.
  std::vector<Complex> phases;
  int loop_winding = 0;
  std::vector<ExceptionalPoint> enclosed_eps;
  // Winding number of the loop about each enclosed EP.
  std::vector<int> enclosed_windings;
};

// Per-revolution energy closure for a closed contour.
struct ClosureReport
{
  // max_b |E_b(end of revolution r) - E_b(start)| for r = 1 .. |turns|.
  std::vector<double> mismatch;
  double tolerance = 0.0;
  int closure_after_revolutions = 0;
};

MonodromyResult monodromy_from_trajectory(const BranchTrajectory &t);

// Fills enclosed_eps, enclosed_windings and loop_winding for a closed loop.
void attach_enclosures(MonodromyResult &r, const Contour &loop,
                       const std::vector<ExceptionalPoint> &eps);

// Traces the closed loop and extracts permutation and phases. `eps` supplies the
// exceptional points to test for enclosure; when absent they are located.
MonodromyResult monodromy(const MatrixFamily &f, const Contour &loop,
                          const TraceOptions &opts = {},
                          std::optional<std::vector<ExceptionalPoint>> eps = std::nullopt);

// M[permutation[i], i] = phases[i].
CMatrix monodromy_matrix(const MonodromyResult &r);

// Cycle order of the permutation.
int permutation_order(const std::vector<int> &perm);

ClosureReport energy_closure(const BranchTrajectory &t, const Contour &c,
                             double relative_tolerance = 1e-8);

struct SheetComparison
{
  // overlap(i, j) = <left_below_i | right_above_j> at the common endpoint.
  CMatrix overlap;
  // Above branch j corresponds to below branch permutation[j].
  std::vector<int> permutation;
  std::vector<Complex> factors;
  std::vector<Complex> phases;
  bool exchanged = false;
  // False when the overlap is not a thresholded permutation.
  bool resolved = true;
  // Two-level families only: tan(theta) = r[1] / r[0] of branch 0 at the endpoint.
  std::optional<Complex> tan_theta_below;
  std::optional<Complex> tan_theta_above;
};

// Magnitude separating a structural overlap entry from numerical noise.
inline constexpr double kOverlapThreshold = 0.7;

SheetComparison sheet_comparison(const MatrixFamily &f, const Contour &below,
                                 const Contour &above, const TraceOptions &opts = {});

}  // namespace epx
