#include "epx/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <fmt/core.h>

#include "epx/errors.hpp"

namespace epx
{

namespace
{

struct Frame
{
  std::vector<Complex> values;
  CMatrix right;
  CMatrix left;
};

EigenSystem checked_eigensystem(const MatrixFamily &f, Complex lambda, double threshold)
{
  try
  {
    return biorthonormalize(eigensystem(evaluate(f, lambda)), threshold);
  }
  catch (const NearDefective &e)
  {
    throw EpTooClose(fmt::format("EP too close to contour: near-defective eigensystem at "
                                 "lambda = {:.17g}{:+.17g}i ({})",
                                 lambda.real(), lambda.imag(), e.what()));
  }
}

Frame initial_frame(const MatrixFamily &f, Complex lambda, double threshold)
{
  const EigenSystem sys = checked_eigensystem(f, lambda, threshold);
  std::vector<int> order(sys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b)
                   {
                     const Complex va = sys.values[a];
                     const Complex vb = sys.values[b];
                     return va.real() != vb.real() ? va.real() < vb.real()
                                                   : va.imag() < vb.imag();
                   });
  Frame fr;
  const int n = sys.size();
  fr.right.resize(n, n);
  fr.left.resize(n, n);
  for (int k = 0; k < n; ++k)
  {
    fr.values.push_back(sys.values[order[k]]);
    fr.right.col(k) = sys.right.col(order[k]);
    fr.left.col(k) = sys.left.col(order[k]);
  }
  return fr;
}

// Attempts the step prev -> lambda. Returns false (leaving `next` untouched) if
// the nearest-value matching is ambiguous or any branch moves too far.
bool try_step(const MatrixFamily &f, const Frame &prev, Complex lambda,
              const TraceOptions &opts, Frame &next)
{
  const EigenSystem sys = checked_eigensystem(f, lambda, opts.defective_threshold);
  const int n = sys.size();

  std::vector<int> match(n, -1);
  std::vector<bool> taken(n, false);
  for (int k = 0; k < n; ++k)
  {
    double gap = std::numeric_limits<double>::infinity();
    for (int m = 0; m < n; ++m)
    {
      if (m != k)
      {
        gap = std::min(gap, std::abs(prev.values[k] - prev.values[m]));
      }
    }
    int best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
    {
      const double d = std::abs(sys.values[j] - prev.values[k]);
      if (d < dist)
      {
        dist = d;
        best = j;
      }
    }
    if (taken[best] || !(dist < opts.gap_guard * gap))
    {
      return false;
    }
    taken[best] = true;
    match[k] = best;
  }

  next.values.resize(n);
  next.right.resize(n, n);
  next.left.resize(n, n);
  for (int k = 0; k < n; ++k)
  {
    const int j = match[k];
    const auto r = sys.right.col(j);
    const auto l = sys.left.col(j);
    const Complex forward = prev.left.col(k).dot(r);
    const Complex backward = l.dot(prev.right.col(k));
    if (forward == 0.0)
    {
      return false;
    }
    Complex c = std::sqrt(backward / forward);
    if ((c * prev.right.col(k).dot(r)).real() < 0.0)
    {
      c = -c;
    }
    next.values[k] = sys.values[j];
    next.right.col(k) = c * r;
    next.left.col(k) = l / std::conj(c);
  }
  return true;
}

void push_sample(BranchTrajectory &t, Complex lambda, const Frame &fr)
{
  t.lambdas.push_back(lambda);
  t.values.push_back(fr.values);
  t.right.push_back(fr.right);
  t.left.push_back(fr.left);
}

}  // namespace

BranchTrajectory trace(const MatrixFamily &f, const Contour &c, const TraceOptions &opts)
{
  const double scale = c.scale();
  const auto pts = c.points();
  for (const Complex ep : opts.known_eps)
  {
    const double exclusion = opts.ep_exclusion * std::min(scale, 1.0 + std::abs(ep));
    if (distance_to_polyline(pts, ep) < exclusion)
    {
      throw EpTooClose(fmt::format("EP too close to contour: lambda_c = {:.17g}{:+.17g}i lies "
                                   "within {:.3g} of the path",
                                   ep.real(), ep.imag(), exclusion));
    }
  }

  BranchTrajectory t;
  Frame cur = initial_frame(f, pts.front(), opts.defective_threshold);
  push_sample(t, pts.front(), cur);
  t.vertex_samples.push_back(0);

  const double min_step = opts.min_step * scale;
  double step_len = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v + 1 < pts.size(); ++v)
  {
    const Complex a = pts[v];
    const Complex b = pts[v + 1];
    const double len = std::abs(b - a);
    double s = 0.0;
    double h = std::min(1.0, step_len / len);
    while (s < 1.0)
    {
      h = std::min(h, 1.0 - s);
      // Snap a sub-resolution remainder onto the vertex.
      const bool last = s + h >= 1.0 - 1e-12;
      if (!last && h * len < min_step)
      {
        const Complex at = a + (b - a) * s;
        throw EpTooClose(fmt::format("EP too close to contour: step collapsed below {:.3g} "
                                     "near lambda = {:.17g}{:+.17g}i",
                                     min_step, at.real(), at.imag()));
      }
      const Complex lambda = last ? b : a + (b - a) * (s + h);
      Frame next;
      if (!try_step(f, cur, lambda, opts, next))
      {
        h *= 0.5;
        continue;
      }
      t.matched.push_back(true);
      push_sample(t, lambda, next);
      cur = std::move(next);
      step_len = h * len;
      s = last ? 1.0 : s + h;
      h *= 2.0;
    }
    t.vertex_samples.push_back(t.lambdas.size() - 1);
  }

  const int n = f.dim();
  if (opts.branches.empty())
  {
    t.branches.resize(n);
    std::iota(t.branches.begin(), t.branches.end(), 0);
    return t;
  }
  for (int b : opts.branches)
  {
    if (b < 0 || b >= n)
    {
      throw std::invalid_argument("trace: branch index " + std::to_string(b) + " out of range");
    }
  }
  t.branches = opts.branches;
  for (std::size_t s = 0; s < t.samples(); ++s)
  {
    std::vector<Complex> vals;
    CMatrix r(n, t.branches.size());
    CMatrix l(n, t.branches.size());
    for (std::size_t k = 0; k < t.branches.size(); ++k)
    {
      vals.push_back(t.values[s][t.branches[k]]);
      r.col(k) = t.right[s].col(t.branches[k]);
      l.col(k) = t.left[s].col(t.branches[k]);
    }
    t.values[s] = std::move(vals);
    t.right[s] = std::move(r);
    t.left[s] = std::move(l);
  }
  return t;
}

MonodromyResult monodromy_from_trajectory(const BranchTrajectory &t)
{
  const int n = t.num_branches();
  const auto &start = t.values.front();
  const auto &end = t.values.back();
  MonodromyResult r;
  r.permutation.assign(n, -1);
  std::vector<int> owner(n, -1);
  for (int i = 0; i < n; ++i)
  {
    int best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
    {
      const double d = std::abs(end[i] - start[j]);
      if (d < dist)
      {
        dist = d;
        best = j;
      }
    }
    if (owner[best] >= 0)
    {
      throw NumericalFailure(fmt::format("monodromy: end branches {} and {} both match start "
                                         "branch {}; the trace is under-resolved",
                                         owner[best], i, best));
    }
    owner[best] = i;
    r.permutation[i] = best;
  }
  for (int i = 0; i < n; ++i)
  {
    const Complex factor = t.left.front().col(r.permutation[i]).dot(t.right.back().col(i));
    r.factors.push_back(factor);
    r.phases.push_back(factor / std::abs(factor));
  }
  return r;
}

MonodromyResult monodromy(const MatrixFamily &f, const Contour &loop, const TraceOptions &opts,
                          std::optional<std::vector<ExceptionalPoint>> eps)
{
  if (!loop.closed())
  {
    throw std::invalid_argument("monodromy requires a closed contour");
  }
  if (!eps)
  {
    eps = locate_eps(f);
  }
  TraceOptions topts = opts;
  topts.branches.clear();
  if (topts.known_eps.empty())
  {
    for (const auto &ep : *eps)
    {
      topts.known_eps.push_back(ep.lambda_c);
    }
  }
  const BranchTrajectory t = trace(f, loop, topts);
  MonodromyResult r = monodromy_from_trajectory(t);
  attach_enclosures(r, loop, *eps);
  return r;
}

void attach_enclosures(MonodromyResult &r, const Contour &loop,
                       const std::vector<ExceptionalPoint> &eps)
{
  const auto pts = loop.points();
  r.enclosed_eps.clear();
  r.enclosed_windings.clear();
  for (const auto &ep : eps)
  {
    const int w = static_cast<int>(std::lround(winding_number(pts, ep.lambda_c)));
    if (w != 0)
    {
      r.enclosed_eps.push_back(ep);
      r.enclosed_windings.push_back(w);
    }
  }
  if (loop.winding_hint())
  {
    r.loop_winding = *loop.winding_hint();
    return;
  }
  Complex centroid = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
  {
    centroid += pts[k];
  }
  centroid /= static_cast<double>(pts.size() - 1);
  r.loop_winding = static_cast<int>(std::lround(winding_number(pts, centroid)));
}

CMatrix monodromy_matrix(const MonodromyResult &r)
{
  const int n = static_cast<int>(r.permutation.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
  {
    m(r.permutation[i], i) = r.phases[i];
  }
  return m;
}

int permutation_order(const std::vector<int> &perm)
{
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  int order = 1;
  for (int i = 0; i < n; ++i)
  {
    if (seen[i])
    {
      continue;
    }
    int len = 0;
    for (int j = i; !seen[j]; j = perm[j])
    {
      seen[j] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

ClosureReport energy_closure(const BranchTrajectory &t, const Contour &c,
                             double relative_tolerance)
{
  if (!c.closed())
  {
    throw std::invalid_argument("energy closure requires a closed contour");
  }
  const int revs = std::abs(c.winding_hint().value_or(1));
  const std::size_t per = (c.size() - 1) / static_cast<std::size_t>(revs);
  ClosureReport rep;
  rep.tolerance = relative_tolerance * c.scale();
  const auto &start = t.values.front();
  for (int r = 1; r <= revs; ++r)
  {
    const auto &vals = t.values[t.vertex_samples[r * per]];
    double mm = 0.0;
    for (std::size_t b = 0; b < vals.size(); ++b)
    {
      mm = std::max(mm, std::abs(vals[b] - start[b]));
    }
    rep.mismatch.push_back(mm);
    if (rep.closure_after_revolutions == 0 && mm <= rep.tolerance)
    {
      rep.closure_after_revolutions = r;
    }
  }
  if (rep.closure_after_revolutions == 0)
  {
    rep.closure_after_revolutions =
        permutation_order(monodromy_from_trajectory(t).permutation) * revs;
  }
  return rep;
}

SheetComparison sheet_comparison(const MatrixFamily &f, const Contour &below,
                                 const Contour &above, const TraceOptions &opts)
{
  if (below.closed() || above.closed())
  {
    throw std::invalid_argument("sheet comparison expects two open paths");
  }
  if (below.front() != above.front() || below.back() != above.back())
  {
    throw std::invalid_argument("sheet comparison paths must share start and end points");
  }
  TraceOptions topts = opts;
  topts.branches.clear();
  const BranchTrajectory tb = trace(f, below, topts);
  const BranchTrajectory ta = trace(f, above, topts);

  const CMatrix &lb = tb.left.back();
  const CMatrix &ra = ta.right.back();
  SheetComparison out;
  out.overlap = lb.adjoint() * ra;
  const int n = static_cast<int>(out.overlap.cols());
  out.permutation.assign(n, -1);
  for (int j = 0; j < n; ++j)
  {
    int hits = 0;
    for (int i = 0; i < n; ++i)
    {
      if (std::abs(out.overlap(i, j)) > kOverlapThreshold)
      {
        out.permutation[j] = i;
        ++hits;
      }
    }
    if (hits != 1)
    {
      out.resolved = false;
    }
  }
  for (int j = 0; j < n; ++j)
  {
    const int i = out.permutation[j];
    const Complex factor = i >= 0 ? out.overlap(i, j) : Complex(0.0);
    out.factors.push_back(factor);
    out.phases.push_back(i >= 0 ? factor / std::abs(factor) : Complex(0.0));
    if (i != j)
    {
      out.exchanged = true;
    }
  }
  if (f.dim() == 2)
  {
    const auto rb = tb.right.back().col(0);
    const auto rac = ta.right.back().col(0);
    out.tan_theta_below = rb(1) / rb(0);
    out.tan_theta_above = rac(1) / rac(0);
  }
  return out;
}

}  // namespace epx
