#include "epx/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <boost/math/tools/minima.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include "epx/analytic2.hpp"
#include "epx/errors.hpp"
#include "epx/io.hpp"
#include "epx/kernels.hpp"
#include "epx/locator.hpp"
#include "epx/spectral.hpp"
#include "epx/tracer.hpp"

namespace epx::cli
{

namespace
{

using io::json;

struct RunConfig
{
  std::string family_file;
  std::string two_level;
  int random_symmetric = 0;
  std::uint64_t seed = 0;
  // Empty: print summaries only, write no files.
  std::string out_dir;

  std::string contour_file;
  std::string circle;
  std::string detour;
  std::string segment;
  int path_samples = 128;

  double from = -2.0;
  double to = 2.0;
  int samples = 400;
  std::string phi_sweep;

  double tol_residual = 1e-10;
  double tol_cluster = 1e-6;
  double tol_monodromy = 1e-6;
  double tol_closure = 1e-8;
  double tol_defective = kDefectiveThreshold;
  double gap_guard = 0.2;
  double ep_exclusion = 1e-3;
};

class UsageError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

int log_level()
{
  const char *v = std::getenv("EPX_LOG");
  if (v == nullptr)
  {
    return 0;
  }
  try
  {
    return std::stoi(v);
  }
  catch (const std::exception &)
  {
    return 1;
  }
}

std::vector<double> parse_list(const std::string &text, std::size_t expected, const char *flag)
{
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    try
    {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size())
      {
        throw std::invalid_argument(item);
      }
    }
    catch (const std::exception &)
    {
      throw UsageError(fmt::format("{}: '{}' is not a number", flag, item));
    }
  }
  if (vals.size() != expected)
  {
    throw UsageError(fmt::format("{} expects {} comma-separated values, got {}", flag, expected,
                                 vals.size()));
  }
  return vals;
}

struct Family
{
  MatrixFamily family;
  std::optional<TwoLevelParams> two_level;
};

MatrixFamily random_symmetric_family(int n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix h0 = CMatrix::Zero(n, n);
  CMatrix h1 = CMatrix::Zero(n, n);
  for (CMatrix *m : {&h0, &h1})
  {
    for (int i = 0; i < n; ++i)
    {
      for (int j = i; j < n; ++j)
      {
        const double v = normal(rng);
        (*m)(i, j) = v;
        (*m)(j, i) = v;
      }
    }
  }
  return MatrixFamily(std::move(h0), std::move(h1));
}

Family load_family(const RunConfig &cfg)
{
  const int sources = !cfg.family_file.empty() + !cfg.two_level.empty() + (cfg.random_symmetric > 0);
  if (sources != 1)
  {
    throw UsageError("exactly one of --family, --two-level, --random-symmetric is required");
  }
  if (!cfg.two_level.empty())
  {
    const auto v = parse_list(cfg.two_level, 5, "--two-level");
    const TwoLevelParams p{v[0], v[1], v[2], v[3], v[4]};
    return {two_level_family(p), p};
  }
  if (cfg.random_symmetric > 0)
  {
    if (cfg.random_symmetric < 2)
    {
      throw UsageError("--random-symmetric needs a dimension of at least 2");
    }
    return {random_symmetric_family(cfg.random_symmetric, cfg.seed), std::nullopt};
  }
  io::FamilySource src = io::family_source_from_json(io::read_json_file(cfg.family_file));
  if (auto *p = std::get_if<TwoLevelParams>(&src))
  {
    return {two_level_family(*p), *p};
  }
  return {std::get<MatrixFamily>(std::move(src)), std::nullopt};
}

std::optional<Contour> load_contour(const RunConfig &cfg)
{
  const int sources = !cfg.contour_file.empty() + !cfg.circle.empty() + !cfg.detour.empty() +
                      !cfg.segment.empty();
  if (sources == 0)
  {
    return std::nullopt;
  }
  if (sources > 1)
  {
    throw UsageError("give at most one of --contour, --circle, --detour, --segment");
  }
  if (!cfg.contour_file.empty())
  {
    return io::contour_from_json(io::read_json_file(cfg.contour_file));
  }
  if (!cfg.circle.empty())
  {
    const auto v = parse_list(cfg.circle, 5, "--circle");
    return circle_contour({v[0], v[1]}, v[2], static_cast<int>(v[3]), static_cast<int>(v[4]));
  }
  if (!cfg.detour.empty())
  {
    const auto v = parse_list(cfg.detour, 4, "--detour");
    return detour_path(v[0], v[1], {v[2], v[3]}, cfg.path_samples);
  }
  const auto v = parse_list(cfg.segment, 4, "--segment");
  return segment_contour({v[0], v[1]}, {v[2], v[3]}, cfg.path_samples);
}

class Session
{
public:
  Session(const RunConfig &cfg, std::ostream &out, std::ostream &err)
    : cfg_(cfg), out_(out), err_(err), level_(log_level())
  {
  }

  void log(int level, const std::string &msg) const
  {
    if (level <= level_)
    {
      err_ << "[epx] " << msg << '\n';
    }
  }

  std::filesystem::path path(const std::string &name) const
  {
    std::filesystem::create_directories(cfg_.out_dir);
    return std::filesystem::path(cfg_.out_dir) / name;
  }

  void write(const std::string &name, const std::string &text) const
  {
    if (cfg_.out_dir.empty())
    {
      log(2, "no --out directory; skipping " + name);
      return;
    }
    const auto p = path(name);
    io::write_text_file(p.string(), text);
    log(1, "wrote " + p.string());
  }

  void write_family(const Family &fam) const
  {
    const json j = fam.two_level ? io::two_level_to_json(*fam.two_level)
                                 : io::family_to_json(fam.family);
    write("family.json", j.dump(2) + "\n");
  }

  LocatorOptions locator_options() const
  {
    LocatorOptions o;
    o.newton_tolerance = cfg_.tol_residual;
    o.cluster_tolerance = cfg_.tol_cluster;
    return o;
  }

  TraceOptions trace_options(const std::vector<ExceptionalPoint> &eps) const
  {
    TraceOptions o;
    o.gap_guard = cfg_.gap_guard;
    o.defective_threshold = cfg_.tol_defective;
    o.ep_exclusion = cfg_.ep_exclusion;
    for (const auto &ep : eps)
    {
      o.known_eps.push_back(ep.lambda_c);
    }
    return o;
  }

  const RunConfig &cfg() const { return cfg_; }
  std::ostream &out() const { return out_; }
  std::ostream &err() const { return err_; }

private:
  const RunConfig &cfg_;
  std::ostream &out_;
  std::ostream &err_;
  int level_;
};

int cmd_scan(const Session &s)
{
  const RunConfig &cfg = s.cfg();
  if (cfg.samples < 2)
  {
    throw UsageError("scan needs at least 2 samples");
  }
  if (!(cfg.from < cfg.to))
  {
    throw UsageError("scan needs --from < --to");
  }
  const Family fam = load_family(cfg);
  s.write_family(fam);

  std::vector<Complex> lambdas(cfg.samples);
  for (int k = 0; k < cfg.samples; ++k)
  {
    lambdas[k] = cfg.from + (cfg.to - cfg.from) * k / (cfg.samples - 1);
  }
  lambdas.back() = cfg.to;

  std::vector<std::vector<Complex>> spectra;
  if (fam.two_level)
  {
    for (const Complex l : lambdas)
    {
      const auto [e1, e2] = analytic2::eigenvalues_closed(*fam.two_level, l);
      spectra.push_back({e1, e2});
    }
  }
  else
  {
    spectra = kernels::sample_spectra(fam.family, lambdas, kernels::Exec::parallel);
  }

  bool complex_spectrum = false;
  for (const auto &row : spectra)
  {
    for (const Complex e : row)
    {
      complex_spectrum = complex_spectrum || std::abs(e.imag()) > 1e-10 * (1.0 + std::abs(e));
    }
  }
  if (complex_spectrum)
  {
    s.err() << "warning: spectrum is not real on the scanned range; writing Re/Im columns\n";
  }

  const int n = fam.family.dim();
  std::ostringstream csv;
  csv << "lambda";
  for (int b = 1; b <= n; ++b)
  {
    if (complex_spectrum)
    {
      csv << ",re_E" << b << ",im_E" << b;
    }
    else
    {
      csv << ",E" << b;
    }
  }
  csv << '\n';
  for (std::size_t k = 0; k < lambdas.size(); ++k)
  {
    csv << io::format_double(lambdas[k].real());
    for (const Complex e : spectra[k])
    {
      csv << ',' << io::format_double(e.real());
      if (complex_spectrum)
      {
        csv << ',' << io::format_double(e.imag());
      }
    }
    csv << '\n';
  }
  s.write("scan.csv", csv.str());

  // Coarse minimum of the smallest level spacing, then Brent refinement.
  const auto gap_at = [&](double l) -> double
  {
    if (fam.two_level)
    {
      return 2.0 * std::abs(std::sqrt(analytic2::radicand(*fam.two_level, l)));
    }
    return kernels::min_gap_of(eigenvalues(evaluate(fam.family, l)));
  };
  std::size_t kmin = 0;
  double coarse = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < spectra.size(); ++k)
  {
    const double g = kernels::min_gap_of(spectra[k]);
    if (g < coarse)
    {
      coarse = g;
      kmin = k;
    }
  }
  const double lo = lambdas[kmin == 0 ? 0 : kmin - 1].real();
  const double hi = lambdas[std::min(kmin + 1, lambdas.size() - 1)].real();
  auto [lmin, gmin] = boost::math::tools::brent_find_minima(gap_at, lo, hi, 40);
  if (coarse < gmin)
  {
    gmin = coarse;
    lmin = lambdas[kmin].real();
  }

  json summary = {{"samples", cfg.samples},
                  {"from", cfg.from},
                  {"to", cfg.to},
                  {"complex_spectrum", complex_spectrum},
                  {"min_gap", gmin},
                  {"lambda_at_min", lmin}};
  if (fam.two_level)
  {
    const auto ref = analytic2::min_real_gap(*fam.two_level);
    summary["closed_form_min_gap"] = ref.gap;
    summary["closed_form_lambda_at_min"] = ref.lambda;
  }
  s.write("scan_summary.json", summary.dump(2) + "\n");
  s.out() << summary.dump(2) << '\n';
  return kOk;
}

int cmd_locate(const Session &s)
{
  const Family fam = load_family(s.cfg());
  s.write_family(fam);
  const auto eps = locate_eps(fam.family, s.locator_options());
  s.log(1, fmt::format("located {} exceptional points ({} with multiplicity)", eps.size(),
                       count_with_multiplicity(eps)));
  const json list = io::eps_to_json(eps);
  s.write("eps.json", list.dump(2) + "\n");

  json summary = {{"eps", list}, {"count_with_multiplicity", count_with_multiplicity(eps)}};
  if (fam.two_level)
  {
    const auto closed = analytic2::exceptional_points_closed(*fam.two_level);
    double dev = 0.0;
    for (const Complex ref : {closed.plus, closed.minus})
    {
      double best = std::numeric_limits<double>::infinity();
      for (const auto &ep : eps)
      {
        best = std::min(best, std::abs(ep.lambda_c - ref));
      }
      dev = std::max(dev, best);
    }
    summary["closed_form"] = {io::complex_to_json(closed.plus), io::complex_to_json(closed.minus)};
    summary["max_deviation"] = dev;
    s.write("closed_form.json", json{{"closed_form", summary["closed_form"]},
                                     {"max_deviation", dev}}
                                    .dump(2) + "\n");
  }
  s.out() << summary.dump(2) << '\n';
  return kOk;
}

double max_entry_distance(const CMatrix &a, const CMatrix &b)
{
  return (a - b).cwiseAbs().maxCoeff();
}

std::string nearest_ep_note(const std::vector<ExceptionalPoint> &eps, const Contour &c)
{
  if (eps.empty())
  {
    return "";
  }
  const auto it = std::min_element(eps.begin(), eps.end(),
                                   [&](const auto &a, const auto &b)
                                   {
                                     return distance_to_polyline(c.points(), a.lambda_c) <
                                            distance_to_polyline(c.points(), b.lambda_c);
                                   });
  return fmt::format(" (nearest EP: lambda_c = {:.17g}{:+.17g}i)", it->lambda_c.real(),
                     it->lambda_c.imag());
}

json loop_report(const Session &s, const MonodromyResult &r, const ClosureReport *closure)
{
  const CMatrix m = monodromy_matrix(r);
  const CMatrix m2 = m * m;
  const CMatrix m4 = m2 * m2;
  const auto n = m.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  json j = io::monodromy_to_json(r);
  j["M2"] = io::matrix_to_json(m2);
  j["M4"] = io::matrix_to_json(m4);
  j["m_minus_identity"] = max_entry_distance(m, id);
  j["m2_plus_identity"] = max_entry_distance(m2, -id);
  j["m4_minus_identity"] = max_entry_distance(m4, id);
  j["tolerance"] = s.cfg().tol_monodromy;
  j["m4_is_identity"] = max_entry_distance(m4, id) <= s.cfg().tol_monodromy;
  if (closure != nullptr)
  {
    j["closure_after_revolutions"] = closure->closure_after_revolutions;
    j["closure_mismatch"] = closure->mismatch;
    j["closure_tolerance"] = closure->tolerance;
  }
  return j;
}

int run_loop(const Session &s, bool write_trajectory)
{
  const Family fam = load_family(s.cfg());
  const auto contour = load_contour(s.cfg());
  if (!contour)
  {
    throw UsageError("a contour is required (--contour, --circle, --detour or --segment)");
  }
  if (!write_trajectory && !contour->closed())
  {
    throw UsageError("monodromy needs a closed contour");
  }
  s.write_family(fam);
  const auto eps = locate_eps(fam.family, s.locator_options());
  const TraceOptions topts = s.trace_options(eps);

  try
  {
    const BranchTrajectory t = trace(fam.family, *contour, topts);
    s.log(1, fmt::format("traced {} samples", t.samples()));
    if (write_trajectory)
    {
      std::ostringstream csv;
      io::write_trajectory_csv(csv, t);
      s.write("trajectory.csv", csv.str());
    }
    if (!contour->closed())
    {
      s.out() << json{{"samples", t.samples()}, {"closed", false}}.dump(2) << '\n';
      return kOk;
    }
    MonodromyResult r = monodromy_from_trajectory(t);
    attach_enclosures(r, *contour, eps);
    const ClosureReport closure = energy_closure(t, *contour, s.cfg().tol_closure);
    const json report = loop_report(s, r, &closure);
    s.write("monodromy.json", report.dump(2) + "\n");
    s.out() << report.dump(2) << '\n';
    return kOk;
  }
  catch (const EpTooClose &e)
  {
    throw EpTooClose(std::string(e.what()) + nearest_ep_note(eps, *contour));
  }
}

int cmd_absorption(const Session &s)
{
  const RunConfig &cfg = s.cfg();
  if (cfg.samples < 2)
  {
    throw UsageError("absorption needs at least 2 samples");
  }
  if (!(cfg.from < cfg.to))
  {
    throw UsageError("absorption needs --from < --to (the real G range)");
  }
  const Family fam = load_family(cfg);
  if (!fam.two_level)
  {
    throw UsageError("absorption works on two-level families only");
  }
  s.write_family(fam);
  const TwoLevelParams &p = *fam.two_level;
  const Complex minus_i(0.0, -1.0);

  const std::size_t n = static_cast<std::size_t>(cfg.samples);
  std::vector<double> gs(n);
  std::vector<std::pair<Complex, Complex>> levels(n);
  std::vector<double> conditions(n);
  kernels::for_each_index(n, kernels::Exec::parallel,
                          [&](std::size_t k)
                          {
                            const double g = cfg.from + (cfg.to - cfg.from) * k / (n - 1);
                            gs[k] = g;
                            levels[k] = analytic2::eigenvalues_closed(p, minus_i * g);
                            conditions[k] = defectivity(eigensystem(evaluate(fam.family, minus_i * g)))
                                                .max_condition;
                          });

  std::ostringstream csv;
  csv << "G,re_E1,im_E1,re_E2,im_E2,condition\n";
  for (std::size_t k = 0; k < n; ++k)
  {
    const auto [e1, e2] = levels[k];
    csv << io::format_double(gs[k]) << ',' << io::format_double(e1.real()) << ','
        << io::format_double(e1.imag()) << ',' << io::format_double(e2.real()) << ','
        << io::format_double(e2.imag()) << ',' << io::format_double(conditions[k]) << '\n';
  }
  s.write("absorption.csv", csv.str());

  const auto relation = [](Complex gc)
  {
    const double tol = 1e-12 * std::max(1.0, std::abs(gc));
    if (std::abs(gc.imag()) <= tol)
    {
      return "through";
    }
    return gc.imag() > 0.0 ? "below" : "above";
  };
  const auto gc = analytic2::absorption_ep(p);
  json gcs = json::array();
  for (const Complex g : {gc.plus, gc.minus})
  {
    const double cond =
        defectivity(eigensystem(evaluate(fam.family, minus_i * g))).max_condition;
    gcs.push_back({{"G_c", io::complex_to_json(g)},
                   {"real_axis_passes", relation(g)},
                   {"condition_at_G_c", cond}});
  }

  const auto last = levels.back();
  const double w1 = std::abs(last.first.imag());
  const double w2 = std::abs(last.second.imag());
  json summary = {{"G_c", gcs},
                  {"width_ratio_at_largest_G",
                   std::max(w1, w2) / std::max(std::min(w1, w2), std::numeric_limits<double>::min())}};

  if (!cfg.phi_sweep.empty())
  {
    const auto v = parse_list(cfg.phi_sweep, 3, "--phi-sweep");
    const int count = static_cast<int>(v[2]);
    if (count < 2)
    {
      throw UsageError("--phi-sweep needs at least 2 angles");
    }
    json sweep = json::array();
    std::optional<int> first_sign;
    bool flips = false;
    for (int k = 0; k < count; ++k)
    {
      TwoLevelParams q = p;
      q.phi = v[0] + (v[1] - v[0]) * k / (count - 1);
      const auto g = analytic2::absorption_ep(q);
      const double im = g.plus.imag();
      const int sign = (im > 0.0) - (im < 0.0);
      if (sign != 0)
      {
        if (first_sign && *first_sign != sign)
        {
          flips = true;
        }
        if (!first_sign)
        {
          first_sign = sign;
        }
      }
      sweep.push_back({{"phi", q.phi},
                       {"G_c", {io::complex_to_json(g.plus), io::complex_to_json(g.minus)}},
                       {"im_sign", sign},
                       {"real_axis_passes", relation(g.plus)}});
    }
    summary["phi_sweep"] = sweep;
    summary["im_sign_flips"] = flips;
  }
  s.write("absorption.json", summary.dump(2) + "\n");
  s.out() << summary.dump(2) << '\n';
  return kOk;
}

void add_family_options(CLI::App *cmd, RunConfig &cfg)
{
  cmd->add_option("--family", cfg.family_file, "JSON family file");
  cmd->add_option("--two-level", cfg.two_level, "two-level parameters eps1,eps2,om1,om2,phi");
  cmd->add_option("--random-symmetric", cfg.random_symmetric,
                  "random real-symmetric family of this dimension (uses --seed)");
  cmd->add_option("--seed", cfg.seed, "seed for randomized families");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--tol-residual", cfg.tol_residual, "Newton residual tolerance (relative)");
  cmd->add_option("--tol-cluster", cfg.tol_cluster, "root clustering tolerance (relative)");
  cmd->add_option("--tol-defective", cfg.tol_defective, "near-defective condition threshold");
}

void add_contour_options(CLI::App *cmd, RunConfig &cfg)
{
  cmd->add_option("--contour", cfg.contour_file, "JSON contour file");
  cmd->add_option("--circle", cfg.circle, "circle cx,cy,r,samples,turns");
  cmd->add_option("--detour", cfg.detour, "detour a,b,bx,by");
  cmd->add_option("--segment", cfg.segment, "segment ax,ay,bx,by");
  cmd->add_option("--path-samples", cfg.path_samples, "samples for --detour/--segment");
  cmd->add_option("--tol-monodromy", cfg.tol_monodromy, "monodromy matrix tolerance");
  cmd->add_option("--tol-closure", cfg.tol_closure, "energy closure tolerance (relative)");
  cmd->add_option("--gap-guard", cfg.gap_guard, "step acceptance factor");
  cmd->add_option("--ep-exclusion", cfg.ep_exclusion, "EP exclusion radius (relative)");
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  RunConfig cfg;
  CLI::App app{"Exceptional points of H0 + lambda H1: location, continuation and monodromy",
               "epx"};
  app.require_subcommand(1);

  auto *scan = app.add_subcommand("scan", "eigenvalues over a real lambda range");
  add_family_options(scan, cfg);
  scan->add_option("--from", cfg.from, "range start");
  scan->add_option("--to", cfg.to, "range end");
  scan->add_option("--samples", cfg.samples, "number of samples");

  auto *locate = app.add_subcommand("locate", "locate all exceptional points");
  add_family_options(locate, cfg);

  auto *tracecmd = app.add_subcommand("trace", "continue the eigensystem along a contour");
  add_family_options(tracecmd, cfg);
  add_contour_options(tracecmd, cfg);

  auto *mono = app.add_subcommand("monodromy", "permutation and phases of a closed loop");
  add_family_options(mono, cfg);
  add_contour_options(mono, cfg);

  auto *absorb = app.add_subcommand("absorption", "spectrum of H(-iG) and its EPs in G");
  add_family_options(absorb, cfg);
  absorb->add_option("--from", cfg.from, "G range start");
  absorb->add_option("--to", cfg.to, "G range end");
  absorb->add_option("--samples", cfg.samples, "number of samples");
  absorb->add_option("--phi-sweep", cfg.phi_sweep, "phi sweep start,end,count");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try
  {
    app.parse(reversed);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e, out, err);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e, out, err);
    return kUsage;
  }

  const Session session(cfg, out, err);
  try
  {
    if (scan->parsed())
    {
      return cmd_scan(session);
    }
    if (locate->parsed())
    {
      return cmd_locate(session);
    }
    if (tracecmd->parsed())
    {
      return run_loop(session, true);
    }
    if (mono->parsed())
    {
      return run_loop(session, false);
    }
    return cmd_absorption(session);
  }
  catch (const DegenerateFamily &e)
  {
    err << "error: degenerate family: " << e.what() << '\n';
    return kDegenerateFamily;
  }
  catch (const EpTooClose &e)
  {
    err << "error: " << e.what() << '\n';
    return kEpProximity;
  }
  catch (const NearDefective &e)
  {
    err << "error: " << e.what() << '\n';
    return kEpProximity;
  }
  catch (const NumericalFailure &e)
  {
    err << "error: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  catch (const std::invalid_argument &e)
  {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  catch (const io::json::exception &e)
  {
    err << "error: malformed input file: " << e.what() << '\n';
    return kUsage;
  }
  catch (const std::exception &e)
  {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace epx::cli
