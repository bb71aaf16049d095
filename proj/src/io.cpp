#include "epx/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/core.h>

namespace epx::io
{

namespace
{

CMatrix matrix_from_json(const json &rows, int dim, const char *name)
{
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
  {
    throw std::invalid_argument(fmt::format("family file: '{}' must have {} rows", name, dim));
  }
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
  {
    const json &row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
    {
      throw std::invalid_argument(
          fmt::format("family file: row {} of '{}' must have {} entries", i, name, dim));
    }
    for (int j = 0; j < dim; ++j)
    {
      m(i, j) = complex_from_json(row[j]);
    }
  }
  return m;
}

}  // namespace

std::string format_double(double v)
{
  return fmt::format("{:.17g}", v);
}

json complex_to_json(Complex z)
{
  return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json &j)
{
  if (j.is_number())
  {
    return {j.get<double>(), 0.0};
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
  {
    throw std::invalid_argument("expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

FamilySource family_source_from_json(const json &j)
{
  if (j.contains("two_level"))
  {
    const json &t = j.at("two_level");
    TwoLevelParams p{t.at("eps1").get<double>(), t.at("eps2").get<double>(),
                     t.at("om1").get<double>(), t.at("om2").get<double>(),
                     t.at("phi").get<double>()};
    p.validate();
    return p;
  }
  const int dim = j.at("dim").get<int>();
  if (dim < 2)
  {
    throw std::invalid_argument("family file: dim must be at least 2");
  }
  return MatrixFamily(matrix_from_json(j.at("h0"), dim, "h0"),
                      matrix_from_json(j.at("h1"), dim, "h1"));
}

MatrixFamily family_from_json(const json &j)
{
  FamilySource src = family_source_from_json(j);
  if (auto *p = std::get_if<TwoLevelParams>(&src))
  {
    return two_level_family(*p);
  }
  return std::get<MatrixFamily>(std::move(src));
}

json matrix_to_json(const CMatrix &m)
{
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
  {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
    {
      row.push_back(complex_to_json(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json family_to_json(const MatrixFamily &f)
{
  return {{"dim", f.dim()}, {"h0", matrix_to_json(f.h0())}, {"h1", matrix_to_json(f.h1())}};
}

json two_level_to_json(const TwoLevelParams &p)
{
  return {{"two_level",
           {{"eps1", p.eps1}, {"eps2", p.eps2}, {"om1", p.om1}, {"om2", p.om2}, {"phi", p.phi}}}};
}

Contour contour_from_json(const json &j)
{
  const std::string kind = j.at("kind").get<std::string>();
  const int samples = j.value("samples", 64);
  if (kind == "circle")
  {
    return circle_contour(complex_from_json(j.at("center")), j.at("radius").get<double>(),
                          samples, j.value("turns", 1));
  }
  if (kind == "detour")
  {
    return detour_path(j.at("start").get<double>(), j.at("end").get<double>(),
                       complex_from_json(j.at("bulge")), samples);
  }
  if (kind == "segment")
  {
    return segment_contour(complex_from_json(j.at("start")), complex_from_json(j.at("end")),
                           samples);
  }
  if (kind == "explicit")
  {
    std::vector<Complex> pts;
    for (const json &p : j.at("points"))
    {
      pts.push_back(complex_from_json(p));
    }
    std::optional<int> hint;
    if (j.contains("turns"))
    {
      hint = j.at("turns").get<int>();
    }
    return Contour(std::move(pts), j.value("closed", false), hint);
  }
  throw std::invalid_argument("contour file: unknown kind '" + kind + "'");
}

json eps_to_json(const std::vector<ExceptionalPoint> &eps)
{
  json out = json::array();
  for (const auto &ep : eps)
  {
    out.push_back({{"lambda_c", complex_to_json(ep.lambda_c)},
                   {"levels", {ep.level_pair.first, ep.level_pair.second}},
                   {"residual", ep.residual},
                   {"multiplicity", ep.multiplicity},
                   {"gap_at_offset", ep.gap_at_offset},
                   {"refined", ep.refined},
                   {"ambiguous", ep.ambiguous}});
  }
  return out;
}

json monodromy_to_json(const MonodromyResult &r)
{
  json phases = json::array();
  json factors = json::array();
  for (std::size_t i = 0; i < r.phases.size(); ++i)
  {
    phases.push_back(complex_to_json(r.phases[i]));
    factors.push_back(complex_to_json(r.factors[i]));
  }
  json windings = json::array();
  for (int w : r.enclosed_windings)
  {
    windings.push_back(w);
  }
  return {{"permutation", r.permutation},
          {"phases", phases},
          {"factors", factors},
          {"loop_winding", r.loop_winding},
          {"enclosed_eps", eps_to_json(r.enclosed_eps)},
          {"enclosed_windings", windings},
          {"matrix", matrix_to_json(monodromy_matrix(r))}};
}

void write_trajectory_csv(std::ostream &os, const BranchTrajectory &t)
{
  const Eigen::Index dim = t.right.empty() ? 0 : t.right.front().rows();
  os << "step,re_lambda,im_lambda,branch,re_E,im_E";
  for (Eigen::Index c = 0; c < dim; ++c)
  {
    os << ",re_v" << c << ",im_v" << c;
  }
  os << '\n';
  for (std::size_t s = 0; s < t.samples(); ++s)
  {
    for (int b = 0; b < t.num_branches(); ++b)
    {
      const Complex e = t.values[s][b];
      os << s << ',' << format_double(t.lambdas[s].real()) << ','
         << format_double(t.lambdas[s].imag()) << ',' << t.branches[b] << ','
         << format_double(e.real()) << ',' << format_double(e.imag());
      for (Eigen::Index c = 0; c < dim; ++c)
      {
        const Complex v = t.right[s](c, b);
        os << ',' << format_double(v.real()) << ',' << format_double(v.imag());
      }
      os << '\n';
    }
  }
}

json read_json_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::invalid_argument("cannot open '" + path + "'");
  }
  try
  {
    return json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << text;
}

}  // namespace epx::io
