#include <doctest.h>

#include <sstream>

#include "epx/io.hpp"
#include "epx/tracer.hpp"
#include "support.hpp"

using namespace epx;
using nlohmann::json;

TEST_CASE("numbers keep 17 significant digits")
{
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
  const Complex z(0.1, -2.5e-300);
  CHECK(io::complex_from_json(io::complex_to_json(z)) == z);
  CHECK_THROWS(io::complex_from_json(json::array({1.0})));
}

TEST_CASE("family round trip")
{
  std::mt19937_64 rng(4);
  const MatrixFamily f(test::random_complex(3, rng), test::random_complex(3, rng));
  const json j = io::family_to_json(f);
  CHECK(j["dim"] == 3);
  CHECK(io::family_from_json(json::parse(j.dump())) == f);

  const json tl = io::two_level_to_json(test::reference());
  CHECK(io::family_from_json(tl) == two_level_family(test::reference()));
  CHECK(std::holds_alternative<TwoLevelParams>(io::family_source_from_json(tl)));

  CHECK_THROWS(io::family_from_json(json{{"dim", 2}, {"h0", json::array()}}));
}

TEST_CASE("contour specifications")
{
  const Contour c = io::contour_from_json(
      json{{"kind", "circle"}, {"center", {0.3, 0.1}}, {"radius", 0.05}, {"samples", 32},
           {"turns", 2}});
  CHECK(c.closed());
  CHECK(c.size() == 65);

  const Contour d = io::contour_from_json(
      json{{"kind", "detour"}, {"start", 0.0}, {"end", 2.0}, {"bulge", {1.0, 1.0}},
           {"samples", 33}});
  CHECK_FALSE(d.closed());
  CHECK(d.size() == 33);

  const Contour s = io::contour_from_json(
      json{{"kind", "segment"}, {"start", {0.0, 0.0}}, {"end", {1.0, 0.0}}, {"samples", 5}});
  CHECK(s.size() == 5);

  const Contour e = io::contour_from_json(
      json{{"kind", "explicit"},
           {"points", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}}},
           {"closed", true}});
  CHECK(e.closed());

  CHECK_THROWS(io::contour_from_json(json{{"kind", "spiral"}}));
}

TEST_CASE("EP list layout")
{
  ExceptionalPoint ep;
  ep.lambda_c = Complex(0.25, -0.5);
  ep.level_pair = {0, 1};
  ep.residual = 1e-14;
  const json j = io::eps_to_json({ep});
  REQUIRE(j.is_array());
  CHECK(j[0]["lambda_c"][0] == 0.25);
  CHECK(j[0]["lambda_c"][1] == -0.5);
  CHECK(j[0]["levels"] == json::array({0, 1}));
  CHECK(j[0]["multiplicity"] == 1);
  CHECK(j[0].contains("residual"));
}

TEST_CASE("trajectory CSV layout")
{
  const BranchTrajectory t =
      trace(two_level_family(test::reference()), segment_contour(0.0, 0.1, 4));
  std::ostringstream os;
  io::write_trajectory_csv(os, t);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "step,re_lambda,im_lambda,branch,re_E,im_E,re_v0,im_v0,re_v1,im_v1");
  std::string row;
  int rows = 0;
  while (std::getline(is, row))
  {
    CHECK(std::count(row.begin(), row.end(), ',') == 9);
    ++rows;
  }
  CHECK(rows == static_cast<int>(2 * t.samples()));
}
