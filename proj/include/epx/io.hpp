#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "epx/locator.hpp"
#include "epx/model.hpp"
#include "epx/tracer.hpp"

namespace epx::io
{

using nlohmann::json;

// Full double precision, 17 significant digits.
std::string format_double(double v);

json complex_to_json(Complex z);
Complex complex_from_json(const json &j);

// A family file holds either explicit matrices or two-level parameters.
using FamilySource = std::variant<MatrixFamily, TwoLevelParams>;

FamilySource family_source_from_json(const json &j);
MatrixFamily family_from_json(const json &j);
json family_to_json(const MatrixFamily &f);
json two_level_to_json(const TwoLevelParams &p);

Contour contour_from_json(const json &j);

json eps_to_json(const std::vector<ExceptionalPoint> &eps);

json matrix_to_json(const CMatrix &m);

json monodromy_to_json(const MonodromyResult &r);

// Columns: step, re_lambda, im_lambda, branch, re_E, im_E, then Re/Im of every
// right-vector component. One row per (sample, branch).
void write_trajectory_csv(std::ostream &os, const BranchTrajectory &t);

json read_json_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace epx::io
