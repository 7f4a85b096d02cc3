#pragma once

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nsconic/error.hpp"
#include "nsconic/linalg.hpp"
#include "nsconic/problem.hpp"
#include "nsconic/simple.hpp"
#include "nsconic/solver.hpp"

namespace nsconic {

using Json = nlohmann::json;

/// On-disk problem: standard form in coordinate storage plus the cone list.
/// Triplets are kept exactly as read so a round trip reproduces them.
struct ProblemFile {
  Vector c;
  Vector b;
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  std::vector<Eigen::Index> rows;
  std::vector<Eigen::Index> cols;
  std::vector<double> vals;
  std::vector<ConeSpec> cones;
  std::optional<Vector> x0;

  void validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InputError, msg); };
    if (m < 0 || n < 1) fail("A must have m >= 0 rows and n >= 1 columns");
    if (rows.size() != cols.size() || rows.size() != vals.size()) {
      fail("A.rows, A.cols and A.vals must have equal length");
    }
    if (b.size() != m) fail("b has length " + std::to_string(b.size()) + ", expected A.m");
    if (c.size() != n) fail("c has length " + std::to_string(c.size()) + ", expected A.n");
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (rows[k] < 0 || rows[k] >= m || cols[k] < 0 || cols[k] >= n) {
        fail("A entry " + std::to_string(k) + " is out of range");
      }
      if (!std::isfinite(vals[k])) fail("A entry " + std::to_string(k) + " is not finite");
    }
    if (!b.allFinite() || !c.allFinite()) fail("b or c contains non-finite values");
    if (cones.empty()) fail("cones must not be empty");
    Eigen::Index total = 0;
    for (std::size_t i = 0; i < cones.size(); ++i) {
      if (auto why = cones[i].problem(); !why.empty()) {
        fail("cone " + std::to_string(i) + ": " + why);
      }
      total += cones[i].dim;
    }
    if (total != n) {
      fail("cone dims sum to " + std::to_string(total) + " but A has " + std::to_string(n) +
           " columns");
    }
    if (x0 && (x0->size() != n || !x0->allFinite())) fail("x0 must be a finite array of length n");
  }

  ProblemData to_problem() const {
    validate();
    std::vector<Triplet> entries;
    entries.reserve(vals.size());
    for (std::size_t k = 0; k < vals.size(); ++k) entries.push_back({rows[k], cols[k], vals[k]});
    return {SparseMatrix(m, n, entries), b, c};
  }

  static ProblemFile from_problem(const ProblemData& p, std::vector<ConeSpec> cones,
                                  std::optional<Vector> x0 = std::nullopt) {
    ProblemFile f;
    f.c = p.c;
    f.b = p.b;
    f.m = p.m();
    f.n = p.n();
    for (const auto& t : p.A.triplets()) {
      f.rows.push_back(t.row);
      f.cols.push_back(t.col);
      f.vals.push_back(t.value);
    }
    f.cones = std::move(cones);
    f.x0 = std::move(x0);
    return f;
  }
};

namespace detail {

[[noreturn]] inline void input_error(const std::string& msg) {
  throw Error(ErrorKind::InputError, msg);
}

inline void reject_unknown(const Json& obj, std::initializer_list<std::string_view> allowed,
                           const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) input_error("unknown field \"" + item.key() + "\" in " + where);
  }
}

inline const Json& require(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) input_error("missing field \"" + std::string(key) + "\" in " + where);
  return *it;
}

inline Vector read_reals(const Json& j, const std::string& what) {
  if (!j.is_array()) input_error(what + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) input_error(what + "[" + std::to_string(i) + "] is not a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline Eigen::Index read_count(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) input_error(what + " must be an integer");
  return j.get<Eigen::Index>();
}

inline std::vector<Eigen::Index> read_indices(const Json& j, const std::string& what) {
  if (!j.is_array()) input_error(what + " must be an array of integers");
  std::vector<Eigen::Index> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(read_count(j[i], what + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Json reals(const Vector& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

}  // namespace detail

inline ProblemFile problem_from_json(const Json& doc) {
  using namespace detail;
  if (!doc.is_object()) input_error("problem document must be an object");
  reject_unknown(doc, {"c", "b", "A", "cones", "x0"}, "problem");
  ProblemFile f;
  f.c = read_reals(require(doc, "c", "problem"), "c");
  f.b = read_reals(require(doc, "b", "problem"), "b");

  const Json& a = require(doc, "A", "problem");
  if (!a.is_object()) input_error("A must be an object");
  reject_unknown(a, {"m", "n", "rows", "cols", "vals"}, "A");
  f.m = read_count(require(a, "m", "A"), "A.m");
  f.n = read_count(require(a, "n", "A"), "A.n");
  f.rows = read_indices(require(a, "rows", "A"), "A.rows");
  f.cols = read_indices(require(a, "cols", "A"), "A.cols");
  const Vector vals = read_reals(require(a, "vals", "A"), "A.vals");
  f.vals.assign(vals.begin(), vals.end());

  const Json& cones = require(doc, "cones", "problem");
  if (!cones.is_array()) input_error("cones must be an array");
  for (std::size_t i = 0; i < cones.size(); ++i) {
    const std::string where = "cones[" + std::to_string(i) + "]";
    const Json& cj = cones[i];
    if (!cj.is_object()) input_error(where + " must be an object");
    reject_unknown(cj, {"type", "dim", "lambda"}, where);
    const Json& tj = require(cj, "type", where);
    if (!tj.is_string()) input_error(where + ".type must be a string");
    const auto type = parse_cone_type(tj.get<std::string>());
    if (!type) input_error(where + ".type \"" + tj.get<std::string>() + "\" is not a cone tag");
    ConeSpec spec;
    spec.type = *type;
    spec.dim = read_count(require(cj, "dim", where), where + ".dim");
    if (auto it = cj.find("lambda"); it != cj.end()) spec.lambda = read_reals(*it, where + ".lambda");
    f.cones.push_back(std::move(spec));
  }
  if (auto it = doc.find("x0"); it != doc.end()) f.x0 = read_reals(*it, "x0");
  f.validate();
  return f;
}

inline Json problem_to_json(const ProblemFile& f) {
  Json a = {{"m", f.m}, {"n", f.n}, {"rows", f.rows}, {"cols", f.cols}, {"vals", f.vals}};
  Json cones = Json::array();
  for (const auto& spec : f.cones) {
    Json cj = {{"type", std::string(to_string(spec.type))}, {"dim", spec.dim}};
    if (spec.type == ConeType::Gpow) cj["lambda"] = detail::reals(spec.lambda);
    cones.push_back(std::move(cj));
  }
  Json doc = {{"c", detail::reals(f.c)}, {"b", detail::reals(f.b)}, {"A", std::move(a)},
              {"cones", std::move(cones)}};
  if (f.x0) doc["x0"] = detail::reals(*f.x0);
  return doc;
}

inline ProblemFile parse_problem(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InputError, std::string("malformed problem document: ") + e.what());
  }
  return problem_from_json(doc);
}

inline ProblemFile read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InputError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

inline std::string dump_problem(const ProblemFile& f) { return problem_to_json(f).dump(2) + "\n"; }

inline void write_problem_file(const std::string& path, const ProblemFile& f) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InputError, "cannot write " + path);
  out << dump_problem(f);
}

/// Result document. Key order is fixed (nlohmann sorts object keys), so equal
/// results give byte-identical text.
inline Json result_to_json(const SolverResult& r) {
  Json doc;
  doc["status"] = std::string(to_string(r.status));
  doc["statusString"] = r.statusString;
  if (!r.message.empty()) doc["message"] = r.message;
  doc["x"] = detail::reals(r.x);
  doc["y"] = detail::reals(r.y);
  doc["s"] = detail::reals(r.s);
  doc["tau"] = r.tau;
  doc["kappa"] = r.kappa;
  doc["pObj"] = r.pObj;
  doc["dObj"] = r.dObj;
  doc["iterations"] = r.iterations;
  doc["solveSeconds"] = r.solveSeconds;
  doc["residualNorms"] = {{"primal", r.residualNorms.primal},
                         {"dual", r.residualNorms.dual},
                         {"gap", r.residualNorms.gap},
                         {"mu", r.residualNorms.mu}};
  doc["scaled"] = {{"primal", r.scaled.primal}, {"dual", r.scaled.dual}, {"gap", r.scaled.gap}};
  return doc;
}

inline std::string dump_result(const SolverResult& r) { return result_to_json(r).dump(2) + "\n"; }

}  // namespace nsconic
