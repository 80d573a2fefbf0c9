#pragma once

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bmotv/catalog.hpp"
#include "bmotv/error.hpp"
#include "bmotv/gamma_lab.hpp"
#include "bmotv/grid_io.hpp"
#include "bmotv/lattice.hpp"
#include "bmotv/oscillation.hpp"
#include "bmotv/packing.hpp"

namespace bmotv {

using Json = nlohmann::ordered_json;

/// Non-finite reals become null.
inline Json real_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

namespace detail {

/// A JSON number, or a string holding a rational such as "1/729".
inline double json_real(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(ErrorCode::parse_error, "expected a number or a rational string");
}

inline std::vector<double> json_reals(const Json& j) {
  std::vector<double> out;
  if (!j.is_array()) return {json_real(j)};
  for (const auto& x : j) out.push_back(json_real(x));
  return out;
}

}  // namespace detail

inline std::string_view to_string(Exterior e) {
  switch (e) {
    case Exterior::automatic: return "auto";
    case Exterior::zero: return "zero";
    case Exterior::clamp: return "clamp";
  }
  return "unknown";
}

inline Exterior exterior_from_string(std::string_view s) {
  for (Exterior e : {Exterior::automatic, Exterior::zero, Exterior::clamp})
    if (to_string(e) == s) return e;
  throw Error(ErrorCode::invalid_spec, "unknown exterior '" + std::string(s) + "'");
}

inline Json to_json(const FunctionSpec& s) {
  Json jumps = Json::array();
  for (const auto& j : s.jumps) jumps.push_back(Json{{"position", j.position}, {"height", j.height}});
  Json lo = Json::array(), hi = Json::array(), center = Json::array();
  for (int a = 0; a < s.dim; ++a) {
    lo.push_back(s.box.lo[a]);
    hi.push_back(s.box.hi[a]);
    center.push_back(s.center[a]);
  }
  return Json{{"kind", to_string(s.kind)}, {"dim", s.dim}, {"h", s.h}, {"box", {{"lo", lo}, {"hi", hi}}},
              {"exterior", to_string(s.exterior)}, {"value", s.value}, {"slope", s.slope}, {"a", s.a}, {"b", s.b},
              {"shoulder", s.shoulder}, {"position", s.position}, {"left", s.left}, {"right", s.right},
              {"jumps", std::move(jumps)}, {"level", s.level}, {"center", center}, {"radius", s.radius},
              {"side", s.side}, {"sigma", s.sigma}, {"period", s.period}, {"alpha", s.alpha}, {"scale", s.scale}};
}

/// Reads a FunctionSpec; absent keys keep their defaults.
inline FunctionSpec spec_from_json(const Json& j) {
  try {
    FunctionSpec s;
    s.kind = kind_from_string(j.at("kind").get<std::string>());
    s.dim = j.value("dim", 1);
    auto real = [&](const char* key, double& field) {
      if (j.contains(key)) field = detail::json_real(j.at(key));
    };
    real("h", s.h);
    if (j.contains("box")) {
      const auto lo = detail::json_reals(j.at("box").at("lo")), hi = detail::json_reals(j.at("box").at("hi"));
      if (static_cast<int>(lo.size()) != s.dim || static_cast<int>(hi.size()) != s.dim)
        throw Error(ErrorCode::invalid_spec, "box corners need dim entries");
      for (int a = 0; a < s.dim; ++a) {
        s.box.lo[a] = lo[static_cast<std::size_t>(a)];
        s.box.hi[a] = hi[static_cast<std::size_t>(a)];
      }
    }
    if (j.contains("exterior")) s.exterior = exterior_from_string(j.at("exterior").get<std::string>());
    real("value", s.value);
    real("slope", s.slope);
    real("a", s.a);
    real("b", s.b);
    real("shoulder", s.shoulder);
    real("position", s.position);
    real("left", s.left);
    real("right", s.right);
    if (j.contains("jumps"))
      for (const auto& x : j.at("jumps")) s.jumps.push_back({detail::json_real(x.at("position")), detail::json_real(x.at("height"))});
    s.level = j.value("level", s.level);
    if (j.contains("center")) {
      const auto c = detail::json_reals(j.at("center"));
      for (std::size_t a = 0; a < c.size() && a < 2; ++a) s.center[a] = c[a];
    }
    real("radius", s.radius);
    real("side", s.side);
    real("sigma", s.sigma);
    real("period", s.period);
    real("alpha", s.alpha);
    real("scale", s.scale);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("function spec JSON: ") + e.what());
  }
}

inline std::string_view to_string(OrientationMode m) {
  return m == OrientationMode::rotated ? "rotated" : "axis_aligned";
}

inline Json to_json(const Cube& q) { return Json{{"center", {q.center[0], q.center[1]}}, {"eps", q.eps}, {"angle", q.angle}}; }

inline Json to_json(const CubeFamily& fam) {
  Json cubes = Json::array();
  for (const auto& q : fam.cubes) cubes.push_back(to_json(q));
  return Json{{"eps", fam.eps}, {"orientation_mode", to_string(fam.orientation_mode)}, {"cubes", std::move(cubes)}};
}

inline CubeFamily family_from_json(const Json& j) {
  try {
    CubeFamily fam;
    fam.eps = j.at("eps").get<double>();
    const auto mode = j.value("orientation_mode", std::string("axis_aligned"));
    if (mode == "rotated") fam.orientation_mode = OrientationMode::rotated;
    else if (mode == "axis_aligned") fam.orientation_mode = OrientationMode::axis_aligned;
    else throw Error(ErrorCode::parse_error, "unknown orientation_mode '" + mode + "'");
    for (const auto& c : j.at("cubes")) {
      const auto& ctr = c.at("center");
      Vec center{ctr.at(0).get<double>(), ctr.size() > 1 ? ctr.at(1).get<double>() : 0.0};
      fam.cubes.push_back(make_cube(center, c.value("eps", fam.eps), c.value("angle", 0.0)));
    }
    return fam;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("family JSON: ") + e.what());
  }
}

inline Json to_json(const PackingSolution& s) {
  Json meta = Json::object();
  for (const auto& [k, v] : s.metadata) meta[k] = v;
  return Json{{"solver", to_string(s.solver)},
              {"score", s.score},
              {"candidate_step", s.candidate_step},
              {"certified_exact_over_candidates", s.certified_exact_over_candidates},
              {"metadata", std::move(meta)},
              {"family", to_json(s.family)}};
}

inline Json to_json(const Check& c) {
  return Json{{"name", c.name}, {"lhs", real_json(c.lhs)}, {"rhs", real_json(c.rhs)}, {"holds", c.holds}};
}

inline Json to_json(const LemmaReport& r) {
  Json values = Json::object();
  for (const auto& [k, v] : r.values) values[k] = real_json(v);
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return Json{{"lemma", r.lemma}, {"values", std::move(values)}, {"checks", std::move(checks)}, {"violations", r.violations()}};
}

inline Json to_json(const std::vector<Verdict>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(Json{{"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
  return out;
}

inline Json to_json(const SuiteReport& s) {
  Json t = Json::object();
  for (const auto& [k, v] : s.tallies)
    t[k] = Json{{"instances", v.instances}, {"checks", v.checks}, {"violations", v.violations}, {"worst_ratio", v.worst_ratio}};
  Json failed = Json::array();
  for (const auto& r : s.failed) failed.push_back(to_json(r));
  return Json{{"seed", s.seed}, {"violations", s.violations()}, {"suites", std::move(t)}, {"failed", std::move(failed)}};
}

/// Summary JSON of a sweep. Runtimes are included only on request so that
/// repeated runs produce identical files.
inline Json to_json(const SweepReport& r, bool with_timing = false) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j{{"eps", row.eps}, {"keps", row.keps}, {"solver", to_string(row.solver)}, {"family_size", row.family_size}};
    if (with_timing) j["runtime_seconds"] = row.runtime_seconds;
    rows.push_back(std::move(j));
  }
  return Json{{"function_id", r.function_id},
              {"solver", to_string(r.solver)},
              {"pitch", r.pitch},
              {"total_variation", r.total_variation},
              {"quarter_tv", r.quarter_tv},
              {"half_tv", r.half_tv},
              {"dfp_limit", r.dfp_limit ? Json(*r.dfp_limit) : Json(nullptr)},
              {"rows", std::move(rows)},
              {"verdicts", to_json(r.verdicts)}};
}

inline void write_sweep_csv(const SweepReport& r, std::ostream& out, bool with_timing = false) {
  out << "eps,keps,solver,family_size,quarter_tv,half_tv,dfp_limit";
  if (with_timing) out << ",runtime_seconds";
  out << '\n';
  for (const auto& row : r.rows) {
    out << format_real(row.eps) << ',' << format_real(row.keps) << ',' << to_string(row.solver) << ',' << row.family_size
        << ',' << format_real(r.quarter_tv) << ',' << format_real(r.half_tv) << ','
        << (r.dfp_limit ? format_real(*r.dfp_limit) : std::string());
    if (with_timing) out << ',' << format_real(row.runtime_seconds);
    out << '\n';
  }
}

inline Json to_json(const CompactnessReport& r) {
  Json rows = Json::array();
  for (const auto& x : r.rows)
    rows.push_back(Json{{"eps", x.eps},
                        {"keps", x.keps},
                        {"s_max", x.s_max},
                        {"tv_projection", x.tv_projection},
                        {"tv_bound", x.tv_bound},
                        {"center", x.center},
                        {"l1_to_zero", x.l1_to_zero},
                        {"l1_to_finest", x.l1_to_finest},
                        {"l1_to_finest_inner", x.l1_to_finest_inner}});
  return Json{{"window", {{"lo", {r.window.lo[0], r.window.lo[1]}}, {"hi", {r.window.hi[0], r.window.hi[1]}}}},
              {"rows", std::move(rows)},
              {"verdicts", to_json(r.verdicts)}};
}

inline void write_compactness_csv(const CompactnessReport& r, std::ostream& out) {
  out << "eps,keps,s_max,tv_projection,tv_bound,center,l1_to_zero,l1_to_finest,l1_to_finest_inner\n";
  for (const auto& x : r.rows)
    out << format_real(x.eps) << ',' << format_real(x.keps) << ',' << format_real(x.s_max) << ','
        << format_real(x.tv_projection) << ',' << format_real(x.tv_bound) << ',' << format_real(x.center) << ','
        << format_real(x.l1_to_zero) << ',' << format_real(x.l1_to_finest) << ',' << format_real(x.l1_to_finest_inner)
        << '\n';
}

inline Json to_json(const CounterexampleReport& r) {
  Json rows = Json::array();
  for (const auto& x : r.rows)
    rows.push_back(Json{{"eps", x.eps},
                        {"keps", x.keps},
                        {"remark_bound", x.remark_bound},
                        {"cubes_meeting_support", x.cubes_meeting_support},
                        {"l1_norm", x.l1_norm}});
  Json norms = Json::array();
  for (const auto& n : r.norms) norms.push_back(Json{{"h", n.h}, {"lp_norm", n.lp_norm}});
  return Json{{"alpha", r.alpha},
              {"p", r.p},
              {"dim", r.dim},
              {"fixed_eps", r.fixed_eps},
              {"rows", std::move(rows)},
              {"norms", std::move(norms)},
              {"bound_ratio", real_json(r.bound_ratio)},
              {"slope", real_json(r.slope)},
              {"analytic_slope", r.analytic_slope},
              {"compactness", to_json(r.compactness)},
              {"verdicts", to_json(r.verdicts)}};
}

inline void write_counterexample_csv(const CounterexampleReport& r, std::ostream& out) {
  out << "eps,keps,remark_bound,cubes_meeting_support,l1_norm\n";
  for (const auto& x : r.rows)
    out << format_real(x.eps) << ',' << format_real(x.keps) << ',' << format_real(x.remark_bound) << ','
        << x.cubes_meeting_support << ',' << format_real(x.l1_norm) << '\n';
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::io_error, "write to '" + path + "' failed");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace bmotv
