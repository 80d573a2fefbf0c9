#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bmotv/catalog.hpp"
#include "bmotv/error.hpp"
#include "bmotv/gamma_lab.hpp"
#include "bmotv/grid_io.hpp"
#include "bmotv/lattice.hpp"
#include "bmotv/mesh.hpp"
#include "bmotv/oscillation.hpp"
#include "bmotv/packing.hpp"
#include "bmotv/report_io.hpp"

namespace bmotv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/// Comma-separated list of rationals: "1/4,1/8" or "0.5".
inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw Error(ErrorCode::parse_error, "empty list");
  return out;
}

inline Vec parse_vec(const std::string& text, int dim) {
  const auto v = parse_list(text);
  if (static_cast<int>(v.size()) != dim)
    throw Error(ErrorCode::parse_error, "'" + text + "' needs " + std::to_string(dim) + " components");
  return {v[0], dim == 2 ? v[1] : 0.0};
}

/// "lo0,hi0" in 1D, "lo0,lo1,hi0,hi1" in 2D.
inline Box parse_box(const std::string& text, int dim) {
  const auto v = parse_list(text);
  if (static_cast<int>(v.size()) != 2 * dim)
    throw Error(ErrorCode::parse_error, "box '" + text + "' needs " + std::to_string(2 * dim) + " numbers");
  Box b;
  for (int a = 0; a < dim; ++a) {
    b.lo[a] = v[static_cast<std::size_t>(a)];
    b.hi[a] = v[static_cast<std::size_t>(dim + a)];
  }
  return b;
}

struct SolverFlags {
  std::string solver = "dp1d";
  std::string pitch;
  bool rotations = false;
  int angles = 4;
  std::string angle_source = "both";
  std::string tie_tol = "0";
  std::uint64_t budget = std::uint64_t{1} << 20;
  std::string cap;
  std::vector<std::string> offsets;

  void attach(CLI::App* app, bool with_cap) {
    app->add_option("--solver", solver, "dp1d | lattice | greedy | oracle")->capture_default_str();
    app->add_option("--pitch", pitch, "candidate center pitch (multiple of h)");
    app->add_flag("--rotations", rotations, "allow rotated cubes (2D greedy/oracle)");
    app->add_option("--angles", angles, "number m of uniform angles k pi/(2m)")->capture_default_str();
    app->add_option("--angle-source", angle_source, "uniform | gradient | both")->capture_default_str();
    app->add_option("--tie-tol", tie_tol, "relative score bucket for greedy ordering")->capture_default_str();
    app->add_option("--budget", budget, "oracle search state budget")->capture_default_str();
    app->add_option("--offset", offsets, "lattice solver offset, e.g. 1/64,1/64 (repeatable)");
    if (with_cap) app->add_option("--cap", cap, "cardinality limit");
  }

  SolverOptions options() const {
    SolverOptions o;
    if (!pitch.empty()) o.pitch = parse_rational(pitch);
    o.rotations = rotations;
    if (angles < 1) throw Error(ErrorCode::invalid_argument, "--angles must be >= 1");
    o.uniform_angles = angles;
    o.angle_source = angle_source_from_string(angle_source);
    o.tie_tolerance = parse_rational(tie_tol);
    o.budget = budget;
    if (!cap.empty()) o.cap = static_cast<Index>(parse_rational(cap));
    return o;
  }

  PackingSolution run(const GridFunction& f, double eps) const {
    const auto s = solver_from_string(solver);
    const auto o = options();
    if (s == Solver::lattice && !offsets.empty()) {
      std::vector<Vec> offs;
      for (const auto& t : offsets) offs.push_back(parse_vec(t, f.dim()));
      return keps_lattice(f, eps, offs);
    }
    return solve(f, eps, s, o);
  }
};

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else write_text(path, text);
}

inline std::string file_tag(std::string s) {
  for (auto& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s;
}

/// Parses the command line and runs one subcommand. Returns the exit status.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"BMO-type oscillation seminorms, total variation and mesh projections on grid functions"};
  app.name("bmotv");
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a catalog function");
  std::string g_spec, g_kind, g_out, g_h, g_box, g_exterior, g_center;
  std::map<std::string, std::string> g_real;
  std::vector<std::string> g_jumps;
  int g_dim = 0, g_level = 0;
  gen->add_option("--spec", g_spec, "FunctionSpec JSON file");
  gen->add_option("--kind", g_kind, "function kind");
  gen->add_option("--dim", g_dim, "1 or 2");
  gen->add_option("--h", g_h, "cell size");
  gen->add_option("--box", g_box, "lo0,hi0 or lo0,lo1,hi0,hi1");
  gen->add_option("--exterior", g_exterior, "auto | zero | clamp");
  gen->add_option("--level", g_level, "cantor level");
  gen->add_option("--center", g_center, "center point");
  gen->add_option("--jump", g_jumps, "position:height (repeatable)");
  for (const char* key : {"value", "slope", "a", "b", "shoulder", "position", "left", "right", "radius", "side", "sigma",
                          "period", "alpha", "scale"})
    gen->add_option(std::string("--") + key, g_real[key], std::string(key) + " parameter");
  gen->add_option("-o,--output", g_out, "grid file (stdout if omitted)");

  // osc
  auto* osc = app.add_subcommand("osc", "mean oscillation over a cube or a family score");
  std::string o_grid, o_eps, o_center, o_angle = "0", o_family;
  bool o_mean = false;
  osc->add_option("grid", o_grid, "grid file")->required();
  osc->add_option("--eps", o_eps, "cube side");
  osc->add_option("--center", o_center, "cube center");
  osc->add_option("--angle", o_angle, "rotation angle in radians")->capture_default_str();
  osc->add_option("--family", o_family, "family JSON file; prints the family score");
  osc->add_flag("--mean", o_mean, "print the mean instead of the oscillation");

  // tv
  auto* tv = app.add_subcommand("tv", "total variation (or directional variation over a region)");
  std::string t_grid, t_dir, t_region;
  tv->add_option("grid", t_grid, "grid file")->required();
  tv->add_option("--direction", t_dir, "unit vector e");
  tv->add_option("--region", t_region, "closed box for --direction");

  // keps / ieps / bbm
  auto* keps = app.add_subcommand("keps", "lower bound of K_eps from a solver");
  auto* iep = app.add_subcommand("ieps", "capped variant I_eps");
  auto* bbm = app.add_subcommand("bbm", "[f]_eps over axis-parallel cubes inside the unit cube");
  std::string k_grid, k_eps, k_out;
  SolverFlags k_flags;
  for (auto* sub : {keps, iep, bbm}) {
    sub->add_option("grid", k_grid, "grid file")->required();
    sub->add_option("--eps", k_eps, "cube side")->required();
    sub->add_option("-o,--output", k_out, "solution JSON file");
  }
  k_flags.attach(keps, true);
  k_flags.attach(iep, false);
  bbm->add_option("--solver", k_flags.solver, "dp1d (1D) | greedy | oracle")->capture_default_str();
  bbm->add_option("--budget", k_flags.budget, "oracle search state budget");

  // project
  auto* proj = app.add_subcommand("project", "piecewise-constant projection onto tau + Q_delta");
  std::string p_grid, p_delta, p_tau, p_out;
  proj->add_option("grid", p_grid, "grid file")->required();
  proj->add_option("--delta", p_delta, "mesh side")->required();
  proj->add_option("--tau", p_tau, "mesh translation (default 0)");
  proj->add_option("-o,--output", p_out, "grid file (stdout if omitted)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "K_eps over a decreasing list of eps");
  std::string s_grid, s_eps, s_spec, s_id = "f", s_dir, s_format = "csv";
  bool s_timing = false;
  SolverFlags s_flags;
  sweep->add_option("grid", s_grid, "grid file")->required();
  sweep->add_option("--eps", s_eps, "comma-separated eps values, decreasing")->required();
  sweep->add_option("--spec", s_spec, "FunctionSpec JSON (enables reference limits)");
  sweep->add_option("--id", s_id, "function id used in file names")->capture_default_str();
  sweep->add_option("--out-dir", s_dir, "write <id>_<solver>_p<pitch>.csv and .json here");
  sweep->add_option("--format", s_format, "csv | json (stdout)")->capture_default_str();
  sweep->add_flag("--timing", s_timing, "include runtimes in the artifacts");
  s_flags.attach(sweep, true);

  // verify
  auto* ver = app.add_subcommand("verify", "seeded randomized lemma suites");
  std::string v_suite = "lemmas", v_out;
  std::uint64_t v_seed = 7;
  int v_n1 = 200, v_n2 = 50;
  ver->add_option("--suite", v_suite, "lemmas")->capture_default_str();
  ver->add_option("--seed", v_seed, "random seed")->capture_default_str();
  ver->add_option("--n1d", v_n1, "1D instances")->capture_default_str();
  ver->add_option("--n2d", v_n2, "2D instances")->capture_default_str();
  ver->add_option("-o,--output", v_out, "summary JSON file");

  // compactness
  auto* comp = app.add_subcommand("compactness", "projection, recentring and L1 distances along f_j");
  std::vector<std::string> c_grids;
  std::string c_eps, c_window, c_out, c_format = "json", c_solver = "dp1d";
  comp->add_option("grids", c_grids, "grid files, one per eps")->required();
  comp->add_option("--eps", c_eps, "comma-separated eps_j matching the grids")->required();
  comp->add_option("--window", c_window, "window box (default: box of the first grid)");
  comp->add_option("--solver", c_solver, "solver for K_eps")->capture_default_str();
  comp->add_option("--format", c_format, "csv | json")->capture_default_str();
  comp->add_option("-o,--output", c_out, "report file");

  // counterexample
  auto* cex = app.add_subcommand("counterexample", "f_eps = rho(x/eps) with rho = |x|^-alpha");
  std::string x_alpha = "1/2", x_p = "2", x_eps = "1/8,1/16,1/32,1/64,1/128,1/256", x_h = "1/16384", x_fixed = "1/8";
  std::string x_out, x_format = "json";
  int x_dim = 1;
  cex->add_option("--alpha", x_alpha, "profile exponent")->capture_default_str();
  cex->add_option("--p", x_p, "Lebesgue exponent")->capture_default_str();
  cex->add_option("--dim", x_dim, "1 or 2")->capture_default_str();
  cex->add_option("--eps", x_eps, "comma-separated eps values")->capture_default_str();
  cex->add_option("--h", x_h, "grid for the eps sweep")->capture_default_str();
  cex->add_option("--fixed-eps", x_fixed, "eps of the L^p refinement study")->capture_default_str();
  cex->add_option("--format", x_format, "csv | json")->capture_default_str();
  cex->add_option("-o,--output", x_out, "report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      FunctionSpec s;
      if (!g_spec.empty()) s = spec_from_json(Json::parse(read_text(g_spec)));
      else if (g_kind.empty()) throw Error(ErrorCode::invalid_spec, "either --spec or --kind is required");
      if (!g_kind.empty()) s.kind = kind_from_string(g_kind);
      if (g_dim) s.dim = g_dim;
      if (!g_h.empty()) s.h = parse_rational(g_h);
      if (!g_box.empty()) s.box = parse_box(g_box, s.dim);
      else if (g_spec.empty() && s.dim == 2) s.box = Box{{0.0, 0.0}, {1.0, 1.0}};
      if (!g_exterior.empty()) s.exterior = exterior_from_string(g_exterior);
      if (g_level) s.level = g_level;
      if (!g_center.empty()) s.center = parse_vec(g_center, s.dim);
      for (const auto& j : g_jumps) {
        const auto colon = j.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::parse_error, "--jump expects position:height");
        s.jumps.push_back({parse_rational(j.substr(0, colon)), parse_rational(j.substr(colon + 1))});
      }
      const std::map<std::string, double*> fields{
          {"value", &s.value}, {"slope", &s.slope}, {"a", &s.a}, {"b", &s.b}, {"shoulder", &s.shoulder},
          {"position", &s.position}, {"left", &s.left}, {"right", &s.right}, {"radius", &s.radius}, {"side", &s.side},
          {"sigma", &s.sigma}, {"period", &s.period}, {"alpha", &s.alpha}, {"scale", &s.scale}};
      for (const auto& [k, v] : g_real)
        if (!v.empty()) *fields.at(k) = parse_rational(v);
      const auto f = generate(s);
      std::ostringstream ss;
      write_grid(f, ss);
      emit(g_out, ss.str(), out);
      return kExitOk;
    }
    if (*osc) {
      const auto f = read_grid(o_grid);
      if (!o_family.empty()) {
        auto j = Json::parse(read_text(o_family));
        if (j.contains("family")) j = j["family"];  // a saved solution
        out << fmt(family_score(f, family_from_json(j))) << '\n';
        return kExitOk;
      }
      if (o_eps.empty() || o_center.empty()) throw Error(ErrorCode::invalid_argument, "--eps and --center are required");
      const auto q = make_cube(parse_vec(o_center, f.dim()), parse_rational(o_eps), parse_rational(o_angle));
      out << fmt(o_mean ? mean(f, q) : oscillation(f, q)) << '\n';
      return kExitOk;
    }
    if (*tv) {
      const auto f = read_grid(t_grid);
      if (t_dir.empty()) {
        out << fmt(total_variation(f)) << '\n';
        return kExitOk;
      }
      const Box region = t_region.empty() ? f.box() : parse_box(t_region, f.dim());
      const auto d = directional_tv(f, parse_vec(t_dir, f.dim()), region);
      out << "signed " << fmt(d.signed_value) << "\nabsolute " << fmt(d.absolute) << '\n';
      return kExitOk;
    }
    if (*keps || *iep || *bbm) {
      const auto f = read_grid(k_grid);
      const double eps = parse_rational(k_eps);
      PackingSolution sol;
      if (*keps) sol = k_flags.run(f, eps);
      else if (*iep) sol = ieps(f, eps, solver_from_string(k_flags.solver), k_flags.options());
      else {
        SolverOptions o;
        o.budget = k_flags.budget;
        const auto sv = solver_from_string(k_flags.solver);
        sol = bbm_seminorm(f, eps, f.dim() == 2 && sv == Solver::dp1d ? Solver::greedy : sv, o);
      }
      out << fmt(sol.score) << '\n';
      if (!k_out.empty()) write_text(k_out, dump(to_json(sol)));
      return kExitOk;
    }
    if (*proj) {
      const auto f = read_grid(p_grid);
      const Vec tau = p_tau.empty() ? Vec{0.0, 0.0} : parse_vec(p_tau, f.dim());
      std::ostringstream ss;
      write_grid(project(f, parse_rational(p_delta), tau), ss);
      emit(p_out, ss.str(), out);
      return kExitOk;
    }
    if (*sweep) {
      const auto f = read_grid(s_grid);
      std::optional<DecompositionSpec> dec;
      bool smooth = false;
      if (!s_spec.empty()) {
        const auto spec = spec_from_json(Json::parse(read_text(s_spec)));
        dec = declared_decomposition(spec);
        smooth = is_smooth(spec);
      }
      const auto solver = solver_from_string(s_flags.solver);
      const auto rep = sweep_keps(f, parse_list(s_eps), solver, s_flags.options(), dec, smooth, s_id);
      std::ostringstream csv;
      write_sweep_csv(rep, csv, s_timing);
      const std::string json = dump(to_json(rep, s_timing));
      if (!s_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(s_dir, ec);
        if (ec) throw Error(ErrorCode::io_error, "cannot create '" + s_dir + "': " + ec.message());
        const std::string stem = s_dir + "/" + file_tag(s_id) + "_" + std::string(to_string(solver)) + "_p" +
                                 (s_flags.pitch.empty() ? std::string("auto") : file_tag(s_flags.pitch));
        write_text(stem + ".csv", csv.str());
        write_text(stem + ".json", json);
      }
      if (s_format == "json") out << json;
      else if (s_format == "csv") out << csv.str();
      else throw Error(ErrorCode::invalid_argument, "--format must be csv or json");
      return kExitOk;
    }
    if (*ver) {
      if (v_suite != "lemmas" && v_suite != "all") throw Error(ErrorCode::invalid_argument, "unknown suite '" + v_suite + "'");
      const auto rep = run_lemma_suite(v_seed, v_n1, v_n2);
      const std::string json = dump(to_json(rep));
      out << json;
      if (!v_out.empty()) write_text(v_out, json);
      return rep.violations() == 0 ? kExitOk : kExitViolation;
    }
    if (*comp) {
      const auto eps = parse_list(c_eps);
      if (eps.size() != c_grids.size()) throw Error(ErrorCode::invalid_argument, "--eps needs one value per grid");
      std::vector<std::pair<double, GridFunction>> fam;
      for (std::size_t k = 0; k < eps.size(); ++k) fam.emplace_back(eps[k], read_grid(c_grids[k]));
      const Box window = c_window.empty() ? fam.front().second.box() : parse_box(c_window, fam.front().second.dim());
      const auto rep = compactness_demo(fam, window, solver_from_string(c_solver));
      std::ostringstream ss;
      if (c_format == "csv") write_compactness_csv(rep, ss);
      else if (c_format == "json") ss << dump(to_json(rep));
      else throw Error(ErrorCode::invalid_argument, "--format must be csv or json");
      emit(c_out, ss.str(), out);
      return kExitOk;
    }
    if (*cex) {
      CounterexampleOptions opt;
      opt.h = parse_rational(x_h);
      opt.fixed_eps = parse_rational(x_fixed);
      const auto rep = remark_counterexample(parse_rational(x_alpha), parse_rational(x_p), parse_list(x_eps), x_dim, opt);
      std::ostringstream ss;
      if (x_format == "csv") write_counterexample_csv(rep, ss);
      else if (x_format == "json") ss << dump(to_json(rep));
      else throw Error(ErrorCode::invalid_argument, "--format must be csv or json");
      emit(x_out, ss.str(), out);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "bmotv: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "bmotv: parse-error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bmotv::cli
