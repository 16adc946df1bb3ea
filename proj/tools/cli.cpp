#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "rotlip/bounds.hpp"
#include "rotlip/crofton.hpp"
#include "rotlip/error.hpp"
#include "rotlip/flow.hpp"
#include "rotlip/gauss_link.hpp"
#include "rotlip/io.hpp"
#include "rotlip/rotation.hpp"
#include "rotlip/scenarios.hpp"

namespace rotlip::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kDefaultSeed = 42;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key=value lines become --key=value tokens.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(row) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") {
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(row) + ": bad key '" + key + "'");
    }
    std::replace(key.begin(), key.end(), '_', '-');
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

// File entries go right after the command name, so later flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw Error(ErrorCode::ParseError, "--config needs a file name");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;
  const auto tokens = read_config(*path);
  const std::size_t at = !args.empty() && args[0].rfind('-', 0) != 0 ? 1 : 0;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), tokens.begin(), tokens.end());
  return args;
}

Vector to_vector(const std::string& text) {
  const auto xs = parse_numbers(text);
  Vector v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v[static_cast<Eigen::Index>(i)] = xs[i];
  return v;
}

Vector slice(const std::vector<long double>& xs, std::size_t from, std::size_t n) {
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = xs[from + i];
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) out.push_back(trim(part));
  return out;
}

void emit(std::ostream& out, const JsonObject& o) { out << o.str() << '\n'; }

struct IntegrateArgs {
  std::string field;
  std::string x0;
  Real t0 = 0;
  Real t1 = 0;
  IntegratorConfig cfg;
  std::string observe;
  std::string out;
};

struct RotateArgs {
  std::string curve;
  std::string point;
  std::string line;
  std::string subspace;
  std::string mode = "abs";
};

struct LinkArgs {
  std::string curve1;
  std::string curve2;
  std::string mode = "signed";
  bool planar = false;
};

struct CroftonArgs {
  std::string curve;
  std::size_t m = 10000;
  int constants = 0;
};

struct WitnessArgs {
  std::string curve;
  Real theta = 0;
  std::string kind = "equator";
  int trials = 64;
};

struct VerifyArgs {
  std::string scenario;
  std::vector<std::string> theorems;
  bool list = false;
};

struct ReproArgs {
  std::string out_dir = "paper_repro";
};

void cmd_integrate(const IntegrateArgs& a, std::ostream& out) {
  const FieldSpec f = parse_field_spec(a.field);
  IntegratorConfig cfg = a.cfg;
  if (!a.observe.empty()) {
    for (const std::string& p : split(a.observe, ';')) cfg.observation_centers.push_back(to_vector(p));
  }
  const Trajectory tr = integrate(f, to_vector(a.x0), a.t0, a.t1, cfg);
  if (a.out.empty()) {
    write_curve_csv(out, tr.curve);
    return;
  }
  write_curve_csv(fs::path(a.out), tr.curve);
  JsonObject o;
  o.add("out", a.out)
      .add("samples", static_cast<long>(tr.curve.size()))
      .add("accepted", static_cast<long>(tr.stats.accepted))
      .add("rejected", static_cast<long>(tr.stats.rejected))
      .add("evaluations", static_cast<long>(tr.stats.evaluations));
  emit(out, o);
}

RotationResult rotate(const Curve& c, const RotateArgs& a, RotationMode mode) {
  const int given = !a.point.empty() + !a.line.empty() + !a.subspace.empty();
  if (given != 1) throw Error(ErrorCode::InvalidArgument, "give exactly one of --point, --line, --subspace");
  const auto n = static_cast<std::size_t>(c.dim());
  if (!a.point.empty()) {
    const Vector x = to_vector(a.point);
    if (static_cast<std::size_t>(x.size()) != n) throw Error(ErrorCode::DimensionMismatch, "point dimension");
    if (mode == RotationMode::absolute) return absolute_rotation_point(c, x);
    return rotation_around_subspace(c, AffineSubspace::point(x), mode);
  }
  if (!a.line.empty()) {
    const auto xs = parse_numbers(a.line);
    if (xs.size() != 2 * n) {
      throw Error(ErrorCode::DimensionMismatch, "--line needs a base point and a direction of dimension " +
                                                    std::to_string(n));
    }
    return rotation_around_subspace(c, AffineSubspace::line(slice(xs, 0, n), slice(xs, n, n)), mode);
  }
  const auto parts = split(a.subspace, ';');
  std::vector<Vector> dirs;
  for (std::size_t i = 1; i < parts.size(); ++i) dirs.push_back(to_vector(parts[i]));
  return rotation_around_subspace(c, AffineSubspace::spanned(to_vector(parts.at(0)), dirs), mode);
}

void cmd_rotate(const RotateArgs& a, std::ostream& out) {
  const Curve c = read_curve_csv(fs::path(a.curve));
  const RotationMode mode = parse_mode(a.mode);
  JsonObject o = to_json(rotate(c, a, mode));
  o.add("mode", mode_name(mode));
  emit(out, o);
}

void cmd_link(const LinkArgs& a, std::ostream& out) {
  const Curve c1 = read_curve_csv(fs::path(a.curve1));
  const Curve c2 = read_curve_csv(fs::path(a.curve2));
  if (c1.closed() && c2.closed()) {
    JsonObject o = to_json(linking_coefficient(c1, c2));
    if (a.planar) o.add("topological", topological_linking_planar(c1, c2));
    emit(out, o);
    return;
  }
  const RotationMode mode = parse_mode(a.mode);
  JsonObject o = to_json(gauss_rotation_pair(c1, c2, mode));
  o.add("mode", mode_name(mode));
  emit(out, o);
}

void cmd_crofton(const CroftonArgs& a, std::uint64_t seed, std::ostream& out) {
  if (a.constants != 0) {
    const CroftonConstants k = crofton_constants(a.constants);
    JsonObject o;
    o.add("n", k.n).add("c_n", k.c_n).add("V_n", k.V_n).add("C_n", k.C_n);
    emit(out, o);
    return;
  }
  if (a.curve.empty()) throw Error(ErrorCode::InvalidArgument, "--curve or --constants is required");
  const SphericalCurve s(read_curve_csv(fs::path(a.curve)));
  JsonObject o = to_json(crofton_length_estimate(s, a.m, seed));
  o.add("polyline_length", s.length());
  emit(out, o);
}

void cmd_witness(const WitnessArgs& a, std::uint64_t seed, std::ostream& out) {
  const Curve c = read_curve_csv(fs::path(a.curve));
  EquatorWitness w;
  if (a.kind == "circle") {
    w = find_circle_witness(c, a.theta);
  } else if (a.kind == "equator") {
    w = find_equator_witness(SphericalCurve(c), a.theta, a.trials, seed);
  } else if (a.kind == "euclidean") {
    w = find_euclidean_witness(c, a.theta, a.trials, seed);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown witness kind '" + a.kind + "'");
  }
  JsonObject o = to_json(w);
  o.add("kind", a.kind).add("satisfied", w.satisfies(1e-9L * w.threshold));
  emit(out, o);
}

void cmd_verify(const VerifyArgs& a, std::uint64_t seed, std::ostream& out) {
  if (a.list) {
    std::string scen = "[";
    for (const auto& s : scenario_names()) scen += (scen.size() > 1 ? "," : "") + quote(s);
    std::string ids = "[";
    for (const auto& s : kTheoremIds) ids += (ids.size() > 1 ? "," : "") + quote(s);
    JsonObject o;
    o.add_raw("scenarios", scen + "]").add_raw("theorems", ids + "]");
    emit(out, o);
    return;
  }
  if (a.scenario.empty()) throw Error(ErrorCode::InvalidArgument, "--scenario is required");
  if (a.theorems.empty()) throw Error(ErrorCode::InvalidArgument, "--theorem is required");
  for (const auto& id : a.theorems) {
    if (!is_theorem_id(id)) throw Error(ErrorCode::InvalidArgument, "unknown theorem id '" + id + "'");
  }
  const Scenario s = make_scenario(a.scenario);
  std::vector<JsonObject> reports;
  for (const auto& id : a.theorems) {
    for (const BoundReport& r : verify_scenario(s, id, seed)) reports.push_back(to_json(r));
  }
  if (reports.size() == 1) {
    emit(out, reports.front());
    return;
  }
  std::string arr = "[";
  for (std::size_t i = 0; i < reports.size(); ++i) arr += (i ? "," : "") + reports[i].str();
  out << arr << "]\n";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  f << text;
}

void cmd_paper_repro(const ReproArgs& a, std::ostream& out) {
  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::InvalidArgument, "cannot create " + dir.string() + ": " + ec.message());

  JsonObject summary;

  // Unit circle against the z-axis, truncated at +-100.
  {
    const Curve c = circle(Vector::Zero(3), Vector::Unit(3, 0), Vector::Unit(3, 1), 1, 2000);
    const Real M = 100;
    const Curve seg = truncated_line(AffineSubspace::line(Vector::Zero(3), Vector::Unit(3, 2)), c, M);
    const RotationResult g = gauss_rotation_pair(c, seg, RotationMode::signed_);
    JsonObject o = to_json(g);
    o.add("half_length", M).add("expected", Real(1));
    write_text(dir / "circle_line.json", o.str() + "\n");
    summary.add("circle_line", o);
  }

  // Spiral: unit angular speed around the origin.
  {
    const Real T = 10;
    const Curve s = spiral_trajectory(T);
    write_curve_csv(dir / "spiral.csv", s);
    const RotationResult r = absolute_rotation_point(s, Vector::Zero(2));
    JsonObject o = to_json(r);
    o.add("T", T).add("expected", T);
    write_text(dir / "spiral.json", o.str() + "\n");
    summary.add("spiral", o);
  }

  // Rotation of the twisted axis around Ox1 between x1 = a and x1 = b.
  {
    const Real b = 0.2L;
    const AffineSubspace axis = AffineSubspace::line(Vector::Zero(3), Vector::Unit(3, 0));
    std::ostringstream csv;
    csv << "a,b,rotation_rad,expected_rad,relative_error,elapsed_time\n";
    std::vector<JsonObject> rows;
    for (const Real a_cut : {0.2L, 0.1L, 0.05L, 0.025L}) {
      const Real expected = 1 / a_cut - 1 / b;
      RotationResult r;
      if (a_cut < b) r = rotation_around_subspace(twist_trajectory(a_cut, b), axis, RotationMode::absolute);
      const Real rel = expected > 0 ? std::abs(r.value - expected) / expected : std::abs(r.value);
      csv << format_number(a_cut) << ',' << format_number(b) << ',' << format_number(r.value) << ','
          << format_number(expected) << ',' << format_number(rel) << ',' << format_number(b - a_cut) << '\n';
      JsonObject row;
      row.add("a", a_cut).add("rotation_rad", r.value).add("expected_rad", expected).add("relative_error", rel);
      rows.push_back(row);
    }
    write_text(dir / "twist_table.csv", csv.str());
    summary.add_objects("twist_table", rows);
  }

  // Two trajectories of the twist field off the axis.
  {
    const Scenario s = make_scenario("twist-pair");
    const RotationResult sg = gauss_rotation_pair(s.trajectories[0], s.trajectories[1], RotationMode::signed_);
    const RotationResult ab = gauss_rotation_pair(s.trajectories[0], s.trajectories[1], RotationMode::absolute);
    JsonObject o;
    o.add("signed", to_json(sg)).add("absolute", to_json(ab));
    write_text(dir / "twist_pair.json", o.str() + "\n");
    summary.add("twist_pair", o);
  }

  // Mutual rotation of a sink pair in shells r = e^-k <= |x| <= 1.
  {
    const Scenario s = make_scenario("sink-pair");
    std::ostringstream csv;
    csv << "k,r,T1,T2,measured,log2,implied_C,bound\n";
    std::vector<JsonObject> rows;
    int k = 1;
    for (const BoundReport& r : verify_scenario(s, "thm3_10_log", kDefaultSeed)) {
      const Real log2 = static_cast<Real>(k * k);
      csv << k << ',' << format_number(report_input(r, "r")) << ',' << format_number(report_input(r, "T1")) << ','
          << format_number(report_input(r, "T2")) << ',' << format_number(r.measured) << ',' << format_number(log2)
          << ',' << format_number(report_input(r, "implied_C")) << ',' << format_number(r.bound) << '\n';
      JsonObject row;
      row.add("k", k).add("measured", r.measured).add("implied_C", report_input(r, "implied_C"));
      rows.push_back(row);
      ++k;
    }
    write_text(dir / "sink_log_table.csv", csv.str());
    summary.add_objects("sink_log_table", rows);
  }

  summary.add("out_dir", dir.string());
  emit(out, summary);
}

int fail(std::ostream& err, const Error& e) {
  err << e.what() << '\n';
  return is_numerical_failure(e.code()) ? kExitNumerical : kExitInput;
}

}  // namespace

std::vector<long double> parse_numbers(const std::string& text) {
  std::vector<long double> out;
  for (const std::string& cell : split(text, ',')) {
    char* end = nullptr;
    const long double v = std::strtold(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::ParseError, "bad number '" + cell + "' in '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty number list");
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const Error& e) {
    return fail(err, e);
  }

  CLI::App app{"Rotation of trajectories of Lipschitz vector fields", "rotlip"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", "rotlip 0.1.0");

  std::uint64_t seed = kDefaultSeed;
  auto add_seed = [&seed](CLI::App* sub) {
    sub->add_option("--seed", seed, "seed for all random draws")->capture_default_str();
  };

  IntegrateArgs ia;
  CLI::App* integrate_cmd = app.add_subcommand("integrate", "integrate a field and write the trajectory as CSV");
  integrate_cmd->add_option("--field", ia.field, "spiral2d, twist3d, linear:..., constant:..., affine:...")
      ->required();
  integrate_cmd->add_option("--x0", ia.x0, "initial point, comma separated")->required();
  integrate_cmd->add_option("--t0", ia.t0)->capture_default_str();
  integrate_cmd->add_option("--t1", ia.t1)->required();
  integrate_cmd->add_option("--rel-tol", ia.cfg.rel_tol)->capture_default_str();
  integrate_cmd->add_option("--abs-tol", ia.cfg.abs_tol)->capture_default_str();
  integrate_cmd->add_option("--max-step", ia.cfg.max_step);
  integrate_cmd->add_option("--max-samples", ia.cfg.max_samples)->capture_default_str();
  integrate_cmd->add_option("--chord-tol", ia.cfg.chord_tol, "0 uses abs-tol, inf disables");
  integrate_cmd->add_option("--observe", ia.observe, "observation centers, ';' separated");
  integrate_cmd->add_option("--out", ia.out, "CSV path (default: standard output)");

  RotateArgs ra;
  CLI::App* rotate_cmd = app.add_subcommand("rotate", "rotation of a curve around a point, line or subspace");
  rotate_cmd->add_option("--curve", ra.curve)->required();
  rotate_cmd->add_option("--point", ra.point);
  rotate_cmd->add_option("--line", ra.line, "base,direction");
  rotate_cmd->add_option("--subspace", ra.subspace, "base;dir1;dir2;...");
  rotate_cmd->add_option("--mode", ra.mode, "abs or signed")->capture_default_str();

  LinkArgs la;
  CLI::App* link_cmd = app.add_subcommand("link", "Gauss integral of two curves");
  link_cmd->add_option("--curve1", la.curve1)->required();
  link_cmd->add_option("--curve2", la.curve2)->required();
  link_cmd->add_option("--mode", la.mode, "for open curves: abs or signed")->capture_default_str();
  link_cmd->add_flag("--planar", la.planar, "also count crossings through the flat disc of curve1");

  CroftonArgs ca;
  CLI::App* crofton_cmd = app.add_subcommand("crofton", "Cauchy-Crofton length estimate on the sphere");
  crofton_cmd->add_option("--curve", ca.curve);
  crofton_cmd->add_option("--m", ca.m, "number of random subspheres")->capture_default_str();
  crofton_cmd->add_option("--constants", ca.constants, "print the constants for R^n instead");
  add_seed(crofton_cmd);

  WitnessArgs wa;
  CLI::App* witness_cmd = app.add_subcommand("witness", "search for a pair of opposite fast passes");
  witness_cmd->add_option("--curve", wa.curve)->required();
  witness_cmd->add_option("--theta", wa.theta)->required();
  witness_cmd->add_option("--kind", wa.kind, "circle, equator or euclidean")->capture_default_str();
  witness_cmd->add_option("--trials", wa.trials)->capture_default_str();
  add_seed(witness_cmd);

  VerifyArgs va;
  CLI::App* verify_cmd = app.add_subcommand("verify", "check rotation bounds on a named scenario");
  verify_cmd->add_option("--scenario", va.scenario);
  verify_cmd->add_option("--theorem", va.theorems, "theorem ids, comma separated")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  verify_cmd->add_flag("--list", va.list, "list scenarios and theorem ids");
  add_seed(verify_cmd);

  ReproArgs pa;
  CLI::App* repro_cmd = app.add_subcommand("paper-repro", "write the reference tables");
  repro_cmd->add_option("--out-dir", pa.out_dir)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "rotlip 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Help on a subcommand arrives here too.
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "ParseError: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*integrate_cmd) cmd_integrate(ia, out);
    if (*rotate_cmd) cmd_rotate(ra, out);
    if (*link_cmd) cmd_link(la, out);
    if (*crofton_cmd) cmd_crofton(ca, seed, out);
    if (*witness_cmd) cmd_witness(wa, seed, out);
    if (*verify_cmd) cmd_verify(va, seed, out);
    if (*repro_cmd) cmd_paper_repro(pa, out);
  } catch (const Error& e) {
    return fail(err, e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace rotlip::cli
