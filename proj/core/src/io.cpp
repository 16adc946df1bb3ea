#include "rotlip/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rotlip/error.hpp"

namespace rotlip {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Real parse_cell(const std::string& s, std::size_t row) {
  char* end = nullptr;
  const Real v = std::strtold(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void write_curve_csv(std::ostream& out, const Curve& c) {
  out << "t";
  for (int d = 1; d <= c.dim(); ++d) out << ",x" << d;
  out << '\n';
  out << std::setprecision(21);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    out << c.time(i);
    for (int d = 0; d < c.dim(); ++d) out << ',' << c.points()(d, i);
    out << '\n';
  }
}

void write_curve_csv(const std::filesystem::path& path, const Curve& c) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  write_curve_csv(out, c);
}

Curve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty curve file");
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "t") {
    throw Error(ErrorCode::ParseError, "header must be t,x1,...,xn with n >= 2");
  }
  for (std::size_t d = 1; d < header.size(); ++d) {
    if (header[d] != "x" + std::to_string(d)) throw Error(ErrorCode::ParseError, "unexpected column '" + header[d] + "'");
  }
  const auto dim = static_cast<Eigen::Index>(header.size() - 1);
  std::vector<Real> times;
  std::vector<Real> coords;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                             " columns, expected " + std::to_string(header.size()));
    }
    times.push_back(parse_cell(cells[0], row));
    for (std::size_t d = 1; d < cells.size(); ++d) coords.push_back(parse_cell(cells[d], row));
  }
  Matrix pts(dim, static_cast<Eigen::Index>(times.size()));
  for (Eigen::Index i = 0; i < pts.cols(); ++i)
    for (Eigen::Index d = 0; d < dim; ++d) pts(d, i) = coords[static_cast<std::size_t>(i * dim + d)];
  Curve open(times, pts);
  if (open.size() > 2 && open.endpoints_coincide() && open.diameter() > 0) return Curve(std::move(times), std::move(pts), true);
  return open;
}

Curve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  return read_curve_csv(in);
}

std::string format_number(Real x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(x));
  return buf;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

JsonObject& JsonObject::add(std::string_view key, Real value) { return add_raw(key, format_number(value)); }
JsonObject& JsonObject::add(std::string_view key, long value) { return add_raw(key, std::to_string(value)); }
JsonObject& JsonObject::add(std::string_view key, bool value) { return add_raw(key, value ? "true" : "false"); }
JsonObject& JsonObject::add(std::string_view key, std::string_view value) { return add_raw(key, quote(value)); }
JsonObject& JsonObject::add(std::string_view key, const JsonObject& value) { return add_raw(key, value.str()); }

JsonObject& JsonObject::add(std::string_view key, const std::vector<Real>& values) {
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_number(values[i]);
  return add_raw(key, s + "]");
}

JsonObject& JsonObject::add_objects(std::string_view key, const std::vector<JsonObject>& values) {
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + values[i].str();
  return add_raw(key, s + "]");
}

JsonObject& JsonObject::add_raw(std::string_view key, std::string json) {
  fields_.emplace_back(std::string(key), std::move(json));
  return *this;
}

std::string JsonObject::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (i) s += ',';
    s += quote(fields_[i].first) + ':' + fields_[i].second;
  }
  return s + "}";
}

JsonObject to_json(const RotationResult& r) {
  JsonObject o;
  o.add("value", r.value).add("error_estimate", r.error_estimate).add("convention", convention_name(r.convention));
  return o;
}

JsonObject to_json(const LinkingResult& r) {
  JsonObject o;
  o.add("raw", r.raw)
      .add("nearest_integer", r.nearest_integer)
      .add("residual", r.residual)
      .add("error_estimate", r.error_estimate);
  return o;
}

JsonObject to_json(const BoundReport& r) {
  JsonObject inputs;
  for (const auto& [name, value] : r.inputs) {
    if (const Real* v = std::get_if<Real>(&value)) {
      inputs.add(name, *v);
    } else {
      inputs.add(name, std::get<std::string>(value));
    }
  }
  JsonObject errors;
  for (const auto& [name, value] : r.error_estimates) errors.add(name, value);
  JsonObject o;
  o.add("theorem_id", r.theorem_id)
      .add("measured", r.measured)
      .add("bound", r.bound)
      .add("margin", r.margin)
      .add("satisfied", r.satisfied)
      .add("inputs", inputs)
      .add("error_estimates", errors);
  return o;
}

JsonObject to_json(const EquatorWitness& w) {
  std::string plane = "[";
  for (Eigen::Index j = 0; j < w.plane.cols(); ++j) {
    plane += j ? ",[" : "[";
    for (Eigen::Index i = 0; i < w.plane.rows(); ++i) plane += (i ? "," : "") + format_number(w.plane(i, j));
    plane += "]";
  }
  plane += "]";
  JsonObject o;
  o.add_raw("plane", plane)
      .add("tau1", w.tau1)
      .add("tau2", w.tau2)
      .add("relation", relation_name(w.relation))
      .add("v_proj_1", w.v_proj_1)
      .add("v_proj_2", w.v_proj_2)
      .add("theta", w.theta)
      .add("threshold", w.threshold)
      .add("length", w.length)
      .add("projected_length", w.projected_length)
      .add("match_tolerance", w.match_tolerance)
      .add("trial", w.trial);
  return o;
}

JsonObject to_json(const LengthEstimate& e) {
  JsonObject o;
  o.add("value", e.value).add("standard_error", e.standard_error).add("draws", static_cast<long>(e.draws));
  return o;
}

JsonObject to_json(const LineCrosscheck& c) {
  JsonObject o;
  o.add("gauss", to_json(c.gauss))
      .add("projection", to_json(c.projection))
      .add("truncation_tail", c.truncation_tail)
      .add("half_length", c.half_length)
      .add("discrepancy", c.discrepancy())
      .add("tolerance", c.tolerance())
      .add("agree", c.discrepancy() <= c.tolerance());
  return o;
}

}  // namespace rotlip
