#include "rotlip/fields.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "rotlip/error.hpp"
#include "rotlip/random.hpp"

namespace rotlip {

namespace {

std::vector<Real> parse_numbers(std::string_view text) {
  std::vector<Real> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto token = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    std::string s(token);
    char* end = nullptr;
    const Real value = std::strtold(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(value)) {
      throw Error(ErrorCode::ParseError, "bad number '" + s + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

int exact_sqrt(std::size_t count) {
  const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(n) == count ? n : -1;
}

Matrix row_major(const std::vector<Real>& v, int n) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = v[static_cast<std::size_t>(i * n + j)];
  return a;
}

Vector twist_correction(Real x1) {
  Vector v = Vector::Zero(3);
  v[0] = 1;
  if (x1 < FieldSpec::kTwistCutoff) return v;
  const Real inv = 1 / x1;
  const Real damp = std::exp(-inv * inv);
  const Real c = std::cos(inv);
  const Real s = std::sin(inv);
  const Real a = 2 * inv * inv * inv;  // d/dx of -1/x^2
  const Real b = inv * inv;            // -(d/dx of 1/x)
  v[1] = damp * (a * c + b * s);
  v[2] = damp * (a * s - b * c);
  return v;
}

}  // namespace

std::string_view field_kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::spiral2d: return "spiral2d";
    case FieldKind::twist3d: return "twist3d";
    case FieldKind::linear: return "linear";
    case FieldKind::constant: return "constant";
    case FieldKind::affine: return "affine";
  }
  return "unknown";
}

FieldSpec FieldSpec::spiral2d() { return FieldSpec(FieldKind::spiral2d, 2); }

FieldSpec FieldSpec::twist3d() { return FieldSpec(FieldKind::twist3d, 3); }

FieldSpec FieldSpec::linear(Matrix a) {
  if (a.rows() != a.cols() || a.rows() < 1) throw Error(ErrorCode::InvalidArgument, "linear field needs a square matrix");
  FieldSpec f(FieldKind::linear, static_cast<int>(a.rows()));
  f.b_ = Vector::Zero(a.rows());
  f.a_ = std::move(a);
  return f;
}

FieldSpec FieldSpec::constant(Vector b) {
  if (b.size() < 1) throw Error(ErrorCode::InvalidArgument, "constant field needs a vector");
  FieldSpec f(FieldKind::constant, static_cast<int>(b.size()));
  f.a_ = Matrix::Zero(b.size(), b.size());
  f.b_ = std::move(b);
  return f;
}

FieldSpec FieldSpec::affine(Matrix a, Vector b) {
  if (a.rows() != a.cols() || a.rows() != b.size() || b.size() < 1) {
    throw Error(ErrorCode::InvalidArgument, "affine field needs an n x n matrix and an n-vector");
  }
  FieldSpec f(FieldKind::affine, static_cast<int>(b.size()));
  f.a_ = std::move(a);
  f.b_ = std::move(b);
  return f;
}

bool FieldSpec::has_analytic_lipschitz() const {
  return kind_ == FieldKind::linear || kind_ == FieldKind::constant || kind_ == FieldKind::affine;
}

Vector FieldSpec::operator()(const Vector& x) const {
  if (x.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "point dimension does not match field");
  Vector v;
  switch (kind_) {
    case FieldKind::spiral2d: {
      const Real r2 = x[0] * x[0] + x[1] * x[1];
      v = make_vector({(r2 - 1) * x[0] - x[1], (r2 - 1) * x[1] + x[0]});
      break;
    }
    case FieldKind::twist3d:
      v = twist_correction(x[0]);
      break;
    case FieldKind::linear:
      v = a_ * x;
      break;
    case FieldKind::constant:
      v = b_;
      break;
    case FieldKind::affine:
      v = a_ * x + b_;
      break;
  }
  if (sign_ < 0) v = -v;
  return v;
}

FieldSpec FieldSpec::reversed() const {
  FieldSpec f = *this;
  f.sign_ = -sign_;
  return f;
}

std::string FieldSpec::describe() const {
  std::ostringstream out;
  out.precision(21);
  if (sign_ < 0) out << "reversed ";
  out << field_kind_name(kind_);
  auto put_matrix = [&](const char* sep) {
    out << sep;
    for (Eigen::Index i = 0; i < a_.rows(); ++i)
      for (Eigen::Index j = 0; j < a_.cols(); ++j) out << (i + j > 0 ? "," : "") << a_(i, j);
  };
  switch (kind_) {
    case FieldKind::linear:
      put_matrix(":");
      break;
    case FieldKind::constant:
      out << ":";
      for (Eigen::Index i = 0; i < b_.size(); ++i) out << (i > 0 ? "," : "") << b_[i];
      break;
    case FieldKind::affine:
      put_matrix(":");
      for (Eigen::Index i = 0; i < b_.size(); ++i) out << "," << b_[i];
      break;
    default:
      break;
  }
  return out.str();
}

FieldSpec parse_field_spec(std::string_view text) {
  const auto colon = text.find(':');
  const auto name = text.substr(0, colon);
  if (name == "spiral2d" && colon == text.npos) return FieldSpec::spiral2d();
  if (name == "twist3d" && colon == text.npos) return FieldSpec::twist3d();
  if (colon == text.npos) throw Error(ErrorCode::ParseError, "unknown field '" + std::string(text) + "'");
  const auto values = parse_numbers(text.substr(colon + 1));
  if (name == "constant") return FieldSpec::constant(Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size())));
  if (name == "linear") {
    const int n = exact_sqrt(values.size());
    if (n < 1) throw Error(ErrorCode::ParseError, "linear field needs n*n entries");
    return FieldSpec::linear(row_major(values, n));
  }
  if (name == "affine") {
    // n^2 + n entries.
    int n = 1;
    while (static_cast<std::size_t>(n * n + n) < values.size()) ++n;
    if (static_cast<std::size_t>(n * n + n) != values.size()) {
      throw Error(ErrorCode::ParseError, "affine field needs n*n + n entries");
    }
    Vector b(n);
    for (int i = 0; i < n; ++i) b[i] = values[static_cast<std::size_t>(n * n + i)];
    return FieldSpec::affine(row_major(values, n), std::move(b));
  }
  throw Error(ErrorCode::ParseError, "unknown field '" + std::string(name) + "'");
}

std::string_view lipschitz_method_name(LipschitzMethod method) {
  return method == LipschitzMethod::analytic ? "analytic" : "sampled";
}

Real operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()[0];
}

LipschitzEstimate sample_lipschitz(const FieldSpec& f, const Ball& region, std::size_t n,
                                   std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "Lipschitz sampling needs n >= 2");
  if (region.center.size() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "region dimension");
  if (!(region.radius > 0)) throw Error(ErrorCode::InvalidArgument, "region radius must be positive");
  Rng rng(seed);
  Real best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector x = uniform_in_ball(rng, region.center, region.radius);
    const Vector y = uniform_in_ball(rng, region.center, region.radius);
    const Real d = (x - y).norm();
    if (!(d > 0)) continue;
    best = std::max(best, (f(x) - f(y)).norm() / d);
  }
  return {best, region, LipschitzMethod::sampled, n};
}

LipschitzEstimate estimate_lipschitz(const FieldSpec& f, const Ball& region, std::size_t n,
                                     std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "Lipschitz sampling needs n >= 2");
  if (f.has_analytic_lipschitz()) {
    return {operator_norm(f.matrix()), region, LipschitzMethod::analytic, 0};
  }
  return sample_lipschitz(f, region, n, seed);
}

}  // namespace rotlip
