#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "rotlip/types.hpp"

namespace rotlip {

enum class FieldKind { spiral2d, twist3d, linear, constant, affine };

std::string_view field_kind_name(FieldKind kind);

/// A vector field v on R^dim: one of the catalog fields or a linear/affine map.
///
/// spiral2d: v(x, y) = ((r^2 - 1) x - y, (r^2 - 1) y + x), sink at the origin
///   spiralling at unit angular speed, unit circle as limit cycle.
/// twist3d: v = (1, w1'(x1), w2'(x1)) with w1 + i w2 = exp(-1/x1^2 + i/x1)
///   for x1 > 0 and v = (1, 0, 0) otherwise. The image of the positive
///   x1-semiaxis winds infinitely often around Ox1 in finite time.
class FieldSpec {
 public:
  /// Below this x1 the twist3d correction is under exp(-1e6) and is dropped.
  static constexpr Real kTwistCutoff = 1e-3L;

  static FieldSpec spiral2d();
  static FieldSpec twist3d();
  static FieldSpec linear(Matrix a);
  static FieldSpec constant(Vector b);
  static FieldSpec affine(Matrix a, Vector b);

  [[nodiscard]] FieldKind kind() const { return kind_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const Matrix& matrix() const { return a_; }
  [[nodiscard]] const Vector& offset() const { return b_; }
  /// -1 for a time-reversed field.
  [[nodiscard]] Real sign() const { return sign_; }

  /// True for kinds whose Lipschitz constant is the matrix operator norm.
  [[nodiscard]] bool has_analytic_lipschitz() const;

  [[nodiscard]] Vector operator()(const Vector& x) const;

  /// The field -v; its trajectories are those of v run backwards.
  [[nodiscard]] FieldSpec reversed() const;

  /// Round-trippable spec string in the command-line mini-language.
  [[nodiscard]] std::string describe() const;

 private:
  FieldSpec(FieldKind kind, int dim) : kind_(kind), dim_(dim) {}

  FieldKind kind_;
  int dim_;
  Matrix a_;
  Vector b_;
  Real sign_ = 1;
};

/// Parses `spiral2d`, `twist3d`, `linear:a11,a12,...`, `constant:v1,...`
/// and `affine:a11,...,ann,b1,...,bn` (row-major matrix entries).
FieldSpec parse_field_spec(std::string_view text);

struct Ball {
  Vector center;
  Real radius = 0;
};

enum class LipschitzMethod { analytic, sampled };

std::string_view lipschitz_method_name(LipschitzMethod method);

/// Sampled estimates are maxima of difference quotients, hence lower bounds
/// of the true constant on the region.
struct LipschitzEstimate {
  Real K = 0;
  Ball region;
  LipschitzMethod method = LipschitzMethod::sampled;
  std::size_t sample_count = 0;
};

/// Largest singular value.
Real operator_norm(const Matrix& a);

LipschitzEstimate estimate_lipschitz(const FieldSpec& f, const Ball& region, std::size_t n,
                                     std::uint64_t seed);

/// Maximum of |v(x) - v(y)| / |x - y| over n uniform random pairs in the
/// region, regardless of the field kind.
LipschitzEstimate sample_lipschitz(const FieldSpec& f, const Ball& region, std::size_t n,
                                   std::uint64_t seed);

}  // namespace rotlip
