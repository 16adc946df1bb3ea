#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rotlip/bounds.hpp"
#include "rotlip/crofton.hpp"
#include "rotlip/curve.hpp"
#include "rotlip/gauss_link.hpp"

namespace rotlip {

/// Header `t,x1,...,xn`, one row per sample.
void write_curve_csv(std::ostream& out, const Curve& c);
void write_curve_csv(const std::filesystem::path& path, const Curve& c);

/// Parses the CSV format above. A curve whose end points coincide within
/// the closure tolerance is returned closed.
Curve read_curve_csv(std::istream& in);
Curve read_curve_csv(const std::filesystem::path& path);

/// Numbers are printed with 17 significant digits so output is stable.
std::string format_number(Real x);

/// Minimal ordered JSON object builder.
class JsonObject {
 public:
  JsonObject& add(std::string_view key, Real value);
  JsonObject& add(std::string_view key, long value);
  JsonObject& add(std::string_view key, int value) { return add(key, static_cast<long>(value)); }
  JsonObject& add(std::string_view key, bool value);
  JsonObject& add(std::string_view key, std::string_view value);
  JsonObject& add(std::string_view key, const char* value) { return add(key, std::string_view(value)); }
  JsonObject& add(std::string_view key, const JsonObject& value);
  JsonObject& add(std::string_view key, const std::vector<Real>& values);
  JsonObject& add_objects(std::string_view key, const std::vector<JsonObject>& values);
  JsonObject& add_raw(std::string_view key, std::string json);

  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string quote(std::string_view s);

JsonObject to_json(const RotationResult& r);
JsonObject to_json(const LinkingResult& r);
JsonObject to_json(const BoundReport& r);
JsonObject to_json(const EquatorWitness& w);
JsonObject to_json(const LengthEstimate& e);
JsonObject to_json(const LineCrosscheck& c);

}  // namespace rotlip
