#pragma once

#include "crem/geometry.hpp"
#include "crem/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace crem {

using Json = nlohmann::ordered_json;

enum class Verdict { Pass, Violation, Inconclusive };

const char* to_string(Verdict v);
/// Exit-code protocol: 0 PASS, 1 VIOLATION, 2 INCONCLUSIVE.
int exit_code(Verdict v);

/// Structured outcome of a verification pipeline. Field order is fixed so
/// serialized output is stable.
struct Report {
  std::string command;
  Json inputs = Json::object();
  Verdict verdict = Verdict::Inconclusive;
  Json witnesses = Json::array();
  Json metrics = Json::object();
  std::uint64_t seed = 0;
  Json settings = Json::object();
  Json notes = Json::array();
  double wall_time_s = 0.0;

  Json to_json() const;
};

/// Rationals serialize as "num/den" strings.
inline Json rational_json(const Rational& q) { return to_string(q); }
Json point_json(Point2 p);
/// Doubles are written through the shortest round-trip representation.
Json number_json(double v);

}  // namespace crem
