#include "crem/report.hpp"

#include "crem/format.hpp"

#include <cmath>

namespace crem {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Violation: return "VIOLATION";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Violation: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

Json number_json(double v) {
  if (!std::isfinite(v)) return format_double(v);  // "inf" / "nan" as strings
  // Parse the shortest round-trip text so the emitted JSON number is exactly it.
  return Json::parse(format_double(v));
}

Json point_json(Point2 p) { return Json::array({number_json(p.x), number_json(p.y)}); }

Json Report::to_json() const {
  Json j;
  j["command"] = command;
  j["inputs"] = inputs;
  j["verdict"] = to_string(verdict);
  j["witnesses"] = witnesses;
  j["metrics"] = metrics;
  j["seed"] = seed;
  j["settings"] = settings;
  j["notes"] = notes;
  j["wall_time_s"] = number_json(wall_time_s);
  return j;
}

}  // namespace crem
