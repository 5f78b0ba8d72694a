#pragma once

#include "crem/convexity_checks.hpp"
#include "crem/counterexample.hpp"
#include "crem/plane_sets.hpp"
#include "crem/report.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace crem::cli {

/// Exit code for malformed invocations.
inline constexpr int kUsageError = 3;

/// Runs one subcommand. args excludes the program name. The report goes to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Argument parsers, exposed for tests. All throw std::invalid_argument.

/// "x,y".
Point2 parse_point(std::string_view text);
/// "holey", "koch", "cantor-dust" (uses depth), "square".
PlaneSetPtr parse_set(std::string_view text, unsigned depth);
/// "fat:<budget>:<depth>", e.g. "fat:1/12:5".
GapList parse_gaps(std::string_view text);
/// "uniform" or "proportional".
BetaPolicy parse_betas(std::string_view text);
/// "neg-xy", "sum-sq", "abs-sum", "hinge" (max(x+y-1,0)), "quad"
/// (x^2+3y^2-xy+x), "x2-minus-y2".
Fn2 builtin_function(std::string_view name);

}  // namespace crem::cli
