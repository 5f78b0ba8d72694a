#pragma once

#include <stdexcept>

namespace crem {

/// Segment endpoints lie on the same side of the extended Cantor graph.
struct NoSignChange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A convexity certificate was requested for a point of K x K.
struct PointInsideObstacle : std::domain_error {
  using std::domain_error::domain_error;
};

/// The admissible stripe indices carry beta mass <= 9/40.
struct UnsatisfiableF : std::logic_error {
  using std::logic_error::logic_error;
};

/// Uniform betas need at least 21 gaps (1/(4N) < 1/80).
struct TooFewGaps : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// N * cap < 1/4: the capped betas cannot sum to 1/4.
struct InfeasibleCap : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace crem
