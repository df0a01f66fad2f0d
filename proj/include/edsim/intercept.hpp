#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "edsim/types.hpp"

namespace edsim {

class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Four-quadrant angle in (-pi, pi]. Throws GeometryError at the origin,
/// where the angle is undefined.
double arctan2_checked(double y, double x);

/// Bearing from `from` toward `to`.
double los_angle(const Vec2& from, const Vec2& to);

/// Closing speeds at or below this fraction of the interceptor speed count as
/// receding.
inline constexpr double kClosingEpsilon = 1e-9;

struct InterceptSolution {
  double gamma = 0.0;
  double heading = 0.0;            // interceptor heading
  double time_to_intercept = 0.0;  // seconds
  double closing_speed = 0.0;      // |v_rel|
};

enum class InfeasibleReason { kNone, kGamma, kReceding };

std::string_view to_string(InfeasibleReason reason);

struct InterceptResult {
  double gamma = 0.0;
  std::optional<InterceptSolution> solution;
  InfeasibleReason reason = InfeasibleReason::kNone;

  [[nodiscard]] bool feasible() const { return solution.has_value(); }
};

/// Constant-velocity intercept test between a threat at `threat` moving along
/// `attack_heading` at `attack_speed` and an interceptor at `interceptor`
/// flying straight at `intercept_speed`.
///
/// The interceptor heading nulls the line-of-sight-perpendicular component of
/// the relative velocity. |gamma| > 1 admits no such heading. Otherwise the
/// arcsin branch is tried first and its supplement second; a branch is only
/// accepted if the relative velocity actually closes the range. Throws
/// GeometryError for coincident positions or non-positive speeds.
InterceptResult solve_intercept(const Vec2& threat, const Vec2& interceptor, double attack_heading,
                                double attack_speed, double intercept_speed);

/// Convex blend of the attack heading toward `hva` and the circular mean of
/// the bearings from the threat to each proximal interceptor. The blend runs
/// along the shortest arc and the result is wrapped to (-pi, pi].
///
/// With psi = 0 the proximal list is ignored. If the evasion bearings cancel
/// (zero resultant) the attack heading is returned.
double terminal_heading(const Vec2& threat, const Vec2& hva, std::span<const Vec2> proximal_eis, double psi);

/// Straight-line track sampled on a fixed grid.
struct AnticipatedTrack {
  Vec2 origin = Vec2::Zero();
  double heading = 0.0;
  double speed = 0.0;
  double step = 0.0;
  std::vector<Vec2> positions;  // h + 1 samples, positions[0] == origin
};

/// Euler recursion p_{j+1} = p_j + step * speed * (cos h, sin h), j = 0..h-1.
AnticipatedTrack anticipate_line(const Vec2& origin, double heading, double speed, double step, int horizon);

}  // namespace edsim
