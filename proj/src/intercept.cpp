#include "edsim/intercept.hpp"

#include <cmath>
#include <numbers>

namespace edsim {

double arctan2_checked(double y, double x) {
  if (x == 0.0 && y == 0.0) throw GeometryError("arctan2 is undefined at the origin");
  return std::atan2(y, x);
}

double los_angle(const Vec2& from, const Vec2& to) {
  if (from == to) throw GeometryError("line-of-sight angle between coincident points");
  return arctan2_checked(to.y() - from.y(), to.x() - from.x());
}

std::string_view to_string(InfeasibleReason reason) {
  switch (reason) {
    case InfeasibleReason::kNone: return "none";
    case InfeasibleReason::kGamma: return "gamma";
    case InfeasibleReason::kReceding: return "receding";
  }
  return "unknown";
}

InterceptResult solve_intercept(const Vec2& threat, const Vec2& interceptor, double attack_heading,
                                double attack_speed, double intercept_speed) {
  if (!(attack_speed > 0.0) || !(intercept_speed > 0.0))
    throw GeometryError("intercept speeds must be positive");
  const double los = los_angle(interceptor, threat);
  const Vec2 r = threat - interceptor;
  const double range = r.norm();
  const Vec2 r_hat = r / range;

  InterceptResult result;
  result.gamma = attack_speed / intercept_speed * std::sin(wrap_angle(attack_heading - los));
  if (std::abs(result.gamma) > 1.0) {
    result.reason = InfeasibleReason::kGamma;
    return result;
  }

  const Vec2 v_threat = attack_speed * unit_vector(attack_heading);
  const double offset = std::asin(result.gamma);
  for (double branch : {los + offset, los + std::numbers::pi - offset}) {
    const double heading = wrap_angle(branch);
    const Vec2 v_rel = intercept_speed * unit_vector(heading) - v_threat;
    if (v_rel.dot(r_hat) > kClosingEpsilon * intercept_speed) {
      const double closing = v_rel.norm();
      result.solution = InterceptSolution{result.gamma, heading, range / closing, closing};
      return result;
    }
  }
  result.reason = InfeasibleReason::kReceding;
  return result;
}

double terminal_heading(const Vec2& threat, const Vec2& hva, std::span<const Vec2> proximal_eis, double psi) {
  const double attack = los_angle(threat, hva);
  if (psi == 0.0) return attack;
  if (proximal_eis.empty()) throw GeometryError("evasion heading needs at least one proximal interceptor");

  double sx = 0.0;
  double sy = 0.0;
  for (const Vec2& p : proximal_eis) {
    const double b = los_angle(threat, p);
    sx += std::cos(b);
    sy += std::sin(b);
  }
  if (std::hypot(sx, sy) < 1e-12 * static_cast<double>(proximal_eis.size())) return attack;
  const double evade = std::atan2(sy, sx);
  return wrap_angle(attack + psi * wrap_angle(evade - attack));
}

AnticipatedTrack anticipate_line(const Vec2& origin, double heading, double speed, double step, int horizon) {
  AnticipatedTrack track{origin, heading, speed, step, {}};
  track.positions.reserve(static_cast<std::size_t>(horizon) + 1);
  track.positions.push_back(origin);
  const Vec2 delta = step * speed * unit_vector(heading);
  for (int j = 0; j < horizon; ++j) track.positions.push_back(track.positions.back() + delta);
  return track;
}

}  // namespace edsim
