#pragma once

#include <span>

#include "edsim/scenario.hpp"
#include "edsim/types.hpp"

namespace edsim {

struct RiskBreakdown {
  double sd_component = 0.0;
  double ei_component = 0.0;
  double total = 0.0;
};

/// Gaussian risk seen by the threat at `point` from static defenses and from
/// the (already pruned) anticipated interceptor positions.
RiskBreakdown risk_density(const Vec2& point, std::span<const Vec2> defenses, std::span<const Vec2> ei_points,
                           const FieldParams& fields);

struct BarrierCost {
  double pac = 0.0;  // patrol adherence
  double htc = 0.0;  // HVA tether
  double total = 0.0;
};

/// Zero inside the radius, w * (d - r)^2 outside.
double radial_barrier(double distance, double radius, double weight);

BarrierCost barrier_cost(const Vec2& position, const Vec2& patrol_center, const Vec2& hva, const FieldParams& fields);

}  // namespace edsim
