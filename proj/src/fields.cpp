#include "edsim/fields.hpp"

#include <cmath>

namespace edsim {

namespace {

double gaussian_sum(const Vec2& point, std::span<const Vec2> sources, double sigma) {
  const double inv = 1.0 / (2.0 * sigma * sigma);
  double sum = 0.0;
  for (const Vec2& s : sources) sum += std::exp(-(point - s).squaredNorm() * inv);
  return sum;
}

}  // namespace

RiskBreakdown risk_density(const Vec2& point, std::span<const Vec2> defenses, std::span<const Vec2> ei_points,
                           const FieldParams& fields) {
  RiskBreakdown r;
  r.sd_component = fields.w_sd * gaussian_sum(point, defenses, fields.sigma_sd);
  r.ei_component = fields.w_ei * gaussian_sum(point, ei_points, fields.sigma_ei);
  r.total = r.sd_component + r.ei_component;
  return r;
}

double radial_barrier(double distance, double radius, double weight) {
  if (distance < radius) return 0.0;
  const double over = distance - radius;
  return weight * over * over;
}

BarrierCost barrier_cost(const Vec2& position, const Vec2& patrol_center, const Vec2& hva, const FieldParams& fields) {
  BarrierCost b;
  b.pac = radial_barrier((position - patrol_center).norm(), fields.r_pac, fields.w_pac);
  b.htc = radial_barrier((position - hva).norm(), fields.r_htc, fields.w_htc);
  b.total = b.pac + b.htc;
  return b;
}

}  // namespace edsim
