#include "sparsegrid/probability_field.hpp"

#include "sparsegrid/error.hpp"

#include <cmath>
#include <limits>

namespace sparsegrid {

double GaussParams::log_factor(double d_squared) const {
  return tau * std::log1p(-std::exp(-d_squared / (sigmaScale * sigmaScale)));
}

double GaussParams::factor(double d) const { return std::exp(log_factor(d * d)); }

void GaussParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::InvalidParams, "tau must be positive");
  if (!(sigmaScale > 0.0) || !std::isfinite(sigmaScale)) {
    throw Error(ErrorCode::InvalidParams, "sigmaScale must be positive");
  }
  if (cutoffRadius < 1) throw Error(ErrorCode::InvalidParams, "cutoffRadius must be at least 1");
  // Nearest lattice distance outside the kernel is sqrt(R^2 + 1).
  const double first_excluded = static_cast<double>(cutoffRadius) * cutoffRadius + 1.0;
  if (-std::expm1(log_factor(first_excluded)) >= 1e-12) {
    throw Error(ErrorCode::InvalidParams, "cutoffRadius too small for tau/sigmaScale");
  }
}

ProbabilityField::ProbabilityField(GridDims dims, GaussParams params)
    : dims_(dims),
      params_(params),
      logw_(dims.cells(), 0.0),
      weights_(dims.cells(), 1.0),
      available_(dims.cells(), 1) {
  if (dims.width < 1 || dims.height < 1) throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  params_.validate();
  const int r = params_.cutoffRadius;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const int d2 = dx * dx + dy * dy;
      if (d2 == 0 || d2 > r * r) continue;
      kernel_.push_back({dx, dy, params_.log_factor(static_cast<double>(d2))});
    }
  }
}

void ProbabilityField::update(Coord drawn) {
  if (!in_bounds(dims_, drawn)) throw Error(ErrorCode::OutOfBounds, "update outside grid");
  const std::size_t center = linear_index(dims_, drawn);
  if (available_.get(center) == 0) throw Error(ErrorCode::AlreadySampled, "cell drawn twice");

  constexpr double kMinusInf = -std::numeric_limits<double>::infinity();
  logw_[center] = kMinusInf;
  weights_.set(center, 0.0);
  available_.set(center, 0);

  for (const KernelTap& tap : kernel_) {
    const Coord q{drawn.x + tap.dx, drawn.y + tap.dy};
    if (!in_bounds(dims_, q)) continue;
    const std::size_t i = linear_index(dims_, q);
    if (logw_[i] == kMinusInf) continue;
    logw_[i] += tap.logFactor;
    weights_.set(i, std::exp(logw_[i]));
  }
}

std::optional<Coord> ProbabilityField::sample(double u) const {
  const double total = weights_.total();
  if (!(total > 0.0)) return std::nullopt;
  return coord_of(dims_, weights_.find(u * total));
}

Coord ProbabilityField::sample_remaining(double u) const {
  const int left = available_.total();
  if (left <= 0) throw Error(ErrorCode::DegenerateField, "no cells remain");
  auto k = static_cast<int>(u * left);
  if (k >= left) k = left - 1;
  return coord_of(dims_, available_.find(k));
}

}  // namespace sparsegrid
