#pragma once

#include "sparsegrid/sum_tree.hpp"
#include "sparsegrid/types.hpp"

#include <optional>
#include <vector>

namespace sparsegrid {

struct GaussParams {
  double tau = 7.0;
  double sigmaScale = 2.0;  // divisor of the distance inside the Gaussian
  int cutoffRadius = 12;    // Euclidean radius, in pixels, of the suppression kernel
  // When every remaining weight underflows to zero, draw uniformly among the
  // remaining cells instead of throwing DegenerateField.
  bool uniformFallback = true;

  /// Weight multiplier applied to a cell at distance d from a drawn point.
  double factor(double d) const;
  double log_factor(double d_squared) const;

  /// Throws InvalidParams if tau or sigmaScale are not positive or if the
  /// factor just beyond the cutoff differs from 1 by 1e-12 or more.
  void validate() const;
};

/// Discrete distribution over grid cells proportional to the product of
/// suppression factors around all previously drawn cells. Stored as log-weights
/// (drawn cells hold -inf) with a partial-sum tree over exp(log-weight) for
/// O(log n) weighted draws.
class ProbabilityField {
 public:
  ProbabilityField(GridDims dims, GaussParams params = {});

  const GridDims& dims() const { return dims_; }
  const GaussParams& params() const { return params_; }

  double log_weight(Coord c) const { return logw_[linear_index(dims_, c)]; }
  double weight(Coord c) const { return weights_.get(linear_index(dims_, c)); }
  double total_weight() const { return weights_.total(); }
  std::size_t remaining() const { return static_cast<std::size_t>(available_.total()); }
  bool is_drawn(Coord c) const { return available_.get(linear_index(dims_, c)) == 0; }

  /// Multiplies in the suppression factor of a newly drawn cell and zeroes it.
  /// Throws AlreadySampled if the cell was drawn before.
  void update(Coord drawn);

  /// Cell with cumulative weight interval containing u * total, u in [0, 1).
  /// Empty when the total weight is zero.
  std::optional<Coord> sample(double u) const;

  /// Uniform choice among cells not yet drawn. Requires remaining() > 0.
  Coord sample_remaining(double u) const;

 private:
  struct KernelTap {
    int dx;
    int dy;
    double logFactor;
  };

  GridDims dims_;
  GaussParams params_;
  std::vector<KernelTap> kernel_;
  std::vector<double> logw_;
  SumTree<double> weights_;
  SumTree<int> available_;
};

}  // namespace sparsegrid
