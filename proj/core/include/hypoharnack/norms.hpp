#pragma once

#include <limits>
#include <vector>

#include "hypoharnack/geometry.hpp"
#include "hypoharnack/grid.hpp"

namespace hypoharnack {

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

/// Fractional space-time cell weights of a region on a grid. Time level n >= 1
/// represents the slab (t_{n-1}, t_n]; interior cells get weight 1, boundary
/// cells the fraction of 16 fixed low-discrepancy samples that land inside.
struct RegionWeights {
  const Grid* grid = nullptr;
  std::vector<double> w; // (nt+1) * slice_size, level 0 all zero
  double measure = 0.0;  // integral of the weights (space-time volume)

  double at(int n, std::int64_t j) const {
    return w[static_cast<std::size_t>(n) * grid->slice_size() + j];
  }
};

/// Weights of the drift-aligned cylinder, optionally clipped to {t <= t_clip}.
RegionWeights cylinder_weights(const Grid& g, const Cylinder& c,
                               double t_clip = std::numeric_limits<double>::infinity());

/// Whole-box weights (1 on every slab level >= 1).
RegionWeights box_weights(const Grid& g);

/// Restrict weights to cells where pred(field value) holds.
RegionWeights intersect(const RegionWeights& w, const GridField& f, bool (*pred)(double));

/// Measure of {f > threshold} within the weighted region.
double measure_above(const RegionWeights& w, const GridField& f, double threshold);

/// L^p norm over the weighted region; p may be kInfExponent (max over cells
/// with positive weight). p >= 1 otherwise.
double lp_norm(const GridField& f, const RegionWeights& w, double p);

/// L^p norm of the pointwise product f*g over the region.
double lp_norm_product(const GridField& f, const GridField& g, const RegionWeights& w, double p);

/// max f over cells with positive weight (signed, not absolute).
double max_over(const GridField& f, const RegionWeights& w);
/// min f over cells with positive weight.
double min_over(const GridField& f, const RegionWeights& w);

/// integral of f over the region (no absolute value).
double integral(const GridField& f, const RegionWeights& w);

} // namespace hypoharnack
