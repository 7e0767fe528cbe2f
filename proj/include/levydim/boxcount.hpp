#pragma once

#include "levydim/simulate.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace levydim {

/// Occupancy tolerance eps(h) = c * h^exponent. The default exponent 1/a
/// (a = homogeneity degree of the base exponent) matches the process
/// modulus over a box of side h.
struct EpsRule {
    double c = 1.0;
    double exponent = 0.5;
    double operator()(double h) const;
};

/// Occupied-box counts of a simulated zero set or multiple-time set per
/// dyadic level (box side 2^-level).
struct OccupancyGrid {
    int param_dim = 1;
    EpsRule eps_rule;
    std::vector<int> levels;
    std::vector<std::uint64_t> counts;
};

struct BoxCountFlags {
    bool too_few_boxes = false;
    bool poor_fit = false;
};

struct BoxCountEstimate {
    double slope = 0.0;
    double r2 = 0.0;
    std::pair<int, int> levels_used{0, 0};
    BoxCountFlags flags;
};

/// Box at level l is occupied iff some grid node in it has |Z_t| <= eps(2^-l).
/// Levels default to 0 .. floor(log2(1/mesh)); a level finer than the sample
/// mesh is an error.
OccupancyGrid zero_set_boxes(const FieldSample& field, const EpsRule& eps, int level_lo = 0,
                             int level_hi = -1);

/// Box in k-parameter time space occupied iff the max pairwise distance
/// among the k path values is <= eps at some grid node of the box. Paths
/// must share one grid. k = 2 with scalar values uses a sorted sweep; the
/// general case falls back to enumerating tuples and is guarded by size.
OccupancyGrid multiple_time_boxes(const std::vector<FieldSample>& paths, const EpsRule& eps,
                                  int level_lo = 0, int level_hi = -1);

/// Least-squares slope of log2 count against level over the interior usable
/// levels (coarsest and finest discarded). Throws when 1..3 levels are
/// usable; an all-empty grid returns slope 0 flagged too_few_boxes.
BoxCountEstimate box_count_dimension(const OccupancyGrid& grid);

} // namespace levydim
