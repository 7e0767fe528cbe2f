#include "levydim/boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace levydim {

namespace {

constexpr std::uint64_t kMaxBoxesPerLevel = 1ull << 30;
constexpr std::uint64_t kMaxBruteForceTuples = 1ull << 24;

int default_level_hi(double mesh) {
    return static_cast<int>(std::floor(-std::log2(mesh) + 1e-9));
}

void check_levels(double mesh, int level_lo, int& level_hi) {
    const int finest = default_level_hi(mesh);
    if (level_hi < 0) level_hi = finest;
    if (level_lo < 0 || level_lo > level_hi)
        throw std::invalid_argument("box counting: invalid level range");
    if (level_hi > finest)
        throw std::invalid_argument("box counting: sample mesh is coarser than the requested level");
}

std::uint64_t boxes_per_side(double horizon, int level) {
    return static_cast<std::uint64_t>(std::ceil(horizon * std::exp2(level) - 1e-9));
}

std::uint64_t box_of(double t, int level, std::uint64_t n_boxes) {
    const auto b = static_cast<std::uint64_t>(t * std::exp2(level));
    return std::min(b, n_boxes - 1);
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double pair_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

} // namespace

double EpsRule::operator()(double h) const { return c * std::pow(h, exponent); }

OccupancyGrid zero_set_boxes(const FieldSample& field, const EpsRule& eps, int level_lo, int level_hi) {
    check_levels(field.mesh, level_lo, level_hi);
    const int n = field.param_dim;
    const std::uint64_t nodes = field.node_count();
    const std::uint64_t side = field.steps + 1;

    OccupancyGrid grid;
    grid.param_dim = n;
    grid.eps_rule = eps;

    for (int level = level_lo; level <= level_hi; ++level) {
        const double tol = eps(std::exp2(-level));
        const std::uint64_t n_boxes = boxes_per_side(field.horizon, level);
        std::uint64_t total_boxes = 1;
        for (int j = 0; j < n; ++j) {
            if (total_boxes > kMaxBoxesPerLevel / n_boxes)
                throw std::invalid_argument("box counting: level too fine for the parameter dimension");
            total_boxes *= n_boxes;
        }
        std::vector<bool> occupied(total_boxes, false);
        for (std::uint64_t flat = 0; flat < nodes; ++flat) {
            if (norm(field.value_at(flat)) > tol) continue;
            std::uint64_t rest = flat;
            std::uint64_t packed = 0;
            std::uint64_t stride = 1;
            // walk indices fastest-first; pack in matching mixed radix
            for (int j = n - 1; j >= 0; --j) {
                const std::uint64_t idx = rest % side;
                rest /= side;
                packed += box_of(static_cast<double>(idx) * field.mesh, level, n_boxes) * stride;
                stride *= n_boxes;
            }
            occupied[packed] = true;
        }
        grid.levels.push_back(level);
        grid.counts.push_back(static_cast<std::uint64_t>(
            std::count(occupied.begin(), occupied.end(), true)));
    }
    return grid;
}

namespace {

// k = 2, scalar values: for each node t of the second path, locate the first
// path's values within [y - eps, y + eps] by binary search on a sorted copy,
// and mark the (box(s), box(t)) pairs.
void mark_pairs_sorted(const FieldSample& a, const FieldSample& b, double tol, int level,
                       std::uint64_t n_boxes, std::vector<bool>& occupied) {
    const std::uint64_t side = a.steps + 1;
    std::vector<std::pair<double, std::uint64_t>> sorted(side);
    for (std::uint64_t s = 0; s < side; ++s) sorted[s] = {a.values[s], s};
    std::sort(sorted.begin(), sorted.end());

    std::vector<std::uint64_t> node_box(side);
    for (std::uint64_t s = 0; s < side; ++s)
        node_box[s] = box_of(static_cast<double>(s) * a.mesh, level, n_boxes);

    for (std::uint64_t t = 0; t < side; ++t) {
        const double y = b.values[t];
        auto it = std::lower_bound(sorted.begin(), sorted.end(),
                                   std::make_pair(y - tol, std::uint64_t{0}));
        const std::uint64_t tb = node_box[t];
        for (; it != sorted.end() && it->first <= y + tol; ++it)
            occupied[node_box[it->second] * n_boxes + tb] = true;
    }
}

void mark_tuples_brute(const std::vector<FieldSample>& paths, double tol, int level,
                       std::uint64_t n_boxes, std::vector<bool>& occupied) {
    const int k = static_cast<int>(paths.size());
    const std::uint64_t side = paths.front().steps + 1;
    std::vector<std::uint64_t> idx(static_cast<size_t>(k), 0);
    for (;;) {
        double max_dist = 0.0;
        for (int i = 0; i < k && max_dist <= tol; ++i)
            for (int j = i + 1; j < k; ++j)
                max_dist = std::max(max_dist, pair_distance(paths[static_cast<size_t>(i)].value_at(idx[static_cast<size_t>(i)]),
                                                            paths[static_cast<size_t>(j)].value_at(idx[static_cast<size_t>(j)])));
        if (max_dist <= tol) {
            std::uint64_t packed = 0;
            for (int j = 0; j < k; ++j)
                packed = packed * n_boxes +
                         box_of(static_cast<double>(idx[static_cast<size_t>(j)]) * paths.front().mesh,
                                level, n_boxes);
            occupied[packed] = true;
        }
        int j = k - 1;
        while (j >= 0 && ++idx[static_cast<size_t>(j)] == side) {
            idx[static_cast<size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
    }
}

} // namespace

OccupancyGrid multiple_time_boxes(const std::vector<FieldSample>& paths, const EpsRule& eps,
                                  int level_lo, int level_hi) {
    const int k = static_cast<int>(paths.size());
    if (k < 2) throw std::invalid_argument("multiple_time_boxes: needs k >= 2 paths");
    const FieldSample& first = paths.front();
    for (const auto& p : paths) {
        if (p.param_dim != 1)
            throw std::invalid_argument("multiple_time_boxes: paths must be one-parameter samples");
        if (p.steps != first.steps || p.mesh != first.mesh || p.horizon != first.horizon ||
            p.value_dim != first.value_dim)
            throw std::invalid_argument("multiple_time_boxes: paths must share one grid");
    }
    check_levels(first.mesh, level_lo, level_hi);

    const bool sorted_sweep = (k == 2 && first.value_dim == 1);
    if (!sorted_sweep) {
        const std::uint64_t side = first.steps + 1;
        std::uint64_t tuples = 1;
        for (int j = 0; j < k; ++j) {
            if (tuples > kMaxBruteForceTuples / side)
                throw std::invalid_argument(
                    "multiple_time_boxes: grid too large for the general tuple scan");
            tuples *= side;
        }
    }

    OccupancyGrid grid;
    grid.param_dim = k;
    grid.eps_rule = eps;
    for (int level = level_lo; level <= level_hi; ++level) {
        const double tol = eps(std::exp2(-level));
        const std::uint64_t n_boxes = boxes_per_side(first.horizon, level);
        std::uint64_t total_boxes = 1;
        for (int j = 0; j < k; ++j) {
            if (total_boxes > kMaxBoxesPerLevel / n_boxes)
                throw std::invalid_argument("box counting: level too fine for the parameter dimension");
            total_boxes *= n_boxes;
        }
        std::vector<bool> occupied(total_boxes, false);
        if (sorted_sweep)
            mark_pairs_sorted(paths[0], paths[1], tol, level, n_boxes, occupied);
        else
            mark_tuples_brute(paths, tol, level, n_boxes, occupied);
        grid.levels.push_back(level);
        grid.counts.push_back(static_cast<std::uint64_t>(
            std::count(occupied.begin(), occupied.end(), true)));
    }
    return grid;
}

BoxCountEstimate box_count_dimension(const OccupancyGrid& grid) {
    std::vector<double> xs, ys;
    std::uint64_t max_count = 0;
    for (size_t i = 0; i < grid.levels.size(); ++i) {
        if (grid.counts[i] == 0) continue;
        xs.push_back(static_cast<double>(grid.levels[i]));
        ys.push_back(std::log2(static_cast<double>(grid.counts[i])));
        max_count = std::max(max_count, grid.counts[i]);
    }
    if (xs.empty()) {
        BoxCountEstimate empty;
        empty.flags.too_few_boxes = true;
        return empty;
    }
    if (xs.size() < 4)
        throw std::invalid_argument("box_count_dimension: fewer than 4 usable levels");

    // drop coarsest and finest usable levels
    xs.erase(xs.begin());
    ys.erase(ys.begin());
    xs.pop_back();
    ys.pop_back();

    const size_t n = xs.size();
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }

    BoxCountEstimate est;
    est.levels_used = {static_cast<int>(xs.front()), static_cast<int>(xs.back())};
    est.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    est.r2 = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    est.flags.too_few_boxes = max_count < 32;
    est.flags.poor_fit = est.r2 < 0.95;
    return est;
}

} // namespace levydim
