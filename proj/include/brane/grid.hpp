#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace brane {

/// Uniform periodic grid in 1 or 2 dimensions. Point index = i0 + sizes[0] * i1.
class Grid {
public:
    Grid() = default;
    Grid(std::vector<int> sizes, std::vector<double> lengths);

    int dimension() const noexcept { return static_cast<int>(sizes_.size()); }
    int size(int axis) const { return sizes_.at(static_cast<std::size_t>(axis - 1)); }
    double length(int axis) const { return lengths_.at(static_cast<std::size_t>(axis - 1)); }
    double spacing(int axis) const { return length(axis) / size(axis); }
    double min_spacing() const;
    double cell_volume() const;
    std::size_t points() const noexcept { return points_; }
    const std::vector<int>& sizes() const noexcept { return sizes_; }
    const std::vector<double>& lengths() const noexcept { return lengths_; }

    /// Coordinate x_axis of a point (cell-vertex placement, x = i * spacing).
    double coordinate(std::size_t point, int axis) const;
    /// Grid index along `axis` of a point.
    int index(std::size_t point, int axis) const;
    /// Neighbor of `point` shifted by `offset` cells along `axis`, wrapping periodically.
    std::size_t shifted(std::size_t point, int axis, int offset) const;

private:
    std::vector<int> sizes_;
    std::vector<double> lengths_;
    std::size_t points_ = 0;
};

/// Per-point vector of `components` doubles, point-major.
struct Field {
    Grid grid;
    int components = 0;
    std::vector<double> values;

    Field() = default;
    Field(Grid g, int ncomp)
        : grid(std::move(g)), components(ncomp),
          values(grid.points() * static_cast<std::size_t>(ncomp), 0.0)
    {
    }

    std::span<double> at(std::size_t point)
    {
        return {values.data() + point * static_cast<std::size_t>(components),
                static_cast<std::size_t>(components)};
    }
    std::span<const double> at(std::size_t point) const
    {
        return {values.data() + point * static_cast<std::size_t>(components),
                static_cast<std::size_t>(components)};
    }
    double& operator()(std::size_t point, int comp)
    {
        return values[point * static_cast<std::size_t>(components) + static_cast<std::size_t>(comp)];
    }
    double operator()(std::size_t point, int comp) const
    {
        return values[point * static_cast<std::size_t>(components) + static_cast<std::size_t>(comp)];
    }

    bool all_finite() const;
};

/// Central difference of order 2 or 4 along `axis` (1-based), periodic. Throws
/// ConfigError for other orders.
Field derivative(const Field& f, int axis, int order, int threads = 1);
void derivative_into(const Field& f, int axis, int order, Field& out, int threads = 1);

/// Dissipative fourth-difference filter u -= strength * δ⁴u / 16 along every axis.
void apply_filter(Field& f, double strength);

/// Calls fn(begin, end) on contiguous chunks of [0, count). Each index is
/// processed by exactly one call, so per-index results do not depend on `threads`.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn);

} // namespace brane

#include "brane/detail/parallel.hpp"
