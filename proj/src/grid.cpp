#include "brane/grid.hpp"

#include "brane/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace brane {

Grid::Grid(std::vector<int> sizes, std::vector<double> lengths)
    : sizes_(std::move(sizes)), lengths_(std::move(lengths))
{
    if (sizes_.empty() || sizes_.size() > 2) {
        throw ConfigError("grid: only 1 or 2 spatial dimensions are supported");
    }
    if (sizes_.size() != lengths_.size()) {
        throw ConfigError("grid: sizes and lengths differ in length");
    }
    points_ = 1;
    for (std::size_t a = 0; a < sizes_.size(); ++a) {
        if (sizes_[a] < 8) {
            throw ConfigError("grid: at least 8 points per axis required, got " +
                              std::to_string(sizes_[a]));
        }
        if (!(lengths_[a] > 0.0) || !std::isfinite(lengths_[a])) {
            throw ConfigError("grid: lengths must be positive and finite");
        }
        points_ *= static_cast<std::size_t>(sizes_[a]);
    }
}

double Grid::min_spacing() const
{
    double out = spacing(1);
    for (int a = 2; a <= dimension(); ++a) {
        out = std::min(out, spacing(a));
    }
    return out;
}

double Grid::cell_volume() const
{
    double out = 1.0;
    for (int a = 1; a <= dimension(); ++a) {
        out *= spacing(a);
    }
    return out;
}

int Grid::index(std::size_t point, int axis) const
{
    const auto n0 = static_cast<std::size_t>(sizes_[0]);
    return axis == 1 ? static_cast<int>(point % n0) : static_cast<int>(point / n0);
}

double Grid::coordinate(std::size_t point, int axis) const
{
    return index(point, axis) * spacing(axis);
}

std::size_t Grid::shifted(std::size_t point, int axis, int offset) const
{
    const int n = size(axis);
    const int i = index(point, axis);
    int k = (i + offset) % n;
    if (k < 0) {
        k += n;
    }
    if (axis == 1) {
        return point - static_cast<std::size_t>(i) + static_cast<std::size_t>(k);
    }
    const auto n0 = static_cast<std::size_t>(sizes_[0]);
    return point + (static_cast<std::size_t>(k) - static_cast<std::size_t>(i)) * n0;
}

bool Field::all_finite() const
{
    return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

void derivative_into(const Field& f, int axis, int order, Field& out, int threads)
{
    if (order != 2 && order != 4) {
        throw ConfigError("derivative: unsupported stencil order " + std::to_string(order));
    }
    if (axis < 1 || axis > f.grid.dimension()) {
        throw DomainError("derivative: axis out of range");
    }
    if (out.values.size() != f.values.size() || out.components != f.components) {
        out = Field(f.grid, f.components);
    }
    const double h = f.grid.spacing(axis);
    const auto ncomp = static_cast<std::size_t>(f.components);
    parallel_for(f.grid.points(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const double* up1 = f.values.data() + f.grid.shifted(p, axis, 1) * ncomp;
            const double* um1 = f.values.data() + f.grid.shifted(p, axis, -1) * ncomp;
            double* o = out.values.data() + p * ncomp;
            if (order == 2) {
                const double scale = 1.0 / (2.0 * h);
                for (std::size_t c = 0; c < ncomp; ++c) {
                    o[c] = (up1[c] - um1[c]) * scale;
                }
            } else {
                const double* up2 = f.values.data() + f.grid.shifted(p, axis, 2) * ncomp;
                const double* um2 = f.values.data() + f.grid.shifted(p, axis, -2) * ncomp;
                const double scale = 1.0 / (12.0 * h);
                for (std::size_t c = 0; c < ncomp; ++c) {
                    o[c] = (-up2[c] + 8.0 * up1[c] - 8.0 * um1[c] + um2[c]) * scale;
                }
            }
        }
    });
}

Field derivative(const Field& f, int axis, int order, int threads)
{
    Field out(f.grid, f.components);
    derivative_into(f, axis, order, out, threads);
    return out;
}

void apply_filter(Field& f, double strength)
{
    if (strength == 0.0) {
        return;
    }
    const auto ncomp = static_cast<std::size_t>(f.components);
    for (int axis = 1; axis <= f.grid.dimension(); ++axis) {
        const Field src = f;
        for (std::size_t p = 0; p < f.grid.points(); ++p) {
            const double* u0 = src.values.data() + p * ncomp;
            const double* up1 = src.values.data() + f.grid.shifted(p, axis, 1) * ncomp;
            const double* um1 = src.values.data() + f.grid.shifted(p, axis, -1) * ncomp;
            const double* up2 = src.values.data() + f.grid.shifted(p, axis, 2) * ncomp;
            const double* um2 = src.values.data() + f.grid.shifted(p, axis, -2) * ncomp;
            double* o = f.values.data() + p * ncomp;
            for (std::size_t c = 0; c < ncomp; ++c) {
                const double d4 = up2[c] - 4.0 * up1[c] + 6.0 * u0[c] - 4.0 * um1[c] + um2[c];
                o[c] = u0[c] - strength * d4 / 16.0;
            }
        }
    }
}

} // namespace brane
