#pragma once

// Discrete geometry of parametrized n-surfaces in R^{m+n}: induced metric,
// mean-curvature velocity, tangency, and the small-time comparison between the
// extremal-surface evolution and mean curvature flow.

#include "brane/grid.hpp"
#include "brane/solver.hpp"

#include <string>
#include <vector>

namespace brane {

/// X(x) = B x + Y(x) with Y periodic on the grid. B is (m+n) x n.
struct EmbeddingField {
    Matrix<double> base;
    Field periodic; // m+n components

    int ambient() const noexcept { return periodic.components; }
    const Grid& grid() const noexcept { return periodic.grid; }
    /// Full position X at a grid point.
    std::vector<double> position(std::size_t p) const;
};

/// Graph X = (x, u(x)) from m height components.
EmbeddingField graph_embedding(const Field& heights);
/// Planar circle of radius r, parametrized by u = 2π x / L over a 1-d grid.
EmbeddingField circle_embedding(const Grid& grid, double radius);

struct MetricField {
    Field g;       // n*n components, row-major
    Field inverse; // n*n components
    std::vector<double> det;
};

/// ∂_i X for every i (n fields of m+n components).
std::vector<Field> tangents(const EmbeddingField& e, int order, int threads = 1);

/// g_ij = <∂_i X, ∂_j X>, det g, g^{ij}. Throws DegenerateMetricError when det g <= 0.
MetricField induced_metric(const EmbeddingField& e, int order, int threads = 1);

/// g^{-1/2} ∂_i(√g g^{ij} ∂_j X^M), m+n components per point.
Field mcf_velocity(const EmbeddingField& e, int order, int threads = 1);

/// max over points and i of |<velocity, ∂_i X>|.
double tangency_residual(const EmbeddingField& e, int order, int threads = 1);

/// Removes the tangential part that moves the first n coordinates, so the
/// graph coordinates x stay fixed: w = vel − c_i ∂_i X with (w)^k = 0, k <= n.
Field graph_gauge_velocity(const EmbeddingField& e, const Field& velocity, int order,
                           int threads = 1);

/// ∂_θ√g + √g|V|² − ∂_i(√g g^{ij} h_j) − √g h_i h_j g^{ij} with V the mcf
/// velocity, h_i = <V, ∂_i X> and ∂_θ√g = √g g^{ij}<∂_i V, ∂_j X>. Linf.
double mcf_g_residual(const EmbeddingField& e, int order, int threads = 1);

/// 0.25 min Δx² λmin(g) (λmin(g) / λmax(g)) over the grid.
double stable_dtheta(const EmbeddingField& e, int order, int threads = 1);

/// X ← X + dθ V. Throws DomainError above stable_dtheta, BlowUpError on non-finite output.
EmbeddingField mcf_step(const EmbeddingField& e, double dtheta, int order, int threads = 1);

/// Mean distance to the centroid.
double mean_radius(const EmbeddingField& e);
/// Half the peak-to-peak range of height component `alpha` (1-based).
double height_amplitude(const EmbeddingField& e, int alpha);

struct LimitTestOptions {
    int order = 4;
    int substeps = 4;
    int threads = 1;
};

/// Evolves the augmented system from V = 0 graph data to t = dt, forms
/// a = 2 (X(dt) − X(0)) / dt² for the heights, and returns its Linf distance to
/// the graph-gauge mcf velocity of X(0). Throws ConfigError when V ≠ 0.
double acceleration_limit_test(int m, const Grid& grid, const GraphSpec& spec, double dt,
                               const LimitTestOptions& options = {});

struct OrderRow {
    double dt = 0.0;
    double err = 0.0;
    std::optional<double> order;
};
/// Observed orders log(e_k / e_{k+1}) / log(dt_k / dt_{k+1}); first row has none.
std::vector<OrderRow> observed_orders(const std::vector<double>& dts,
                                      const std::vector<double>& errs);

struct McfCompareRow {
    double t = 0.0;
    std::optional<double> err_acceleration;
    double tangency = 0.0;
    double radius_or_amplitude = 0.0;
};

std::string mcf_csv_header();
std::string mcf_csv_row(const McfCompareRow& row);

struct ReferenceRun {
    std::vector<McfCompareRow> rows;
    std::vector<double> exact;  // √(R0² − 2θ) for circles, A0 e^{−θ k²} for graphs
    double dtheta = 0.0;
};

/// Explicit mcf evolution to theta_end with dθ = factor * min Δx² (shortened so
/// that an integer number of steps lands on each of `outputs` equally spaced times).
ReferenceRun reference_evolution(const EmbeddingField& e, bool circle, double theta_end,
                                 int outputs, double factor, double wave_number, int order,
                                 int threads = 1);

} // namespace brane
