#include "brane/mcf.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace brane;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

EmbeddingField sine_graph(int points, double eps, int wave = 1)
{
    const Grid grid({points}, {two_pi});
    Field heights(grid, 1);
    for (std::size_t p = 0; p < grid.points(); ++p) {
        heights(p, 0) = eps * std::sin(wave * grid.coordinate(p, 1));
    }
    return graph_embedding(heights);
}

EmbeddingField flat_graph(int m, std::vector<int> sizes)
{
    std::vector<double> lengths(sizes.size(), two_pi);
    return graph_embedding(Field(Grid(std::move(sizes), std::move(lengths)), m));
}

GraphSpec sine_spec(double eps)
{
    GraphSpec spec;
    spec.height = {FourierMode{1, {1}, eps, 0.0}};
    return spec;
}

} // namespace

TEST_CASE("induced metric")
{
    SUBCASE("flat graph")
    {
        const auto e = flat_graph(2, {8, 8});
        const auto metric = induced_metric(e, 2);
        for (std::size_t p = 0; p < e.grid().points(); ++p) {
            CHECK(metric.g(p, 0) == 1.0);
            CHECK(metric.g(p, 1) == 0.0);
            CHECK(metric.g(p, 3) == 1.0);
            CHECK(metric.det[p] == 1.0);
            CHECK(metric.inverse(p, 0) == 1.0);
        }
    }
    SUBCASE("unit circle is unit speed")
    {
        const Grid grid({256}, {two_pi});
        const auto metric = induced_metric(circle_embedding(grid, 1.0), 4);
        // Order-4 derivative error is Δu⁴/30 per factor.
        const double tol = std::pow(grid.spacing(1), 4) / 15.0 * 1.1;
        for (std::size_t p = 0; p < grid.points(); ++p) {
            CHECK(std::abs(metric.g(p, 0) - 1.0) <= tol);
        }
    }
    SUBCASE("sine graph matches the analytic metric")
    {
        const double eps = 0.1;
        for (int order : {2, 4}) {
            const auto e = sine_graph(128, eps);
            const auto metric = induced_metric(e, order);
            const double dx = e.grid().spacing(1);
            for (std::size_t p = 0; p < e.grid().points(); ++p) {
                const double c = std::cos(e.grid().coordinate(p, 1));
                const double tol = order == 2 ? 2.0 * eps * eps * dx * dx : 2.0 * eps * eps * std::pow(dx, 4);
                CHECK(std::abs(metric.g(p, 0) - (1.0 + eps * eps * c * c)) <= tol);
            }
        }
    }
    SUBCASE("degenerate parametrization")
    {
        const Grid grid({8}, {1.0});
        EmbeddingField e{Matrix<double>(2, 1), Field(grid, 2)};
        CHECK_THROWS_AS(induced_metric(e, 2), DegenerateMetricError);
        CHECK_THROWS_AS(mcf_velocity(e, 2), DegenerateMetricError);
    }
}

TEST_CASE("mean curvature velocity")
{
    SUBCASE("flat graph is at rest")
    {
        const auto e = flat_graph(1, {16, 16});
        for (double x : mcf_velocity(e, 2).values) {
            CHECK(x == 0.0);
        }
        CHECK(tangency_residual(e, 2) == 0.0);
    }
    SUBCASE("unit circle moves inward with unit speed")
    {
        const Grid grid({256}, {two_pi});
        const auto e = circle_embedding(grid, 1.0);
        const auto v = mcf_velocity(e, 4);
        for (std::size_t p = 0; p < grid.points(); ++p) {
            const auto x = e.position(p);
            CHECK(v(p, 0) == doctest::Approx(-x[0]).epsilon(1e-6).scale(1.0));
            CHECK(v(p, 1) == doctest::Approx(-x[1]).epsilon(1e-6).scale(1.0));
        }
        const double du = grid.spacing(1);
        CHECK(tangency_residual(circle_embedding(grid, 1.0), 2) <= du * du);
    }
    SUBCASE("heat flow at linear order in the amplitude")
    {
        // Residual against u'' shrinks faster than the amplitude itself.
        double prev = 0.0;
        for (double eps : {0.1, 0.05, 0.025}) {
            const auto e = sine_graph(256, eps);
            const auto v = mcf_velocity(e, 4);
            double diff = 0.0;
            for (std::size_t p = 0; p < e.grid().points(); ++p) {
                diff = std::max(diff, std::abs(v(p, 1) + eps * std::sin(e.grid().coordinate(p, 1))));
            }
            CHECK(diff <= eps * eps);
            if (prev > 0.0) {
                CHECK(prev / diff >= 4.0);
            }
            prev = diff;
        }
    }
}

TEST_CASE("tangency residual converges at second order")
{
    const double r128 = tangency_residual(sine_graph(128, 0.1), 2);
    const double r256 = tangency_residual(sine_graph(256, 0.1), 2);
    CHECK(r128 > 0.0);
    CHECK(r128 / r256 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("graph gauge velocity keeps the base coordinates fixed")
{
    const auto e = sine_graph(64, 0.2);
    const auto v = mcf_velocity(e, 4);
    const auto w = graph_gauge_velocity(e, v, 4);
    for (std::size_t p = 0; p < e.grid().points(); ++p) {
        CHECK(w(p, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    }
}

TEST_CASE("energy identity along mean curvature flow")
{
    double prev = 0.0;
    for (int points : {32, 64, 128}) {
        const double r = mcf_g_residual(sine_graph(points, 0.2), 2);
        if (prev > 0.0) {
            CHECK(std::log2(prev / r) >= 1.8);
        }
        prev = r;
    }
    CHECK(mcf_g_residual(flat_graph(1, {16}), 2) == 0.0);
}

TEST_CASE("explicit mcf step")
{
    SUBCASE("flat graph is unchanged")
    {
        const auto e = flat_graph(2, {16});
        const auto next = mcf_step(e, 0.5 * stable_dtheta(e, 2), 2);
        CHECK(next.periodic.values == e.periodic.values);
    }
    SUBCASE("circle shrinks at rate 1/R")
    {
        const Grid grid({128}, {two_pi});
        for (double radius : {1.0, 2.0}) {
            const auto e = circle_embedding(grid, radius);
            const double dtheta = 0.5 * stable_dtheta(e, 4);
            const auto next = mcf_step(e, dtheta, 4);
            const double rate = (mean_radius(e) - mean_radius(next)) / dtheta;
            CHECK(rate == doctest::Approx(1.0 / radius).epsilon(1e-3));
        }
    }
    SUBCASE("steps above the stability bound are refused")
    {
        const auto e = sine_graph(64, 0.1);
        CHECK_THROWS_AS(mcf_step(e, 2.0 * stable_dtheta(e, 2), 2), DomainError);
    }
    SUBCASE("stability bound on a flat graph")
    {
        const auto e = flat_graph(1, {32});
        const double dx = e.grid().spacing(1);
        CHECK(stable_dtheta(e, 2) == doctest::Approx(0.25 * dx * dx));
    }
}

TEST_CASE("reference evolutions")
{
    SUBCASE("shrinking circle over half its lifetime")
    {
        const Grid grid({256}, {two_pi});
        const auto run = reference_evolution(circle_embedding(grid, 1.0), true, 0.25, 5, 0.1, 1.0, 4);
        REQUIRE(run.rows.size() == 6);
        CHECK(run.rows.back().t == doctest::Approx(0.25));
        for (std::size_t k = 0; k < run.rows.size(); ++k) {
            CHECK(std::abs(run.rows[k].radius_or_amplitude - run.exact[k]) <= 0.01 * run.exact[k]);
        }
        CHECK(run.exact.back() == doctest::Approx(std::sqrt(0.5)));
    }
    SUBCASE("small sine graph decays like the heat equation")
    {
        const auto run = reference_evolution(sine_graph(64, 0.01), false, 0.5, 2, 0.1, 1.0, 4);
        REQUIRE(run.rows.size() == 3);
        CHECK(run.exact.back() == doctest::Approx(0.01 * std::exp(-0.5)));
        CHECK(std::abs(run.rows.back().radius_or_amplitude - run.exact.back()) <=
              1e-3 * run.exact.back());
    }
}

TEST_CASE("acceleration limit")
{
    SUBCASE("flat graph")
    {
        const Grid grid({32}, {two_pi});
        CHECK(acceleration_limit_test(1, grid, GraphSpec{}, 1e-2) <= 1e-10);
    }
    SUBCASE("moving initial data is rejected")
    {
        GraphSpec spec = sine_spec(0.1);
        spec.velocity = {FourierMode{1, {1}, 0.01, 0.0}};
        CHECK_THROWS_AS(acceleration_limit_test(1, Grid({32}, {two_pi}), spec, 1e-2), ConfigError);
    }
    SUBCASE("second order in dt on a fine grid")
    {
        const Grid grid({512}, {two_pi});
        const double e1 = acceleration_limit_test(1, grid, sine_spec(0.1), 4e-3);
        const double e2 = acceleration_limit_test(1, grid, sine_spec(0.1), 2e-3);
        CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
    }
}

TEST_CASE("observed orders and csv rows")
{
    const auto rows = observed_orders({4e-3, 2e-3, 1e-3}, {16e-6, 4e-6, 1e-6});
    REQUIRE(rows.size() == 3);
    CHECK_FALSE(rows[0].order.has_value());
    CHECK(*rows[1].order == doctest::Approx(2.0));
    CHECK(*rows[2].order == doctest::Approx(2.0));
    const auto single = observed_orders({1e-3}, {5e-7});
    REQUIRE(single.size() == 1);
    CHECK_FALSE(single[0].order.has_value());

    CHECK(mcf_csv_header() == "t,err_acceleration_Linf,tangency_residual,radius_or_amplitude");
    McfCompareRow row;
    row.t = 0.25;
    row.tangency = 0.5;
    row.radius_or_amplitude = 1.0;
    CHECK(mcf_csv_row(row) == "0.25,,0.5,1");
    row.err_acceleration = 0.125;
    CHECK(mcf_csv_row(row) == "0.25,0.125,0.5,1");
}
