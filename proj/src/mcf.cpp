#include "brane/mcf.hpp"

#include "brane/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace brane {

std::vector<double> EmbeddingField::position(std::size_t p) const
{
    const Grid& gr = grid();
    std::vector<double> x(static_cast<std::size_t>(ambient()));
    for (int mm = 0; mm < ambient(); ++mm) {
        double v = periodic(p, mm);
        for (int i = 1; i <= gr.dimension(); ++i) {
            v += base(mm, i - 1) * gr.coordinate(p, i);
        }
        x[static_cast<std::size_t>(mm)] = v;
    }
    return x;
}

EmbeddingField graph_embedding(const Field& heights)
{
    const int n = heights.grid.dimension();
    const int m = heights.components;
    EmbeddingField e{Matrix<double>(m + n, n), Field(heights.grid, m + n)};
    for (int i = 0; i < n; ++i) {
        e.base(i, i) = 1.0;
    }
    for (std::size_t p = 0; p < heights.grid.points(); ++p) {
        for (int a = 0; a < m; ++a) {
            e.periodic(p, n + a) = heights(p, a);
        }
    }
    return e;
}

EmbeddingField circle_embedding(const Grid& grid, double radius)
{
    if (grid.dimension() != 1) {
        throw DomainError("circle_embedding: needs a 1-d grid");
    }
    EmbeddingField e{Matrix<double>(2, 1), Field(grid, 2)};
    for (std::size_t p = 0; p < grid.points(); ++p) {
        const double u = 2.0 * std::numbers::pi * grid.coordinate(p, 1) / grid.length(1);
        e.periodic(p, 0) = radius * std::cos(u);
        e.periodic(p, 1) = radius * std::sin(u);
    }
    return e;
}

std::vector<Field> tangents(const EmbeddingField& e, int order, int threads)
{
    const int n = e.grid().dimension();
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        Field t = derivative(e.periodic, i, order, threads);
        for (std::size_t p = 0; p < t.grid.points(); ++p) {
            for (int mm = 0; mm < e.ambient(); ++mm) {
                t(p, mm) += e.base(mm, i - 1);
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += a[k] * b[k];
    }
    return s;
}

MetricField metric_from_tangents(const std::vector<Field>& t)
{
    const Grid& grid = t.front().grid;
    const int n = static_cast<int>(t.size());
    MetricField out{Field(grid, n * n), Field(grid, n * n), std::vector<double>(grid.points())};
    for (std::size_t p = 0; p < grid.points(); ++p) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                out.g(p, i * n + j) = dot(t[static_cast<std::size_t>(i)].at(p),
                                          t[static_cast<std::size_t>(j)].at(p));
            }
        }
        double det = 0.0;
        if (n == 1) {
            det = out.g(p, 0);
            out.inverse(p, 0) = 1.0 / det;
        } else {
            det = out.g(p, 0) * out.g(p, 3) - out.g(p, 1) * out.g(p, 2);
            out.inverse(p, 0) = out.g(p, 3) / det;
            out.inverse(p, 1) = -out.g(p, 1) / det;
            out.inverse(p, 2) = -out.g(p, 2) / det;
            out.inverse(p, 3) = out.g(p, 0) / det;
        }
        if (!(det > 0.0)) {
            throw DegenerateMetricError("induced metric: det g = " + format_double(det) +
                                        " at point " + std::to_string(p));
        }
        out.det[p] = det;
    }
    return out;
}

// Σ_i ∂_i(q_i) for n fields q_i of equal shape.
Field divergence(const std::vector<Field>& q, int order, int threads)
{
    Field out(q.front().grid, q.front().components);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const Field d = derivative(q[i], static_cast<int>(i) + 1, order, threads);
        for (std::size_t k = 0; k < out.values.size(); ++k) {
            out.values[k] += d.values[k];
        }
    }
    return out;
}

// √g g^{ij} v_j for per-point n-vectors, returned as n single-purpose fields.
std::vector<Field> raise_weighted(const MetricField& metric, const std::vector<Field>& v)
{
    const int n = static_cast<int>(v.size());
    const int comps = v.front().components;
    std::vector<Field> out(static_cast<std::size_t>(n), Field(v.front().grid, comps));
    for (std::size_t p = 0; p < v.front().grid.points(); ++p) {
        const double sg = std::sqrt(metric.det[p]);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double w = sg * metric.inverse(p, i * n + j);
                for (int c = 0; c < comps; ++c) {
                    out[static_cast<std::size_t>(i)](p, c) += w * v[static_cast<std::size_t>(j)](p, c);
                }
            }
        }
    }
    return out;
}

Field velocity_from(const std::vector<Field>& t, const MetricField& metric, int order, int threads)
{
    Field vel = divergence(raise_weighted(metric, t), order, threads);
    for (std::size_t p = 0; p < vel.grid.points(); ++p) {
        const double inv = 1.0 / std::sqrt(metric.det[p]);
        for (int c = 0; c < vel.components; ++c) {
            vel(p, c) *= inv;
        }
    }
    return vel;
}

// h_i = <V, ∂_i X> as n one-component fields.
std::vector<Field> tangential_parts(const Field& vel, const std::vector<Field>& t)
{
    std::vector<Field> h;
    for (const auto& ti : t) {
        Field hi(vel.grid, 1);
        for (std::size_t p = 0; p < vel.grid.points(); ++p) {
            hi(p, 0) = dot(vel.at(p), ti.at(p));
        }
        h.push_back(std::move(hi));
    }
    return h;
}

} // namespace

MetricField induced_metric(const EmbeddingField& e, int order, int threads)
{
    return metric_from_tangents(tangents(e, order, threads));
}

Field mcf_velocity(const EmbeddingField& e, int order, int threads)
{
    const auto t = tangents(e, order, threads);
    return velocity_from(t, metric_from_tangents(t), order, threads);
}

double tangency_residual(const EmbeddingField& e, int order, int threads)
{
    const auto t = tangents(e, order, threads);
    const Field vel = velocity_from(t, metric_from_tangents(t), order, threads);
    double out = 0.0;
    for (const auto& h : tangential_parts(vel, t)) {
        for (double x : h.values) {
            out = std::max(out, std::abs(x));
        }
    }
    return out;
}

Field graph_gauge_velocity(const EmbeddingField& e, const Field& velocity, int order, int threads)
{
    const auto t = tangents(e, order, threads);
    const int n = e.grid().dimension();
    Field out = velocity;
    for (std::size_t p = 0; p < velocity.grid.points(); ++p) {
        Eigen::MatrixXd jac(n, n);
        Eigen::VectorXd rhs(n);
        for (int k = 0; k < n; ++k) {
            rhs(k) = velocity(p, k);
            for (int i = 0; i < n; ++i) {
                jac(k, i) = t[static_cast<std::size_t>(i)](p, k);
            }
        }
        const Eigen::VectorXd c = jac.partialPivLu().solve(rhs);
        for (int mm = 0; mm < velocity.components; ++mm) {
            for (int i = 0; i < n; ++i) {
                out(p, mm) -= c(i) * t[static_cast<std::size_t>(i)](p, mm);
            }
        }
    }
    return out;
}

double mcf_g_residual(const EmbeddingField& e, int order, int threads)
{
    const auto t = tangents(e, order, threads);
    const int n = static_cast<int>(t.size());
    const auto metric = metric_from_tangents(t);
    const Field vel = velocity_from(t, metric, order, threads);
    const auto h = tangential_parts(vel, t);
    const Field div = divergence(raise_weighted(metric, h), order, threads);
    std::vector<Field> dv;
    for (int i = 1; i <= n; ++i) {
        dv.push_back(derivative(vel, i, order, threads));
    }
    double out = 0.0;
    for (std::size_t p = 0; p < vel.grid.points(); ++p) {
        const double sg = std::sqrt(metric.det[p]);
        double rate = 0.0;
        double hh = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double gij = metric.inverse(p, i * n + j);
                rate += gij * dot(dv[static_cast<std::size_t>(i)].at(p), t[static_cast<std::size_t>(j)].at(p));
                hh += gij * h[static_cast<std::size_t>(i)](p, 0) * h[static_cast<std::size_t>(j)](p, 0);
            }
        }
        const double v2 = dot(vel.at(p), vel.at(p));
        const double r = sg * rate + sg * v2 - div(p, 0) - sg * hh;
        out = std::max(out, std::abs(r));
    }
    return out;
}

double stable_dtheta(const EmbeddingField& e, int order, int threads)
{
    const auto metric = induced_metric(e, order, threads);
    const int n = e.grid().dimension();
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t p = 0; p < e.grid().points(); ++p) {
        if (n == 1) {
            lo = std::min(lo, metric.g(p, 0));
            hi = std::max(hi, metric.g(p, 0));
        } else {
            const double a = metric.g(p, 0);
            const double b = metric.g(p, 1);
            const double d = metric.g(p, 3);
            const double mid = 0.5 * (a + d);
            const double rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
            lo = std::min(lo, mid - rad);
            hi = std::max(hi, mid + rad);
        }
    }
    const double dx = e.grid().min_spacing();
    return 0.25 * dx * dx * lo * (lo / hi);
}

EmbeddingField mcf_step(const EmbeddingField& e, double dtheta, int order, int threads)
{
    if (!(dtheta > 0.0)) {
        throw DomainError("mcf_step: dtheta must be positive");
    }
    const double bound = stable_dtheta(e, order, threads);
    if (dtheta > bound) {
        throw DomainError("mcf_step: dtheta " + format_double(dtheta) +
                          " above the stability bound " + format_double(bound));
    }
    const Field vel = mcf_velocity(e, order, threads);
    EmbeddingField out = e;
    for (std::size_t k = 0; k < out.periodic.values.size(); ++k) {
        out.periodic.values[k] += dtheta * vel.values[k];
    }
    if (!out.periodic.all_finite()) {
        throw BlowUpError("mcf_step: non-finite embedding", dtheta);
    }
    return out;
}

double mean_radius(const EmbeddingField& e)
{
    const std::size_t count = e.grid().points();
    std::vector<double> centroid(static_cast<std::size_t>(e.ambient()), 0.0);
    std::vector<std::vector<double>> pts;
    pts.reserve(count);
    for (std::size_t p = 0; p < count; ++p) {
        pts.push_back(e.position(p));
        for (std::size_t c = 0; c < centroid.size(); ++c) {
            centroid[c] += pts.back()[c] / static_cast<double>(count);
        }
    }
    double sum = 0.0;
    for (const auto& x : pts) {
        double r2 = 0.0;
        for (std::size_t c = 0; c < centroid.size(); ++c) {
            r2 += (x[c] - centroid[c]) * (x[c] - centroid[c]);
        }
        sum += std::sqrt(r2);
    }
    return sum / static_cast<double>(count);
}

double height_amplitude(const EmbeddingField& e, int alpha)
{
    const int comp = e.grid().dimension() + alpha - 1;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t p = 0; p < e.grid().points(); ++p) {
        lo = std::min(lo, e.periodic(p, comp));
        hi = std::max(hi, e.periodic(p, comp));
    }
    return 0.5 * (hi - lo);
}

double acceleration_limit_test(int m, const Grid& grid, const GraphSpec& spec, double dt,
                               const LimitTestOptions& options)
{
    for (const auto& mode : spec.velocity) {
        if (mode.amplitude != 0.0) {
            throw ConfigError("acceleration limit test: initial velocity must vanish");
        }
    }
    if (!(dt > 0.0) || options.substeps < 1) {
        throw ConfigError("acceleration limit test: dt must be positive, substeps >= 1");
    }
    const StateLayout layout(m, grid.dimension());
    const auto init = make_initial_data(layout, grid, spec, 0.05);
    const int dim = layout.dim();

    Field state(grid, dim + m);
    for (std::size_t p = 0; p < grid.points(); ++p) {
        const auto w = init.W.at(p);
        std::copy(w.begin(), w.end(), state.at(p).begin());
    }
    AugmentedRhs rhs(layout, options.order, options.threads);
    rhs.set_carry_height(true);
    const RhsFn fn = [&rhs](const Field& u, Field& out) { rhs(u, out); };
    const double h = dt / options.substeps;
    for (int s = 0; s < options.substeps; ++s) {
        state = rk4_step(state, h, fn, s * h);
    }

    const EmbeddingField e = graph_embedding(init.height);
    const Field reference =
        graph_gauge_velocity(e, mcf_velocity(e, options.order, options.threads), options.order,
                             options.threads);
    const int n = grid.dimension();
    double err = 0.0;
    for (std::size_t p = 0; p < grid.points(); ++p) {
        for (int a = 0; a < m; ++a) {
            const double accel = 2.0 * state(p, dim + a) / (dt * dt);
            err = std::max(err, std::abs(accel - reference(p, n + a)));
        }
    }
    return err;
}

std::vector<OrderRow> observed_orders(const std::vector<double>& dts, const std::vector<double>& errs)
{
    if (dts.size() != errs.size()) {
        throw DomainError("observed_orders: dt and error lists differ in length");
    }
    std::vector<OrderRow> out;
    for (std::size_t k = 0; k < dts.size(); ++k) {
        OrderRow row{dts[k], errs[k], std::nullopt};
        if (k > 0 && errs[k] > 0.0 && errs[k - 1] > 0.0) {
            row.order = std::log(errs[k - 1] / errs[k]) / std::log(dts[k - 1] / dts[k]);
        }
        out.push_back(row);
    }
    return out;
}

std::string mcf_csv_header() { return "t,err_acceleration_Linf,tangency_residual,radius_or_amplitude"; }

std::string mcf_csv_row(const McfCompareRow& row)
{
    std::ostringstream os;
    os << format_double(row.t) << ',';
    if (row.err_acceleration) {
        os << format_double(*row.err_acceleration);
    }
    os << ',' << format_double(row.tangency) << ',' << format_double(row.radius_or_amplitude);
    return os.str();
}

ReferenceRun reference_evolution(const EmbeddingField& e, bool circle, double theta_end,
                                 int outputs, double factor, double wave_number, int order,
                                 int threads)
{
    if (!(theta_end > 0.0) || outputs < 1 || !(factor > 0.0)) {
        throw ConfigError("mcf reference: theta_end, outputs and dtheta factor must be positive");
    }
    const double dx = e.grid().min_spacing();
    const double interval = theta_end / outputs;
    const auto steps = static_cast<int>(std::ceil(interval / (factor * dx * dx) - 1e-12));
    ReferenceRun run;
    run.dtheta = interval / steps;

    auto measure = [&](const EmbeddingField& x) {
        return circle ? mean_radius(x) : height_amplitude(x, 1);
    };
    EmbeddingField x = e;
    const double start = measure(x);
    for (int k = 0; k <= outputs; ++k) {
        if (k > 0) {
            for (int s = 0; s < steps; ++s) {
                x = mcf_step(x, run.dtheta, order, threads);
            }
        }
        const double theta = k * interval;
        run.rows.push_back({theta, std::nullopt, tangency_residual(x, order, threads), measure(x)});
        run.exact.push_back(circle ? std::sqrt(std::max(0.0, start * start - 2.0 * theta))
                                   : start * std::exp(-theta * wave_number * wave_number));
    }
    return run;
}

} // namespace brane
