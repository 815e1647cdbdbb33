#include "brane/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace brane {

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string diagnostics_csv_header()
{
    return "t,total_energy,entropy_residual_L2,lambda_Linf,omega_Linf,phi_Linf,psi_Linf,"
           "sigma_Linf,oracle_F_err_Linf,oracle_D_err_Linf";
}

std::string diagnostics_csv_row(const DiagnosticsRow& row)
{
    std::ostringstream os;
    os << format_double(row.t) << ',' << format_double(row.total_energy) << ','
       << format_double(row.entropy_residual_L2) << ',' << format_double(row.lambda_Linf) << ','
       << format_double(row.omega_Linf) << ',' << format_double(row.phi_Linf) << ','
       << format_double(row.psi_Linf) << ',' << format_double(row.sigma_Linf) << ',';
    if (row.oracle_F_err_Linf) {
        os << format_double(*row.oracle_F_err_Linf);
    }
    os << ',';
    if (row.oracle_D_err_Linf) {
        os << format_double(*row.oracle_D_err_Linf);
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Graph data helpers

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& f)
{
    Eigen::MatrixXd out(f.rows(), f.cols());
    for (int r = 0; r < f.rows(); ++r) {
        for (int c = 0; c < f.cols(); ++c) {
            out(r, c) = f(r, c);
        }
    }
    return out;
}

} // namespace

OriginalPoint original_point(const Matrix<double>& f, std::span<const double> d)
{
    const int m = f.rows();
    const int n = f.cols();
    const Eigen::MatrixXd fe = to_eigen(f);
    const Eigen::Map<const Eigen::VectorXd> de(d.data(), static_cast<Eigen::Index>(d.size()));
    const Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n) + fe.transpose() * fe;
    OriginalPoint out;
    out.xi = s.determinant();
    const Eigen::MatrixXd z = out.xi * s.inverse();
    const Eigen::VectorXd p = fe.transpose() * de;
    out.P.assign(p.data(), p.data() + n);
    out.h = std::sqrt(de.squaredNorm() + p.squaredNorm() + out.xi);
    const Eigen::MatrixXd xp = fe * z;
    out.xi_prime = Matrix<double>(m, n);
    for (int a = 0; a < m; ++a) {
        for (int i = 0; i < n; ++i) {
            out.xi_prime(a, i) = xp(a, i);
        }
    }
    return out;
}

std::vector<double> momentum_from_velocity(const Matrix<double>& f, std::span<const double> v,
                                           double margin)
{
    const int m = f.rows();
    const Eigen::MatrixXd fe = to_eigen(f);
    const Eigen::Map<const Eigen::VectorXd> ve(v.data(), static_cast<Eigen::Index>(v.size()));
    const Eigen::MatrixXd zeta = Eigen::MatrixXd::Identity(m, m) + fe * fe.transpose();
    const Eigen::VectorXd y = zeta.ldlt().solve(ve);
    const double slack = 1.0 - ve.dot(y);
    if (!(slack >= margin)) {
        throw ConfigError("initial data is not time-like: 1 - V^T (I + F F^T)^{-1} V = " +
                          format_double(slack) + " < " + format_double(margin));
    }
    const double scale = -std::sqrt(zeta.determinant()) / std::sqrt(slack);
    std::vector<double> out(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        out[static_cast<std::size_t>(a)] = scale * y(a);
    }
    return out;
}

std::vector<double> velocity_from_momentum(const Matrix<double>& f, std::span<const double> d)
{
    const auto pt = original_point(f, d);
    std::vector<double> out(d.size());
    for (int a = 0; a < f.rows(); ++a) {
        double fp = 0.0;
        for (int i = 0; i < f.cols(); ++i) {
            fp += f(a, i) * pt.P[static_cast<std::size_t>(i)];
        }
        out[static_cast<std::size_t>(a)] = -(d[static_cast<std::size_t>(a)] + fp) / pt.h;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Initial data

namespace {

double mode_argument(const FourierMode& mode, const Grid& grid, std::span<const double> x)
{
    double arg = mode.phase;
    for (int j = 1; j <= grid.dimension(); ++j) {
        arg += 2.0 * std::numbers::pi * mode.wave[static_cast<std::size_t>(j - 1)] *
               x[static_cast<std::size_t>(j - 1)] / grid.length(j);
    }
    return arg;
}

std::vector<double> point_coordinates(const Grid& grid, std::size_t p)
{
    std::vector<double> x(static_cast<std::size_t>(grid.dimension()));
    for (int j = 1; j <= grid.dimension(); ++j) {
        x[static_cast<std::size_t>(j - 1)] = grid.coordinate(p, j);
    }
    return x;
}

} // namespace

double fourier_value(const std::vector<FourierMode>& modes, int component, const Grid& grid,
                     std::span<const double> x)
{
    double out = 0.0;
    for (const auto& mode : modes) {
        if (mode.component == component) {
            out += mode.amplitude * std::sin(mode_argument(mode, grid, x));
        }
    }
    return out;
}

std::vector<double> fourier_gradient(const std::vector<FourierMode>& modes, int component,
                                     const Grid& grid, std::span<const double> x)
{
    std::vector<double> out(static_cast<std::size_t>(grid.dimension()), 0.0);
    for (const auto& mode : modes) {
        if (mode.component != component) {
            continue;
        }
        const double c = mode.amplitude * std::cos(mode_argument(mode, grid, x));
        for (int j = 1; j <= grid.dimension(); ++j) {
            out[static_cast<std::size_t>(j - 1)] +=
                c * 2.0 * std::numbers::pi * mode.wave[static_cast<std::size_t>(j - 1)] /
                grid.length(j);
        }
    }
    return out;
}

InitialData make_initial_data(const StateLayout& layout, const Grid& grid, const GraphSpec& spec,
                              double timelike_margin)
{
    const int m = layout.m();
    const int n = layout.n();
    if (grid.dimension() != n) {
        throw ConfigError("initial data: grid dimension differs from n");
    }
    InitialData out{Field(grid, layout.dim()), Field(grid, m * n + m), Field(grid, m)};
    for (std::size_t p = 0; p < grid.points(); ++p) {
        const auto x = point_coordinates(grid, p);
        GraphData<double> g{Matrix<double>(m, n), std::vector<double>(static_cast<std::size_t>(m))};
        std::vector<double> v(static_cast<std::size_t>(m));
        for (int a = 1; a <= m; ++a) {
            out.height(p, a - 1) = fourier_value(spec.height, a, grid, x);
            const auto grad = fourier_gradient(spec.height, a, grid, x);
            for (int i = 1; i <= n; ++i) {
                g.F(a - 1, i - 1) = grad[static_cast<std::size_t>(i - 1)];
            }
            v[static_cast<std::size_t>(a - 1)] = fourier_value(spec.velocity, a, grid, x);
        }
        g.D = momentum_from_velocity(g.F, v, timelike_margin);
        const auto w = to_vector(to_primitive(lift(layout, g)));
        std::copy(w.begin(), w.end(), out.W.at(p).begin());
        auto gp = out.graph.at(p);
        std::copy(g.F.data().begin(), g.F.data().end(), gp.begin());
        std::copy(g.D.begin(), g.D.end(), gp.begin() + m * n);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Right-hand sides

AugmentedRhs::AugmentedRhs(StateLayout layout, int order, int threads)
    : layout_(std::move(layout)), terms_(compile_snc_terms(layout_)), order_(order),
      threads_(threads)
{
    if (order_ != 2 && order_ != 4) {
        throw ConfigError("unsupported stencil order " + std::to_string(order_));
    }
}

void AugmentedRhs::operator()(const Field& w, Field& out) const
{
    const int dim = layout_.dim();
    const int m = layout_.m();
    const int n = layout_.n();
    const int expected = dim + (carry_height_ ? m : 0);
    if (w.components != expected) {
        throw DomainError("AugmentedRhs: field has wrong component count");
    }
    if (out.components != w.components || out.values.size() != w.values.size()) {
        out = Field(w.grid, w.components);
    }
    std::vector<Field> grads(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        derivative_into(w, j, order_, grads[static_cast<std::size_t>(j - 1)], threads_);
    }
    parallel_for(w.grid.points(), threads_, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const auto wp = w.at(p);
            auto op = out.at(p);
            std::fill(op.begin(), op.end(), 0.0);
            for (const auto& t : terms_) {
                const double g = grads[static_cast<std::size_t>(t.axis - 1)](p, t.deriv);
                op[static_cast<std::size_t>(t.row)] -= t.sign * wp[static_cast<std::size_t>(t.coef)] * g;
            }
            if (carry_height_) {
                const double tau = wp[0];
                for (int a = 1; a <= m; ++a) {
                    double acc = wp[static_cast<std::size_t>(layout_.d_slot(a))];
                    for (int j = 1; j <= n; ++j) {
                        const int s = layout_.minor_slot(IndexSet(m, {a}), IndexSet(n, {j}));
                        acc += wp[static_cast<std::size_t>(s)] *
                               wp[static_cast<std::size_t>(layout_.v_slot(j))] / tau;
                    }
                    op[static_cast<std::size_t>(dim + a - 1)] = -acc;
                }
            }
        }
    });
}

Field rhs_augmented(const StateLayout& layout, const Field& w, int order, int threads)
{
    Field out(w.grid, w.components);
    AugmentedRhs(layout, order, threads)(w, out);
    return out;
}

Field rhs_original(const StateLayout& layout, const Field& graph, int order, int threads)
{
    const int m = layout.m();
    const int n = layout.n();
    const int ncomp = m * n + m;
    if (graph.components != ncomp) {
        throw DomainError("rhs_original: field has wrong component count");
    }
    Field out(graph.grid, ncomp);
    for (int i = 1; i <= n; ++i) {
        // Flux in direction i: F_{αi} row gets (D_α + F_{αj} P_j)/h, D_α row gets
        // (D_α P_i + ξ'_{αi})/h.
        Field flux(graph.grid, ncomp);
        parallel_for(graph.grid.points(), threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t p = begin; p < end; ++p) {
                const auto gp = graph.at(p);
                Matrix<double> f(m, n);
                for (int a = 0; a < m; ++a) {
                    for (int k = 0; k < n; ++k) {
                        f(a, k) = gp[static_cast<std::size_t>(a * n + k)];
                    }
                }
                const std::span<const double> d = gp.subspan(static_cast<std::size_t>(m * n));
                const auto pt = original_point(f, d);
                auto fp = flux.at(p);
                for (int a = 0; a < m; ++a) {
                    double fpj = 0.0;
                    for (int k = 0; k < n; ++k) {
                        fpj += f(a, k) * pt.P[static_cast<std::size_t>(k)];
                    }
                    fp[static_cast<std::size_t>(a * n + (i - 1))] =
                        (d[static_cast<std::size_t>(a)] + fpj) / pt.h;
                    fp[static_cast<std::size_t>(m * n + a)] =
                        (d[static_cast<std::size_t>(a)] * pt.P[static_cast<std::size_t>(i - 1)] +
                         pt.xi_prime(a, i - 1)) /
                        pt.h;
                }
            }
        });
        const Field div = derivative(flux, i, order, threads);
        for (std::size_t k = 0; k < out.values.size(); ++k) {
            out.values[k] -= div.values[k];
        }
    }
    return out;
}

Field rk4_step(const Field& u, double dt, const RhsFn& rhs, double t)
{
    if (!(dt > 0.0)) {
        throw DomainError("rk4_step: dt must be positive");
    }
    const std::size_t size = u.values.size();
    Field k1(u.grid, u.components), k2(u.grid, u.components), k3(u.grid, u.components),
        k4(u.grid, u.components);
    Field stage = u;
    rhs(u, k1);
    for (std::size_t k = 0; k < size; ++k) {
        stage.values[k] = u.values[k] + 0.5 * dt * k1.values[k];
    }
    rhs(stage, k2);
    for (std::size_t k = 0; k < size; ++k) {
        stage.values[k] = u.values[k] + 0.5 * dt * k2.values[k];
    }
    rhs(stage, k3);
    for (std::size_t k = 0; k < size; ++k) {
        stage.values[k] = u.values[k] + dt * k3.values[k];
    }
    rhs(stage, k4);
    Field out = u;
    for (std::size_t k = 0; k < size; ++k) {
        out.values[k] +=
            dt / 6.0 * (k1.values[k] + 2.0 * k2.values[k] + 2.0 * k3.values[k] + k4.values[k]);
    }
    if (!out.all_finite()) {
        throw BlowUpError("non-finite values after step ending at t = " + format_double(t + dt),
                          t + dt);
    }
    return out;
}

double cfl_dt(const StateLayout& layout, const Field& w, double cfl)
{
    if (!(cfl > 0.0 && cfl <= 1.0)) {
        throw ConfigError("cfl must lie in (0, 1]");
    }
    double smax = 0.0;
    for (std::size_t p = 0; p < w.grid.points(); ++p) {
        smax = std::max(smax, max_coordinate_speed(layout, w.at(p).first(
                                                               static_cast<std::size_t>(layout.dim()))));
    }
    const double h = w.grid.min_spacing();
    return smax > 0.0 ? cfl * h / smax : cfl * h;
}

// ---------------------------------------------------------------------------
// Diagnostics

std::vector<SigmaField> sigma_residual(const StateLayout& layout, const Field& w, int order,
                                       double eps)
{
    const int m = layout.m();
    const int n = layout.n();
    const int r = layout.minors().rank();
    std::vector<SigmaField> out;
    for (int k = 2; k <= std::min(n, r + 1); ++k) {
        for (const auto& rows : subsets_of_size(m, k - 1)) {
            for (const auto& cols : subsets_of_size(n, k)) {
                SigmaField sigma{rows, cols, Field(w.grid, 1)};
                for (int i : cols.elements()) {
                    const int slot = layout.minor_slot(rows, cols.without(i));
                    Field q(w.grid, 1);
                    for (std::size_t p = 0; p < w.grid.points(); ++p) {
                        const double tau = w(p, 0);
                        if (!(std::abs(tau) > eps)) {
                            throw SingularStateError("sigma_residual: |tau| <= eps");
                        }
                        q(p, 0) = w(p, slot) / tau;
                    }
                    const Field dq = derivative(q, i, order);
                    const double sign = parity_sign(ordinal(cols, i));
                    for (std::size_t p = 0; p < w.grid.points(); ++p) {
                        sigma.values(p, 0) += sign * dq(p, 0);
                    }
                }
                out.push_back(std::move(sigma));
            }
        }
    }
    return out;
}

double sigma_linf(const std::vector<SigmaField>& sigma)
{
    double out = 0.0;
    for (const auto& s : sigma) {
        for (double x : s.values.values) {
            out = std::max(out, std::abs(x));
        }
    }
    return out;
}

FieldConstraints constraint_linf(const StateLayout& layout, const Field& w)
{
    FieldConstraints out;
    const auto dim = static_cast<std::size_t>(layout.dim());
    for (std::size_t p = 0; p < w.grid.points(); ++p) {
        const auto res = constraint_residuals<double>(layout, w.at(p).first(dim));
        out.lambda = std::max(out.lambda, res.lambda_abs());
        out.omega = std::max(out.omega, res.omega_max());
        out.phi = std::max(out.phi, res.phi_max());
        out.psi = std::max(out.psi, res.psi_max());
    }
    return out;
}

double total_energy(const Field& w)
{
    double sum = 0.0;
    for (std::size_t p = 0; p < w.grid.points(); ++p) {
        sum += 1.0 / w(p, 0);
    }
    return sum * w.grid.cell_volume();
}

double entropy_residual_l2(const StateLayout& layout, const Field& w, int order, int threads)
{
    const auto dim = static_cast<std::size_t>(layout.dim());
    const int n = layout.n();
    Field primitive = w;
    if (w.components != layout.dim()) {
        primitive = Field(w.grid, layout.dim());
        for (std::size_t p = 0; p < w.grid.points(); ++p) {
            const auto src = w.at(p).first(dim);
            std::copy(src.begin(), src.end(), primitive.at(p).begin());
        }
    }
    const Field dw = rhs_augmented(layout, primitive, order, threads);
    Field flux(w.grid, n);
    std::vector<double> dsdt(w.grid.points());
    for (std::size_t p = 0; p < w.grid.points(); ++p) {
        const auto wp = primitive.at(p);
        const auto dp = dw.at(p);
        const double tau = wp[0];
        double q = 0.0;
        for (double x : wp) {
            q += x * x;
        }
        // S(W) = |W|^2 / (2 tau)
        double rate = (1.0 - q / (2.0 * tau * tau)) * dp[0];
        for (std::size_t k = 1; k < dim; ++k) {
            rate += wp[k] / tau * dp[k];
        }
        dsdt[p] = rate;
        const auto u = to_vector(to_conservative(primitive_from_vector<double>(layout, wp)));
        for (int j = 1; j <= n; ++j) {
            flux(p, j - 1) = entropy_flux<double>(layout, u, j);
        }
    }
    std::vector<double> residual = dsdt;
    for (int j = 1; j <= n; ++j) {
        Field component(w.grid, 1);
        for (std::size_t p = 0; p < w.grid.points(); ++p) {
            component(p, 0) = flux(p, j - 1);
        }
        const Field d = derivative(component, j, order, threads);
        for (std::size_t p = 0; p < w.grid.points(); ++p) {
            residual[p] += d(p, 0);
        }
    }
    double sum = 0.0;
    for (double r : residual) {
        sum += r * r;
    }
    return std::sqrt(sum * w.grid.cell_volume());
}

OracleError oracle_discrepancy(const StateLayout& layout, const Field& w, const Field& graph)
{
    const int m = layout.m();
    const int n = layout.n();
    const auto dim = static_cast<std::size_t>(layout.dim());
    OracleError out;
    for (std::size_t p = 0; p < w.grid.points(); ++p) {
        const auto g = reconstruct_graph<double>(layout, w.at(p).first(dim));
        const auto gp = graph.at(p);
        for (int a = 0; a < m; ++a) {
            for (int i = 0; i < n; ++i) {
                out.F = std::max(out.F,
                                 std::abs(g.F(a, i) - gp[static_cast<std::size_t>(a * n + i)]));
            }
            out.D = std::max(out.D, std::abs(g.D[static_cast<std::size_t>(a)] -
                                             gp[static_cast<std::size_t>(m * n + a)]));
        }
    }
    return out;
}

void reverse_time(const StateLayout& layout, Field& w)
{
    for (std::size_t p = 0; p < w.grid.points(); ++p) {
        for (int a = 1; a <= layout.m(); ++a) {
            w(p, layout.d_slot(a)) = -w(p, layout.d_slot(a));
        }
        for (int i = 1; i <= layout.n(); ++i) {
            w(p, layout.v_slot(i)) = -w(p, layout.v_slot(i));
        }
    }
}

// ---------------------------------------------------------------------------
// Driver

void validate(const SolverConfig& c)
{
    if (c.m < 1 || c.m > 3) {
        throw ConfigError("m: must lie in [1, 3]");
    }
    if (c.n < 1 || c.n > 2) {
        throw ConfigError("n: must lie in [1, 2]");
    }
    if (static_cast<int>(c.sizes.size()) != c.n || static_cast<int>(c.lengths.size()) != c.n) {
        throw ConfigError("grid: sizes and lengths need exactly n entries");
    }
    if (c.scheme.order != 2 && c.scheme.order != 4) {
        throw ConfigError("scheme.order: must be 2 or 4");
    }
    if (!(c.scheme.cfl > 0.0 && c.scheme.cfl <= 1.0)) {
        throw ConfigError("scheme.cfl: must lie in (0, 1]");
    }
    if (!(c.scheme.filter >= 0.0) || !std::isfinite(c.scheme.filter)) {
        throw ConfigError("scheme.filter: must be finite and non-negative");
    }
    if (c.scheme.threads < 1) {
        throw ConfigError("threads: must be at least 1");
    }
    if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) {
        throw ConfigError("t_end: must be positive and finite");
    }
    if (!(c.output_cadence > 0.0) || !std::isfinite(c.output_cadence)) {
        throw ConfigError("output_cadence: must be positive and finite");
    }
    const double outputs = c.t_end / c.output_cadence;
    if (std::abs(outputs - std::round(outputs)) > 1e-9 * std::max(1.0, outputs)) {
        throw ConfigError("output_cadence: t_end must be an integer multiple of the cadence");
    }
    if (!(c.timelike_margin > 0.0 && c.timelike_margin < 1.0)) {
        throw ConfigError("timelike_margin: must lie in (0, 1)");
    }
    for (const auto* modes : {&c.initial.height, &c.initial.velocity}) {
        for (const auto& mode : *modes) {
            if (mode.component < 1 || mode.component > c.m) {
                throw ConfigError("initial_data: mode component outside [1, m]");
            }
            if (static_cast<int>(mode.wave.size()) != c.n) {
                throw ConfigError("initial_data: wave vector needs n entries");
            }
            if (!std::isfinite(mode.amplitude) || !std::isfinite(mode.phase)) {
                throw ConfigError("initial_data: amplitude and phase must be finite");
            }
        }
    }
    // Grid construction checks sizes and lengths.
    (void)Grid(c.sizes, c.lengths);
}

namespace {

DiagnosticsRow diagnose(const StateLayout& layout, const Field& w, const Field* graph,
                        const SchemeOptions& scheme, double t)
{
    DiagnosticsRow row;
    row.t = t;
    row.total_energy = total_energy(w);
    row.entropy_residual_L2 = entropy_residual_l2(layout, w, scheme.order, scheme.threads);
    const auto c = constraint_linf(layout, w);
    row.lambda_Linf = c.lambda;
    row.omega_Linf = c.omega;
    row.phi_Linf = c.phi;
    row.psi_Linf = c.psi;
    row.sigma_Linf = sigma_linf(sigma_residual(layout, w, scheme.order, scheme.singular_eps));
    if (graph != nullptr) {
        const auto e = oracle_discrepancy(layout, w, *graph);
        row.oracle_F_err_Linf = e.F;
        row.oracle_D_err_Linf = e.D;
    }
    return row;
}

} // namespace

RunResult run(const SolverConfig& config, const RunObserver& observer)
{
    validate(config);
    const StateLayout layout(config.m, config.n);
    const Grid grid(config.sizes, config.lengths);
    auto init = make_initial_data(layout, grid, config.initial, config.timelike_margin);

    const double dt0 = cfl_dt(layout, init.W, config.scheme.cfl);
    const auto steps_per_output =
        static_cast<int>(std::ceil(config.output_cadence / dt0 - 1e-12));
    const double dt = config.output_cadence / steps_per_output;
    const auto outputs = static_cast<int>(std::lround(config.t_end / config.output_cadence));

    const AugmentedRhs augmented(layout, config.scheme.order, config.scheme.threads);
    const RhsFn rhs_w = [&augmented](const Field& u, Field& out) { augmented(u, out); };
    const RhsFn rhs_g = [&layout, &config](const Field& u, Field& out) {
        out = rhs_original(layout, u, config.scheme.order, config.scheme.threads);
    };

    RunResult result;
    result.dt = dt;
    result.W = std::move(init.W);
    if (config.oracle_compare) {
        result.graph = std::move(init.graph);
    }
    auto emit = [&](double t) {
        const Field* g = result.graph ? &*result.graph : nullptr;
        result.rows.push_back(diagnose(layout, result.W, g, config.scheme, t));
        if (observer) {
            observer(result.rows.back(), result.W);
        }
    };

    emit(0.0);
    for (int out = 1; out <= outputs; ++out) {
        for (int s = 0; s < steps_per_output; ++s) {
            const double t = ((out - 1) * steps_per_output + s) * dt;
            result.W = rk4_step(result.W, dt, rhs_w, t);
            apply_filter(result.W, config.scheme.filter);
            if (result.graph) {
                *result.graph = rk4_step(*result.graph, dt, rhs_g, t);
                apply_filter(*result.graph, config.scheme.filter);
            }
            ++result.steps;
        }
        emit(out * config.output_cadence);
    }
    return result;
}

nlohmann::json snapshot_json(const StateLayout& layout, const Field& w, double t)
{
    nlohmann::json doc;
    doc["t"] = t;
    doc["m"] = layout.m();
    doc["n"] = layout.n();
    doc["grid"] = {{"sizes", w.grid.sizes()}, {"lengths", w.grid.lengths()}};
    nlohmann::json slots = nlohmann::json::array();
    for (int s = 0; s < layout.dim(); ++s) {
        slots.push_back(layout.slot_name(s));
    }
    doc["slots"] = slots;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& pr : layout.minors().pairs()) {
        pairs.push_back({pr.rows.elements(), pr.cols.elements()});
    }
    doc["layout"] = pairs;
    nlohmann::json values = nlohmann::json::array();
    const auto dim = static_cast<std::size_t>(layout.dim());
    for (std::size_t p = 0; p < w.grid.points(); ++p) {
        const auto wp = w.at(p).first(dim);
        values.push_back(std::vector<double>(wp.begin(), wp.end()));
    }
    doc["W"] = values;
    return doc;
}

} // namespace brane
