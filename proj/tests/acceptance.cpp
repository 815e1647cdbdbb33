// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here.

#include "brane/flux.hpp"
#include "brane/mcf.hpp"
#include "brane/solver.hpp"
#include "brane/verify.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace brane;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Tolerances.
constexpr double min_order = 1.8;
constexpr double verify_seconds = 10.0;
constexpr double constraint_abs_fine = 1e-5;
constexpr double oracle_abs_fine = 1e-5;
constexpr double n2_seconds = 120.0;
constexpr double eig_tol = 1e-10;
constexpr double degeneracy_tol = 1e-6;
constexpr double degeneracy_step = 1e-5;
constexpr double energy_drift_tol = 1e-8;
constexpr double circle_rel_tol = 0.01;

int failures = 0;

void report(int criterion, bool ok, const std::string& detail)
{
    std::printf("criterion %d %s: %s\n", criterion, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        ++failures;
    }
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double order_of(double coarse, double fine) { return std::log2(coarse / fine); }

struct OrderCheck {
    bool ok = true;
    std::string text;

    // Exact zeros at both resolutions pass trivially and are reported as such.
    void add(const std::string& name, double coarse, double fine)
    {
        if (!text.empty()) {
            text += ", ";
        }
        if (coarse == 0.0 && fine == 0.0) {
            text += name + " identically 0";
            return;
        }
        const double q = order_of(coarse, fine);
        ok = ok && std::isfinite(q) && q >= min_order;
        text += name + " order " + fmt(q);
    }
};

SolverConfig string_config(int points)
{
    SolverConfig c;
    c.m = 1;
    c.n = 1;
    c.sizes = {points};
    c.lengths = {two_pi};
    c.scheme.cfl = 0.4;
    c.t_end = 1.0;
    c.output_cadence = 1.0;
    c.oracle_compare = true;
    c.initial.height = {FourierMode{1, {1}, 0.1, 0.0}};
    return c;
}

SolverConfig membrane_config(int m, int points)
{
    SolverConfig c;
    c.m = m;
    c.n = 2;
    c.sizes = {points, points};
    c.lengths = {two_pi, two_pi};
    c.scheme.cfl = 0.4;
    c.t_end = 1.0;
    c.output_cadence = 1.0;
    c.oracle_compare = true;
    // Modes with unequal weights in x and y, so no mixed derivative vanishes by symmetry.
    c.initial.height = {FourierMode{1, {1, 0}, 0.1, 0.0}, FourierMode{1, {0, 1}, 0.1, 0.3},
                        FourierMode{1, {1, 1}, 0.05, 0.0}};
    if (m >= 2) {
        c.initial.height.push_back(FourierMode{2, {1, 1}, 0.08, 0.2});
    }
    return c;
}

// ---------------------------------------------------------------------------

void criterion_1()
{
    const auto start = std::chrono::steady_clock::now();
    VerifyOptions options;
    options.samples = 200;
    options.seed = 20240601;
    const auto verify = run_verify(options);
    const double elapsed = seconds_since(start);
    long checks = 0;
    long failed = 0;
    for (const auto& s : verify.suites) {
        checks += s.passed + s.failed;
        failed += s.failed;
    }
    report(1, verify.all_passed() && elapsed < verify_seconds,
           std::to_string(verify.suites.size()) + " suites over 7 shapes, " + std::to_string(checks) +
               " exact checks, " + std::to_string(failed) + " failures, " + fmt(elapsed) + " s");
}

void criterion_2()
{
    std::mt19937_64 rng(2);
    const std::pair<int, int> shapes[] = {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {2, 3}};
    int asymmetric = 0;
    int nonlinear = 0;
    for (int s = 0; s < 500; ++s) {
        const auto [m, n] = shapes[s % 6];
        const StateLayout layout(m, n);
        const int j = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        std::vector<Rational> w1, w2, combo;
        for (int k = 0; k < layout.dim(); ++k) {
            w1.push_back(random_rational(rng));
            w2.push_back(random_rational(rng));
        }
        const Rational a = random_rational(rng);
        const Rational b = random_rational(rng);
        for (int k = 0; k < layout.dim(); ++k) {
            combo.push_back(a * w1[static_cast<std::size_t>(k)] + b * w2[static_cast<std::size_t>(k)]);
        }
        const auto m1 = assemble_A(layout, j, std::span<const Rational>(w1));
        const auto m2 = assemble_A(layout, j, std::span<const Rational>(w2));
        const auto mc = assemble_A(layout, j, std::span<const Rational>(combo));
        bool sym = true;
        bool lin = true;
        for (int p = 0; p < layout.dim(); ++p) {
            for (int q = 0; q < layout.dim(); ++q) {
                sym = sym && m1(p, q) == m1(q, p);
                lin = lin && mc(p, q) == a * m1(p, q) + b * m2(p, q);
            }
        }
        asymmetric += sym ? 0 : 1;
        nonlinear += lin ? 0 : 1;
    }
    bool dims = true;
    for (int m = 1; m <= 3; ++m) {
        for (int n = 1; n <= 2; ++n) {
            dims = dims && StateLayout(m, n).dim() == n + m + static_cast<int>(binomial(m + n, n));
        }
    }
    report(2, asymmetric == 0 && nonlinear == 0 && dims,
           "500 rational samples: " + std::to_string(asymmetric) + " asymmetric, " +
               std::to_string(nonlinear) + " nonlinear; dimension formula " +
               (dims ? "holds" : "violated") + " for m<=3, n<=2");
}

void criterion_3()
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> tau_dist(0.2, 1.5);
    double eig_err = 0.0;
    double degeneracy = 0.0;
    bool multiplicity = true;
    for (int m = 1; m <= 3; ++m) {
        const StateLayout layout(m, 1);
        for (int s = 0; s < 100; ++s) {
            std::vector<double> w(static_cast<std::size_t>(layout.dim()));
            for (auto& x : w) {
                x = u(rng);
            }
            w[0] = tau_dist(rng);
            const auto a = assemble_A(layout, 1, std::span<const double>(w));
            Eigen::MatrixXd ae(layout.dim(), layout.dim());
            for (int p = 0; p < layout.dim(); ++p) {
                for (int q = 0; q < layout.dim(); ++q) {
                    ae(p, q) = a(p, q);
                }
            }
            const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(ae).eigenvalues();
            const double v = w[static_cast<std::size_t>(layout.v_slot(1))];
            for (int k = 0; k < layout.dim(); ++k) {
                const double expected = k < m + 1 ? v - w[0] : v + w[0];
                eig_err = std::max(eig_err, std::abs(ev(k) - expected));
            }
            const auto ch = char_speeds_n1(layout, w);
            multiplicity = multiplicity && ch.plus.multiplicity == m + 1 && ch.minus.multiplicity == m + 1;
            degeneracy = std::max(degeneracy, linear_degeneracy_residual(layout, w, degeneracy_step));
        }
    }
    report(3, eig_err <= eig_tol && multiplicity && degeneracy <= degeneracy_tol,
           "m=1..3 x 100 states: max |eig - (v +- tau)| " + fmt(eig_err) + ", multiplicity m+1 " +
               (multiplicity ? "yes" : "no") + ", max degeneracy residual " + fmt(degeneracy));
}

void criteria_4_to_6()
{
    // n = 1, m = 1 at 128 and 256 points.
    const auto c128 = run(string_config(128));
    const auto c256 = run(string_config(256));
    const auto& a = c128.rows.back();
    const auto& b = c256.rows.back();

    const auto start = std::chrono::steady_clock::now();
    const auto m64 = run(membrane_config(1, 64));
    const auto m128 = run(membrane_config(1, 128));
    const double n2_elapsed = seconds_since(start);
    const auto& p = m64.rows.back();
    const auto& q = m128.rows.back();

    // Supplementary m = 2, n = 2 run where φ and ψ are not identically zero.
    const auto s32 = run(membrane_config(2, 32));
    const auto s64 = run(membrane_config(2, 64));
    const auto& x = s32.rows.back();
    const auto& y = s64.rows.back();

    OrderCheck n1;
    n1.add("lambda", a.lambda_Linf, b.lambda_Linf);
    n1.add("omega", a.omega_Linf, b.omega_Linf);
    n1.add("phi", a.phi_Linf, b.phi_Linf);
    n1.add("psi", a.psi_Linf, b.psi_Linf);
    const double abs_fine = std::max({b.lambda_Linf, b.omega_Linf, b.phi_Linf, b.psi_Linf});
    OrderCheck n2;
    n2.add("lambda", p.lambda_Linf, q.lambda_Linf);
    n2.add("omega", p.omega_Linf, q.omega_Linf);
    n2.add("phi", p.phi_Linf, q.phi_Linf);
    n2.add("psi", p.psi_Linf, q.psi_Linf);
    n2.add("sigma", p.sigma_Linf, q.sigma_Linf);
    OrderCheck extra;
    extra.add("phi", x.phi_Linf, y.phi_Linf);
    extra.add("psi", x.psi_Linf, y.psi_Linf);
    extra.add("sigma", x.sigma_Linf, y.sigma_Linf);
    std::printf("note: with m = 1 or n = 1 every phi/psi expansion has a single term that cancels the "
                "tau term, so both vanish exactly; m = n = 2 at 32^2/64^2 checks them instead\n");
    report(4,
           n1.ok && abs_fine <= constraint_abs_fine && n2.ok && n2_elapsed < n2_seconds && extra.ok,
           "n=1 128/256: " + n1.text + ", max at 256 " + fmt(abs_fine) + "; n=2 m=1 64^2/128^2: " +
               n2.text + " (" + fmt(n2_elapsed) + " s); m=n=2 32^2/64^2: " + extra.text);

    const double oracle_a = std::max(*a.oracle_F_err_Linf, *a.oracle_D_err_Linf);
    const double oracle_b = std::max(*b.oracle_F_err_Linf, *b.oracle_D_err_Linf);
    const double oracle_q = order_of(oracle_a, oracle_b);
    report(5, oracle_q >= min_order && oracle_b <= oracle_abs_fine,
           "reconstructed (F,D) vs original system: " + fmt(oracle_a) + " at 128, " + fmt(oracle_b) +
               " at 256, order " + fmt(oracle_q));

    const double e0 = c128.rows.front().total_energy;
    const double drift = std::abs(a.total_energy - e0) / e0;
    const double entropy_q = order_of(a.entropy_residual_L2, b.entropy_residual_L2);
    report(6, drift <= energy_drift_tol && entropy_q >= min_order,
           "energy drift " + fmt(drift) + " at 128; entropy residual " + fmt(a.entropy_residual_L2) +
               " -> " + fmt(b.entropy_residual_L2) + ", order " + fmt(entropy_q));
}

EmbeddingField sine_graph(int points)
{
    const Grid grid({points}, {two_pi});
    Field heights(grid, 1);
    for (std::size_t p = 0; p < grid.points(); ++p) {
        heights(p, 0) = 0.1 * std::sin(grid.coordinate(p, 1));
    }
    return graph_embedding(heights);
}

void criterion_7()
{
    GraphSpec spec;
    spec.height = {FourierMode{1, {1}, 0.1, 0.0}};
    const Grid grid({512}, {two_pi});
    const std::vector<double> dts{4e-3, 2e-3, 1e-3};
    std::vector<double> errs;
    for (double dt : dts) {
        errs.push_back(acceleration_limit_test(1, grid, spec, dt, LimitTestOptions{4, 4, 1}));
    }
    double accel_order = 1e9;
    for (const auto& row : observed_orders(dts, errs)) {
        if (row.order) {
            accel_order = std::min(accel_order, *row.order);
        }
    }

    const auto circle = reference_evolution(circle_embedding(Grid({256}, {two_pi}), 1.0), true,
                                            0.25, 10, 0.1, 1.0, 4);
    double circle_dev = 0.0;
    for (std::size_t k = 0; k < circle.rows.size(); ++k) {
        circle_dev = std::max(circle_dev,
                              std::abs(circle.rows[k].radius_or_amplitude - circle.exact[k]) / circle.exact[k]);
    }

    const double t64 = tangency_residual(sine_graph(64), 2);
    const double t128 = tangency_residual(sine_graph(128), 2);
    const double t256 = tangency_residual(sine_graph(256), 2);
    const double tangency_order = std::min(order_of(t64, t128), order_of(t128, t256));

    report(7, accel_order >= min_order && circle_dev <= circle_rel_tol && tangency_order >= min_order,
           "acceleration error " + fmt(errs[0]) + "/" + fmt(errs[1]) + "/" + fmt(errs[2]) +
               ", min order " + fmt(accel_order) + "; circle max relative deviation " + fmt(circle_dev) +
               " to theta=0.25; tangency min order " + fmt(tangency_order));
}

std::string diagnostics_text(const SolverConfig& c)
{
    std::ostringstream os;
    os << diagnostics_csv_header() << '\n';
    run(c, [&os](const DiagnosticsRow& row, const Field&) { os << diagnostics_csv_row(row) << '\n'; });
    return os.str();
}

std::string mcf_text()
{
    GraphSpec spec;
    spec.height = {FourierMode{1, {1}, 0.1, 0.0}};
    const Grid grid({128}, {two_pi});
    std::ostringstream os;
    os << mcf_csv_header() << '\n';
    for (double dt : {4e-3, 2e-3}) {
        const double err = acceleration_limit_test(1, grid, spec, dt, LimitTestOptions{4, 4, 2});
        os << mcf_csv_row({dt, err, 0.0, 0.1}) << '\n';
    }
    const auto ref = reference_evolution(sine_graph(64), false, 0.1, 4, 0.1, 1.0, 4, 2);
    for (const auto& row : ref.rows) {
        os << mcf_csv_row(row) << '\n';
    }
    return os.str();
}

void criterion_8()
{
    auto c1 = string_config(128);
    c1.output_cadence = 0.1;
    c1.scheme.threads = 2;
    auto c2 = membrane_config(2, 16);
    c2.output_cadence = 0.25;
    c2.scheme.threads = 3;
    const bool same1 = diagnostics_text(c1) == diagnostics_text(c1);
    const bool same2 = diagnostics_text(c2) == diagnostics_text(c2);
    const bool same3 = mcf_text() == mcf_text();

    VerifyOptions options;
    options.samples = 20;
    options.seed = 77;
    const bool same4 = run_verify(options).to_json().dump() == run_verify(options).to_json().dump();
    report(8, same1 && same2 && same3 && same4,
           std::string("repeated runs byte-identical: string diagnostics ") + (same1 ? "yes" : "no") +
               ", m=n=2 diagnostics " + (same2 ? "yes" : "no") + ", mcf csv " + (same3 ? "yes" : "no") +
               ", verify report " + (same4 ? "yes" : "no"));
}

} // namespace

int main()
{
    const auto start = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criteria_4_to_6();
    criterion_7();
    criterion_8();
    std::printf("acceptance: %d failure(s), %.1f s\n", failures, seconds_since(start));
    return failures == 0 ? 0 : 1;
}
