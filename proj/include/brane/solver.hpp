#pragma once

// Method-of-lines evolution of the augmented system on periodic grids, the
// independent integrator for the original (F, D) system, and diagnostics.

#include "brane/flux.hpp"
#include "brane/grid.hpp"
#include "brane/state.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace brane {

struct SchemeOptions {
    int order = 2;         // central-difference order, 2 or 4
    double cfl = 0.4;      // in (0, 1]
    double filter = 0.0;   // fourth-difference filter strength per step
    int threads = 1;
    double singular_eps = default_singular_eps;
};

/// One term amplitude * sin(2π k·x / L + phase) of X^{n+α} or V_α.
struct FourierMode {
    int component = 1; // α, 1-based
    std::vector<int> wave;
    double amplitude = 0.0;
    double phase = 0.0;
};

struct GraphSpec {
    std::vector<FourierMode> height;   // X^{n+α}(0, x)
    std::vector<FourierMode> velocity; // V_α(0, x) = ∂_t X^{n+α}(0, x)
};

struct SolverConfig {
    int m = 1;
    int n = 1;
    std::vector<int> sizes;
    std::vector<double> lengths;
    SchemeOptions scheme;
    double t_end = 1.0;
    double output_cadence = 1.0;
    GraphSpec initial;
    bool oracle_compare = false;
    double timelike_margin = 0.05;
};

struct DiagnosticsRow {
    double t = 0.0;
    double total_energy = 0.0;
    double entropy_residual_L2 = 0.0;
    double lambda_Linf = 0.0;
    double omega_Linf = 0.0;
    double phi_Linf = 0.0;
    double psi_Linf = 0.0;
    double sigma_Linf = 0.0;
    std::optional<double> oracle_F_err_Linf;
    std::optional<double> oracle_D_err_Linf;
};

/// Column order of the diagnostics CSV.
std::string diagnostics_csv_header();
/// One CSV line (no newline), 17 significant digits, empty optional columns.
std::string diagnostics_csv_row(const DiagnosticsRow& row);
/// Fixed 17-significant-digit rendering used by every text output.
std::string format_double(double x);

// ---------------------------------------------------------------------------
// Graph data helpers (determinant/adjugate path, no minors)

/// Energy-density quantities of the original system at one point.
struct OriginalPoint {
    double h = 0.0;
    double xi = 0.0;
    std::vector<double> P;        // n
    Matrix<double> xi_prime;      // m x n
};
OriginalPoint original_point(const Matrix<double>& f, std::span<const double> d);

/// D from (F, V): D = −sqrt(xi) ζ^{-1} V / sqrt(1 − Vᵀ ζ^{-1} V), ζ = I + F Fᵀ.
/// Throws ConfigError when 1 − Vᵀ ζ^{-1} V < margin (not time-like enough).
std::vector<double> momentum_from_velocity(const Matrix<double>& f, std::span<const double> v,
                                           double margin);
/// V = −(D + F P) / h, the inverse of momentum_from_velocity.
std::vector<double> velocity_from_momentum(const Matrix<double>& f, std::span<const double> d);

// ---------------------------------------------------------------------------
// Fields

struct InitialData {
    Field W;      // primitive augmented state
    Field graph;  // (F row-major, D) for the original system
    Field height; // X^{n+α}, m components
};

/// Samples the Fourier specification, lifts it onto the constraint manifold.
InitialData make_initial_data(const StateLayout& layout, const Grid& grid, const GraphSpec& spec,
                              double timelike_margin);

/// Pointwise evaluation of a Fourier sum and its gradient.
double fourier_value(const std::vector<FourierMode>& modes, int component, const Grid& grid,
                     std::span<const double> x);
std::vector<double> fourier_gradient(const std::vector<FourierMode>& modes, int component,
                                     const Grid& grid, std::span<const double> x);

/// Method-of-lines right-hand side of the augmented system.
class AugmentedRhs {
public:
    AugmentedRhs(StateLayout layout, int order, int threads = 1);

    const StateLayout& layout() const noexcept { return layout_; }
    /// ∂_t W. When `carry_height` the field has m extra trailing components X^{n+α}
    /// advanced with ∂_t X^{n+α} = V_α.
    void operator()(const Field& w, Field& out) const;
    void set_carry_height(bool on) noexcept { carry_height_ = on; }

private:
    StateLayout layout_;
    std::vector<SncTerm> terms_;
    int order_;
    int threads_;
    bool carry_height_ = false;
};

Field rhs_augmented(const StateLayout& layout, const Field& w, int order, int threads = 1);

/// ∂_t (F, D) of the original system in conservation form.
Field rhs_original(const StateLayout& layout, const Field& graph, int order, int threads = 1);

using RhsFn = std::function<void(const Field&, Field&)>;

/// Classical four-stage Runge–Kutta step. Throws BlowUpError on non-finite output.
Field rk4_step(const Field& u, double dt, const RhsFn& rhs, double t = 0.0);

/// cfl * min spacing / max coordinate speed; static fields fall back to cfl * min spacing.
double cfl_dt(const StateLayout& layout, const Field& w, double cfl);

struct SigmaField {
    IndexSet rows; // A'
    IndexSet cols; // I
    Field values;  // one component
};

/// σ_{A',I} = Σ_{i∈I} (-1)^{O_I(i)} ∂_i(m_{A',I∖i} / tau), 2 <= |I| = |A'| + 1 <= r + 1.
std::vector<SigmaField> sigma_residual(const StateLayout& layout, const Field& w, int order,
                                       double eps = default_singular_eps);
double sigma_linf(const std::vector<SigmaField>& sigma);

struct FieldConstraints {
    double lambda = 0.0;
    double omega = 0.0;
    double phi = 0.0;
    double psi = 0.0;
};
FieldConstraints constraint_linf(const StateLayout& layout, const Field& w);

double total_energy(const Field& w);

/// L2 norm of ∂_t S + Σ_j ∂_j(entropy flux) with ∂_t S from the semi-discrete rhs.
double entropy_residual_l2(const StateLayout& layout, const Field& w, int order, int threads = 1);

struct OracleError {
    double F = 0.0;
    double D = 0.0;
};
OracleError oracle_discrepancy(const StateLayout& layout, const Field& w, const Field& graph);

/// Flips the sign of d and v, the time-reversal symmetry of the system.
void reverse_time(const StateLayout& layout, Field& w);

struct RunResult {
    std::vector<DiagnosticsRow> rows;
    Field W;
    std::optional<Field> graph;
    double dt = 0.0;
    int steps = 0;
};

/// Output callback: diagnostics row plus the current primitive field.
using RunObserver = std::function<void(const DiagnosticsRow&, const Field&)>;

/// Validates, evolves to t_end with a fixed step, emits diagnostics at every
/// output time. Throws ConfigError before start and BlowUpError mid-run (rows
/// already emitted through `observer` remain valid).
RunResult run(const SolverConfig& config, const RunObserver& observer = {});

void validate(const SolverConfig& config);

/// Snapshot document: grid metadata, layout order, full W field.
nlohmann::json snapshot_json(const StateLayout& layout, const Field& w, double t);

} // namespace brane
