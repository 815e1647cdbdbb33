#include "brane/flux.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace brane {

std::vector<SncTerm> compile_snc_terms(const StateLayout& layout)
{
    std::vector<SncTerm> terms;
    for_each_snc_term(layout, [&terms](int row, int coef, int sign, int axis, int deriv) {
        terms.push_back({row, coef, sign, axis, deriv});
    });
    return terms;
}

namespace {

void require_n1(const StateLayout& layout, const char* who)
{
    if (layout.n() != 1) {
        throw DomainError(std::string(who) + ": requires n = 1");
    }
}

struct ConservativeFieldsN1 {
    std::vector<double> u;
    std::vector<std::vector<double>> plus;
    std::vector<std::vector<double>> minus;
};

// Characteristic fields of the n = 1 conservative system in U = (h, D, P, M) order.
ConservativeFieldsN1 conservative_fields_n1(const StateLayout& layout, std::span<const double> w,
                                            double eps)
{
    const auto wstate = primitive_from_vector<double>(layout, w);
    ConservativeFieldsN1 out;
    out.u = to_vector(to_conservative(wstate, eps));
    const int m = layout.m();
    const int p_slot = layout.v_slot(1);
    for (int sign : {+1, -1}) {
        auto& list = sign > 0 ? out.plus : out.minus;
        std::vector<double> r0 = out.u;
        r0[static_cast<std::size_t>(p_slot)] += sign;
        list.push_back(std::move(r0));
        for (int alpha = 1; alpha <= m; ++alpha) {
            std::vector<double> r(out.u.size(), 0.0);
            r[static_cast<std::size_t>(layout.d_slot(alpha))] = 1.0;
            r[static_cast<std::size_t>(layout.pair_slot(alpha - 1))] = sign;
            list.push_back(std::move(r));
        }
    }
    return out;
}

// Push a conservative direction through the map W = (1/h, D/h, P/h, M/h).
std::vector<double> to_primitive_direction(std::span<const double> u, std::span<const double> r)
{
    const double h = u[0];
    std::vector<double> out(r.size());
    out[0] = -r[0] / (h * h);
    for (std::size_t k = 1; k < r.size(); ++k) {
        out[k] = r[k] / h - u[k] * r[0] / (h * h);
    }
    return out;
}

double speed_n1(const StateLayout& layout, std::span<const double> u, int sign)
{
    return (u[static_cast<std::size_t>(layout.v_slot(1))] + sign) / u[0];
}

double norm(std::span<const double> x)
{
    double s = 0.0;
    for (double e : x) {
        s += e * e;
    }
    return std::sqrt(s);
}

} // namespace

CharacteristicsN1 char_speeds_n1(const StateLayout& layout, std::span<const double> w, double eps)
{
    require_n1(layout, "char_speeds_n1");
    check_state_size<double>(layout, w.size());
    const double tau = w[0];
    const double v = w[static_cast<std::size_t>(layout.v_slot(1))];
    const auto fields = conservative_fields_n1(layout, w, eps);

    CharacteristicsN1 out;
    out.lambda_plus = v + tau;
    out.lambda_minus = v - tau;
    out.plus.speed = out.lambda_plus;
    out.minus.speed = out.lambda_minus;
    out.plus.multiplicity = layout.m() + 1;
    out.minus.multiplicity = layout.m() + 1;
    for (const auto& r : fields.plus) {
        out.plus.vectors.push_back(to_primitive_direction(fields.u, r));
    }
    for (const auto& r : fields.minus) {
        out.minus.vectors.push_back(to_primitive_direction(fields.u, r));
    }
    return out;
}

double linear_degeneracy_residual(const StateLayout& layout, std::span<const double> w,
                                  double relative_step)
{
    require_n1(layout, "linear_degeneracy_residual");
    const auto fields = conservative_fields_n1(layout, w, default_singular_eps);
    const double step = relative_step * std::max(1.0, norm(fields.u));
    double worst = 0.0;
    for (int sign : {+1, -1}) {
        const auto& list = sign > 0 ? fields.plus : fields.minus;
        for (const auto& r : list) {
            const double len = norm(r);
            std::vector<double> fwd = fields.u;
            std::vector<double> bwd = fields.u;
            for (std::size_t k = 0; k < r.size(); ++k) {
                fwd[k] += step * r[k] / len;
                bwd[k] -= step * r[k] / len;
            }
            const double derivative =
                (speed_n1(layout, fwd, sign) - speed_n1(layout, bwd, sign)) / (2.0 * step);
            worst = std::max(worst, std::abs(derivative));
        }
    }
    return worst;
}

double linear_degeneracy_analytic(const StateLayout& layout, std::span<const double> w)
{
    require_n1(layout, "linear_degeneracy_analytic");
    const auto fields = conservative_fields_n1(layout, w, default_singular_eps);
    const double h = fields.u[0];
    const double p = fields.u[static_cast<std::size_t>(layout.v_slot(1))];
    double worst = 0.0;
    for (int sign : {+1, -1}) {
        const auto& list = sign > 0 ? fields.plus : fields.minus;
        // ∂λ/∂h = −(P ± 1)/h², ∂λ/∂P = 1/h, other partials vanish.
        for (const auto& r : list) {
            const double derivative = -(p + sign) / (h * h) * r[0] +
                                      r[static_cast<std::size_t>(layout.v_slot(1))] / h;
            worst = std::max(worst, std::abs(derivative) / norm(r));
        }
    }
    return worst;
}

std::vector<double> wave_speeds(const StateLayout& layout, std::span<const double> w,
                                std::span<const double> direction)
{
    const auto a = assemble_directional<double>(layout, w, direction);
    const int dim = layout.dim();
    Eigen::MatrixXd dense(dim, dim);
    for (int p = 0; p < dim; ++p) {
        for (int q = 0; q < dim; ++q) {
            dense(p, q) = a(p, q);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
    std::vector<double> speeds(solver.eigenvalues().data(),
                               solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(speeds.begin(), speeds.end());
    return speeds;
}

double max_coordinate_speed(const StateLayout& layout, std::span<const double> w)
{
    double out = 0.0;
    std::vector<double> e(static_cast<std::size_t>(layout.n()), 0.0);
    for (int j = 0; j < layout.n(); ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        for (double s : wave_speeds(layout, w, e)) {
            out = std::max(out, std::abs(s));
        }
    }
    return out;
}

} // namespace brane
