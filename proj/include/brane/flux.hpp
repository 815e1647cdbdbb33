#pragma once

// Flux matrices A_j(W) of the symmetric non-conservative system, the
// conservative fluxes of the augmented conservation laws, the entropy pair,
// and characteristic analysis.

#include "brane/errors.hpp"
#include "brane/minors.hpp"
#include "brane/state.hpp"

#include <span>
#include <vector>

namespace brane {

namespace detail {

template <typename T>
void accumulate_signed(T& target, int sign, const T& value)
{
    if (sign > 0) {
        target += value;
    } else {
        target -= value;
    }
}

} // namespace detail

/// One bilinear term `sign * W[coef] * ∂_axis W[deriv]` on the left-hand side of row `row`.
struct SncTerm {
    int row;
    int coef;
    int sign;
    int axis; // 1-based spatial direction
    int deriv;
};

/// Enumerates the left-hand-side terms of the non-conservative system equation by
/// equation, row by row. Calls visit(row, coef, sign, axis, deriv).
template <typename Visit>
void for_each_snc_term(const StateLayout& layout, Visit&& visit)
{
    const int m = layout.m();
    const int n = layout.n();
    const auto& pairs = layout.minors().pairs();
    const int tau = StateLayout::tau_slot();

    // ∂_t τ + v_j ∂_j τ − τ ∂_j v_j
    for (int j = 1; j <= n; ++j) {
        visit(tau, layout.v_slot(j), +1, j, tau);
        visit(tau, tau, -1, j, layout.v_slot(j));
    }

    // ∂_t d_α + v_i ∂_i d_α + Σ ± m_{A∖α,I∖i} ∂_i m_{A,I}
    for (int alpha = 1; alpha <= m; ++alpha) {
        const int row = layout.d_slot(alpha);
        for (int i = 1; i <= n; ++i) {
            visit(row, layout.v_slot(i), +1, i, row);
        }
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto& [a, iset] = pairs[p];
            if (!a.contains(alpha)) {
                continue;
            }
            for (int i : iset.elements()) {
                const int coef = layout.minor_slot(a.without(alpha), iset.without(i));
                visit(row, coef, parity_sign(ordinal(a, alpha) + ordinal(iset, i)), i,
                      layout.pair_slot(static_cast<int>(p)));
            }
        }
    }

    // ∂_t v_i + Σ ± m_{A,(I∖j)∪i} ∂_j m_{A,I} − Σ m_{A,I} ∂_i m_{A,I} + v_j ∂_j v_i − τ ∂_i τ
    for (int i = 1; i <= n; ++i) {
        const int row = layout.v_slot(i);
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto& [a, iset] = pairs[p];
            const int col = layout.pair_slot(static_cast<int>(p));
            for (int j : iset.elements()) {
                const IndexSet reduced = iset.without(j);
                if (reduced.contains(i)) {
                    continue;
                }
                const int coef = layout.minor_slot(a, reduced.with(i));
                visit(row, coef, parity_sign(ordinal(iset, j) + ordinal(reduced, i)), j, col);
            }
        }
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const int col = layout.pair_slot(static_cast<int>(p));
            visit(row, col, -1, i, col);
        }
        for (int j = 1; j <= n; ++j) {
            visit(row, layout.v_slot(j), +1, j, row);
        }
        visit(row, tau, -1, i, tau);
    }

    // ∂_t m_{A,I} + v_j ∂_j m + Σ ± m_{A,(I∖i)∪j} ∂_i v_j − m ∂_j v_j + Σ ± m_{A∖α,I∖i} ∂_i d_α
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto& [a, iset] = pairs[p];
        const int row = layout.pair_slot(static_cast<int>(p));
        for (int j = 1; j <= n; ++j) {
            visit(row, layout.v_slot(j), +1, j, row);
        }
        for (int i : iset.elements()) {
            const IndexSet reduced = iset.without(i);
            for (int j = 1; j <= n; ++j) {
                if (reduced.contains(j)) {
                    continue;
                }
                const int coef = layout.minor_slot(a, reduced.with(j));
                visit(row, coef, parity_sign(ordinal(reduced, j) + ordinal(iset, i)), i,
                      layout.v_slot(j));
            }
        }
        for (int j = 1; j <= n; ++j) {
            visit(row, row, -1, j, layout.v_slot(j));
        }
        for (int alpha : a.elements()) {
            for (int i : iset.elements()) {
                const int coef = layout.minor_slot(a.without(alpha), iset.without(i));
                visit(row, coef, parity_sign(ordinal(a, alpha) + ordinal(iset, i)), i,
                      layout.d_slot(alpha));
            }
        }
    }
}

/// Flattened term list for repeated evaluation on a grid.
std::vector<SncTerm> compile_snc_terms(const StateLayout& layout);

/// ∂_t W = −Σ_j A_j(W) ∂_j W, evaluated term by term from the equations.
/// `gradients` holds n blocks of dim entries, block j-1 being ∂_j W.
template <typename T>
void rhs_nonconservative_point(const StateLayout& layout, std::span<const T> w,
                               std::span<const T> gradients, std::span<T> out)
{
    const auto dim = static_cast<std::size_t>(layout.dim());
    if (w.size() != dim || out.size() != dim ||
        gradients.size() != dim * static_cast<std::size_t>(layout.n())) {
        throw DomainError("rhs_nonconservative_point: buffer sizes do not match layout");
    }
    for (auto& x : out) {
        x = T(0);
    }
    for_each_snc_term(layout, [&](int row, int coef, int sign, int axis, int deriv) {
        const T term = w[static_cast<std::size_t>(coef)] *
                       gradients[static_cast<std::size_t>(axis - 1) * dim +
                                 static_cast<std::size_t>(deriv)];
        detail::accumulate_signed(out[static_cast<std::size_t>(row)], -sign, term);
    });
}

template <typename T>
std::vector<T> rhs_nonconservative_point(const StateLayout& layout, std::span<const T> w,
                                         std::span<const T> gradients)
{
    std::vector<T> out(static_cast<std::size_t>(layout.dim()), T(0));
    rhs_nonconservative_point<T>(layout, w, gradients, out);
    return out;
}

/// Symmetric flux matrix A_j(W). Every off-diagonal contribution is written to
/// (p, q) and (q, p) from one statement, so symmetry holds by construction.
template <typename T>
Matrix<T> assemble_A(const StateLayout& layout, int j, std::span<const T> w)
{
    const int n = layout.n();
    if (j < 1 || j > n) {
        throw DomainError("assemble_A: direction " + std::to_string(j) + " outside [1, " +
                          std::to_string(n) + "]");
    }
    check_state_size<T>(layout, w.size());
    const int dim = layout.dim();
    Matrix<T> out(dim, dim);
    auto add = [&out](int p, int q, const T& value) {
        out(p, q) += value;
        if (p != q) {
            out(q, p) += value;
        }
    };
    auto at = [&w](int slot) -> const T& { return w[static_cast<std::size_t>(slot)]; };

    // Transport part v_j I.
    for (int s = 0; s < dim; ++s) {
        out(s, s) = at(layout.v_slot(j));
    }
    // τ–v_j coupling.
    add(StateLayout::tau_slot(), layout.v_slot(j), T(-at(StateLayout::tau_slot())));

    const auto& pairs = layout.minors().pairs();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto& [a, iset] = pairs[p];
        const int col = layout.pair_slot(static_cast<int>(p));
        // d_α–m_{A,I} coupling, present when j ∈ I.
        if (iset.contains(j)) {
            for (int alpha : a.elements()) {
                const T& coef = at(layout.minor_slot(a.without(alpha), iset.without(j)));
                const int sign = parity_sign(ordinal(a, alpha) + ordinal(iset, j));
                add(layout.d_slot(alpha), col, sign > 0 ? coef : T(-coef));
            }
        }
        // v_i–m_{A,I} coupling.
        for (int i = 1; i <= n; ++i) {
            T value(0);
            bool present = false;
            if (iset.contains(j) && !iset.without(j).contains(i)) {
                const IndexSet reduced = iset.without(j);
                detail::accumulate_signed(value, parity_sign(ordinal(iset, j) + ordinal(reduced, i)),
                                          at(layout.minor_slot(a, reduced.with(i))));
                present = true;
            }
            if (i == j) {
                value -= at(col);
                present = true;
            }
            if (present) {
                add(layout.v_slot(i), col, value);
            }
        }
    }
    return out;
}

/// Σ_j ν_j A_j(W).
template <typename T>
Matrix<T> assemble_directional(const StateLayout& layout, std::span<const T> w,
                               std::span<const T> direction)
{
    if (static_cast<int>(direction.size()) != layout.n()) {
        throw DomainError("assemble_directional: direction has wrong length");
    }
    Matrix<T> out(layout.dim(), layout.dim());
    for (int j = 1; j <= layout.n(); ++j) {
        const auto a = assemble_A(layout, j, w);
        for (int p = 0; p < layout.dim(); ++p) {
            for (int q = 0; q < layout.dim(); ++q) {
                out(p, q) += direction[static_cast<std::size_t>(j - 1)] * a(p, q);
            }
        }
    }
    return out;
}

namespace detail {

template <typename T>
void check_h(const T& h, double eps, const char* who)
{
    if (!(std::abs(to_double(h)) > eps)) {
        throw SingularStateError(std::string(who) + ": |h| <= " + std::to_string(eps));
    }
}

} // namespace detail

/// Conservative flux in direction j of U = (h, D, P, M), components in U order.
/// M_{∅,∅} = 1.
template <typename T>
std::vector<T> conservative_flux(const StateLayout& layout, int j, std::span<const T> u,
                                 double eps = default_singular_eps)
{
    const int m = layout.m();
    const int n = layout.n();
    if (j < 1 || j > n) {
        throw DomainError("conservative_flux: direction out of range");
    }
    check_state_size<T>(layout, u.size());
    const T& h = u[0];
    detail::check_h(h, eps, "conservative_flux");
    auto at = [&u](int slot) -> const T& { return u[static_cast<std::size_t>(slot)]; };
    auto big_minor = [&](const IndexSet& a, const IndexSet& i) -> T {
        if (a.empty() && i.empty()) {
            return T(1);
        }
        const int s = layout.minor_slot(a, i);
        return s < 0 ? T(0) : at(s);
    };
    const T& pj = at(layout.v_slot(j));
    std::vector<T> flux(static_cast<std::size_t>(layout.dim()), T(0));

    flux[0] = pj;
    for (int alpha = 1; alpha <= m; ++alpha) {
        flux[static_cast<std::size_t>(layout.d_slot(alpha))] = at(layout.d_slot(alpha)) * pj;
    }
    T one_plus_m2(1);
    for (int p = 0; p < layout.minors().size(); ++p) {
        one_plus_m2 += at(layout.pair_slot(p)) * at(layout.pair_slot(p));
    }
    for (int i = 1; i <= n; ++i) {
        T value = at(layout.v_slot(i)) * pj;
        if (i == j) {
            value -= one_plus_m2;
        }
        flux[static_cast<std::size_t>(layout.v_slot(i))] = value;
    }

    const auto& pairs = layout.minors().pairs();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto& [a, iset] = pairs[p];
        const int slot = layout.pair_slot(static_cast<int>(p));
        const T& mai = at(slot);
        if (!iset.contains(j)) {
            continue;
        }
        const IndexSet reduced = iset.without(j);
        // D_α row: ± M_{A,I} M_{A∖α,I∖j}
        for (int alpha : a.elements()) {
            detail::accumulate_signed(flux[static_cast<std::size_t>(layout.d_slot(alpha))],
                                      parity_sign(ordinal(a, alpha) + ordinal(iset, j)),
                                      T(mai * big_minor(a.without(alpha), reduced)));
        }
        // P_i row: ± M_{A,(I∖j)∪i} M_{A,I}
        for (int i = 1; i <= n; ++i) {
            if (reduced.contains(i)) {
                continue;
            }
            detail::accumulate_signed(flux[static_cast<std::size_t>(layout.v_slot(i))],
                                      parity_sign(ordinal(iset, j) + ordinal(reduced, i)),
                                      T(big_minor(a, reduced.with(i)) * mai));
        }
        // M_{A,I} row: ± M_{A,(I∖j)∪k} P_k and ± M_{A∖α,I∖j} D_α
        T value(0);
        for (int k = 1; k <= n; ++k) {
            if (reduced.contains(k)) {
                continue;
            }
            detail::accumulate_signed(value, parity_sign(ordinal(reduced, k) + ordinal(iset, j)),
                                      T(big_minor(a, reduced.with(k)) * at(layout.v_slot(k))));
        }
        for (int alpha : a.elements()) {
            detail::accumulate_signed(value, parity_sign(ordinal(a, alpha) + ordinal(iset, j)),
                                      T(big_minor(a.without(alpha), reduced) *
                                        at(layout.d_slot(alpha))));
        }
        flux[static_cast<std::size_t>(slot)] = value;
    }
    for (std::size_t k = 1; k < flux.size(); ++k) {
        flux[k] /= h;
    }
    return flux;
}

/// S = (1 + |D|^2 + |P|^2 + Σ M^2) / (2h).
template <typename T>
T entropy(const StateLayout& layout, std::span<const T> u, double eps = default_singular_eps)
{
    check_state_size<T>(layout, u.size());
    detail::check_h(u[0], eps, "entropy");
    T sum(1);
    for (std::size_t k = 1; k < u.size(); ++k) {
        sum += u[k] * u[k];
    }
    return sum / (T(2) * u[0]);
}

/// Entropy flux in direction j, paired with `entropy`.
template <typename T>
T entropy_flux(const StateLayout& layout, std::span<const T> u, int j,
               double eps = default_singular_eps)
{
    const int n = layout.n();
    if (j < 1 || j > n) {
        throw DomainError("entropy_flux: direction out of range");
    }
    const T s = entropy(layout, u, eps);
    const T& h = u[0];
    auto at = [&u](int slot) -> const T& { return u[static_cast<std::size_t>(slot)]; };
    auto big_minor = [&](const IndexSet& a, const IndexSet& i) -> T {
        if (a.empty() && i.empty()) {
            return T(1);
        }
        const int slot = layout.minor_slot(a, i);
        return slot < 0 ? T(0) : at(slot);
    };
    const T& pj = at(layout.v_slot(j));
    T one_plus_m2(1);
    for (int p = 0; p < layout.minors().size(); ++p) {
        one_plus_m2 += at(layout.pair_slot(p)) * at(layout.pair_slot(p));
    }
    T quadratic(0); // terms carrying 1/h^2
    const auto& pairs = layout.minors().pairs();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto& [a, iset] = pairs[p];
        if (!iset.contains(j)) {
            continue;
        }
        const T& mai = at(layout.pair_slot(static_cast<int>(p)));
        const IndexSet reduced = iset.without(j);
        for (int alpha : a.elements()) {
            detail::accumulate_signed(quadratic, parity_sign(ordinal(a, alpha) + ordinal(iset, j)),
                                      T(at(layout.d_slot(alpha)) *
                                        big_minor(a.without(alpha), reduced) * mai));
        }
        for (int i = 1; i <= n; ++i) {
            if (reduced.contains(i)) {
                continue;
            }
            detail::accumulate_signed(quadratic, parity_sign(ordinal(iset, j) + ordinal(reduced, i)),
                                      T(at(layout.v_slot(i)) * big_minor(a, reduced.with(i)) * mai));
        }
    }
    quadratic -= pj * one_plus_m2;
    return s * pj / h + quadratic / (h * h);
}

// ---------------------------------------------------------------------------
// Characteristic analysis (double precision)

struct CharField {
    double speed = 0.0;
    int multiplicity = 0;
    std::vector<std::vector<double>> vectors; // primitive layout
};

struct CharacteristicsN1 {
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    CharField plus;
    CharField minus;
};

/// n = 1 speeds v ± tau (equivalently (P ± 1)/h), each of multiplicity m + 1,
/// with the characteristic fields mapped into primitive variables.
CharacteristicsN1 char_speeds_n1(const StateLayout& layout, std::span<const double> w,
                                 double eps = default_singular_eps);

/// Largest |∇λ± · r| over the unit-normalized characteristic vectors, by
/// central differences of λ±(U) = (P ± 1)/h in conservative variables.
double linear_degeneracy_residual(const StateLayout& layout, std::span<const double> w,
                                  double relative_step = 1e-5);

/// Same quantity from the analytic gradient of (P ± 1)/h.
double linear_degeneracy_analytic(const StateLayout& layout, std::span<const double> w);

/// Sorted eigenvalues of Σ_j ν_j A_j(W).
std::vector<double> wave_speeds(const StateLayout& layout, std::span<const double> w,
                                std::span<const double> direction);

/// Largest |eigenvalue| over coordinate directions.
double max_coordinate_speed(const StateLayout& layout, std::span<const double> w);

} // namespace brane
