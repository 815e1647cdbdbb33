#pragma once

// State representations of the augmented system and the maps between them.
//
// Flat primitive layout W = (tau, d_1..d_m, v_1..v_n, m_{A,I} in layout order),
// conservative layout U = (h, D_1..D_m, P_1..P_n, M_{A,I}). The empty-pair
// convention m_{∅,∅} = tau is realized by minor_slot(∅, ∅) == tau_slot().

#include "brane/errors.hpp"
#include "brane/minors.hpp"
#include "brane/scalar.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace brane {

inline constexpr double default_singular_eps = 1e-12;

class StateLayout {
public:
    StateLayout() = default;
    StateLayout(int m, int n) : minors_(m, n), m_(m), n_(n) {}

    int m() const noexcept { return m_; }
    int n() const noexcept { return n_; }
    const MinorLayout& minors() const noexcept { return minors_; }

    /// n + m + C(m+n, n).
    int dim() const noexcept { return 1 + m_ + n_ + minors_.size(); }

    static constexpr int tau_slot() noexcept { return 0; }
    int d_slot(int alpha) const noexcept { return alpha; }
    int v_slot(int i) const noexcept { return m_ + i; }
    int first_minor_slot() const noexcept { return 1 + m_ + n_; }
    int pair_slot(int p) const noexcept { return first_minor_slot() + p; }

    /// Slot of m_{A,I}; tau_slot() for the empty pair, -1 when not representable.
    int minor_slot(const IndexSet& a, const IndexSet& i) const noexcept
    {
        if (a.empty() && i.empty()) {
            return tau_slot();
        }
        const int p = minors_.index_of(a, i);
        return p < 0 ? -1 : pair_slot(p);
    }

    IndexSet row_set() const { return IndexSet(m_); }
    IndexSet col_set() const { return IndexSet(n_); }

    /// Human-readable slot name ("tau", "d1", "v2", "m{1,2}{1,3}").
    std::string slot_name(int slot) const;

private:
    MinorLayout minors_;
    int m_ = 0;
    int n_ = 0;
};

template <typename T>
struct PrimitiveState {
    T tau{0};
    std::vector<T> d;
    std::vector<T> v;
    std::vector<T> minors;
};

template <typename T>
struct ConservativeState {
    T h{0};
    std::vector<T> D;
    std::vector<T> P;
    std::vector<T> M;
};

template <typename T>
struct GraphData {
    Matrix<T> F; // m x n, F_{αi} = ∂_i X^{n+α}
    std::vector<T> D;
};

template <typename T>
struct PhiResidual {
    IndexSet a;
    IndexSet i;
    int alpha;
    T value;
};

template <typename T>
struct PsiResidual {
    IndexSet a;
    IndexSet i;
    int index;
    T value;
};

template <typename T>
struct ConstraintResiduals {
    T lambda{0};
    std::vector<T> omega;
    std::vector<PhiResidual<T>> phi;
    std::vector<PsiResidual<T>> psi;

    double lambda_abs() const { return std::abs(to_double(lambda)); }
    double omega_max() const
    {
        double out = 0.0;
        for (const auto& x : omega) {
            out = std::max(out, std::abs(to_double(x)));
        }
        return out;
    }
    double phi_max() const
    {
        double out = 0.0;
        for (const auto& x : phi) {
            out = std::max(out, std::abs(to_double(x.value)));
        }
        return out;
    }
    double psi_max() const
    {
        double out = 0.0;
        for (const auto& x : psi) {
            out = std::max(out, std::abs(to_double(x.value)));
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// Packing

template <typename T, typename Head>
std::vector<T> pack_state(const Head& head, const std::vector<T>& a, const std::vector<T>& b,
                          const std::vector<T>& c)
{
    std::vector<T> out;
    out.reserve(1 + a.size() + b.size() + c.size());
    out.push_back(head);
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    out.insert(out.end(), c.begin(), c.end());
    return out;
}

template <typename T>
std::vector<T> to_vector(const PrimitiveState<T>& w)
{
    return pack_state<T>(w.tau, w.d, w.v, w.minors);
}

template <typename T>
std::vector<T> to_vector(const ConservativeState<T>& u)
{
    return pack_state<T>(u.h, u.D, u.P, u.M);
}

template <typename T>
void check_state_size(const StateLayout& layout, std::size_t size)
{
    if (static_cast<int>(size) != layout.dim()) {
        throw DomainError("state vector has " + std::to_string(size) + " entries, layout needs " +
                          std::to_string(layout.dim()));
    }
}

template <typename T>
PrimitiveState<T> primitive_from_vector(const StateLayout& layout, std::span<const T> w)
{
    check_state_size<T>(layout, w.size());
    PrimitiveState<T> out;
    out.tau = w[0];
    out.d.assign(w.begin() + 1, w.begin() + 1 + layout.m());
    out.v.assign(w.begin() + 1 + layout.m(), w.begin() + layout.first_minor_slot());
    out.minors.assign(w.begin() + layout.first_minor_slot(), w.end());
    return out;
}

template <typename T>
ConservativeState<T> conservative_from_vector(const StateLayout& layout, std::span<const T> u)
{
    check_state_size<T>(layout, u.size());
    ConservativeState<T> out;
    out.h = u[0];
    out.D.assign(u.begin() + 1, u.begin() + 1 + layout.m());
    out.P.assign(u.begin() + 1 + layout.m(), u.begin() + layout.first_minor_slot());
    out.M.assign(u.begin() + layout.first_minor_slot(), u.end());
    return out;
}

// ---------------------------------------------------------------------------
// Maps

/// P = F^T D, M = all minors of F, h = sqrt(|D|^2 + |P|^2 + xi(F)).
template <typename T>
ConservativeState<T> lift(const StateLayout& layout, const GraphData<T>& g)
{
    using std::sqrt;
    const int m = layout.m();
    const int n = layout.n();
    if (g.F.rows() != m || g.F.cols() != n || static_cast<int>(g.D.size()) != m) {
        throw DomainError("lift: graph data shape does not match layout");
    }
    ConservativeState<T> u;
    u.D = g.D;
    u.P.assign(static_cast<std::size_t>(n), T(0));
    for (int i = 0; i < n; ++i) {
        for (int a = 0; a < m; ++a) {
            u.P[static_cast<std::size_t>(i)] += g.F(a, i) * g.D[static_cast<std::size_t>(a)];
        }
    }
    u.M = all_minors(g.F, layout.minors());
    T energy = xi(g.F);
    for (const auto& x : u.D) {
        energy += x * x;
    }
    for (const auto& x : u.P) {
        energy += x * x;
    }
    u.h = sqrt(energy);
    return u;
}

/// tau = 1/h, d = D/h, v = P/h, m = M/h.
template <typename T>
PrimitiveState<T> to_primitive(const ConservativeState<T>& u, double eps = default_singular_eps)
{
    if (!(std::abs(to_double(u.h)) > eps)) {
        throw SingularStateError("to_primitive: |h| <= " + std::to_string(eps));
    }
    PrimitiveState<T> w;
    w.tau = T(1) / u.h;
    auto scale = [&u](const std::vector<T>& x) {
        std::vector<T> out;
        out.reserve(x.size());
        for (const auto& e : x) {
            out.push_back(e / u.h);
        }
        return out;
    };
    w.d = scale(u.D);
    w.v = scale(u.P);
    w.minors = scale(u.M);
    return w;
}

/// h = 1/tau, D = d/tau, P = v/tau, M = m/tau.
template <typename T>
ConservativeState<T> to_conservative(const PrimitiveState<T>& w,
                                     double eps = default_singular_eps)
{
    if (!(std::abs(to_double(w.tau)) > eps)) {
        throw SingularStateError("to_conservative: |tau| <= " + std::to_string(eps));
    }
    ConservativeState<T> u;
    u.h = T(1) / w.tau;
    auto scale = [&w](const std::vector<T>& x) {
        std::vector<T> out;
        out.reserve(x.size());
        for (const auto& e : x) {
            out.push_back(e / w.tau);
        }
        return out;
    };
    u.D = scale(w.d);
    u.P = scale(w.v);
    u.M = scale(w.minors);
    return u;
}

/// F_{αi} = m_{{α},{i}} / tau and D = d / tau.
template <typename T>
GraphData<T> reconstruct_graph(const StateLayout& layout, std::span<const T> w,
                               double eps = default_singular_eps)
{
    check_state_size<T>(layout, w.size());
    const T& tau = w[0];
    if (!(std::abs(to_double(tau)) > eps)) {
        throw SingularStateError("reconstruct_graph: |tau| <= " + std::to_string(eps));
    }
    GraphData<T> g{Matrix<T>(layout.m(), layout.n()), std::vector<T>(layout.m(), T(0))};
    for (int a = 1; a <= layout.m(); ++a) {
        g.D[static_cast<std::size_t>(a - 1)] = w[static_cast<std::size_t>(layout.d_slot(a))] / tau;
        for (int i = 1; i <= layout.n(); ++i) {
            const int s = layout.minor_slot(IndexSet(layout.m(), {a}), IndexSet(layout.n(), {i}));
            g.F(a - 1, i - 1) = w[static_cast<std::size_t>(s)] / tau;
        }
    }
    return g;
}

template <typename T>
GraphData<T> reconstruct_graph(const StateLayout& layout, const PrimitiveState<T>& w,
                               double eps = default_singular_eps)
{
    const auto flat = to_vector(w);
    return reconstruct_graph(layout, std::span<const T>(flat), eps);
}

/// λ, ω_i, φ^α_{A,I}, ψ^i_{A,I}; all vanish exactly on lifted states.
template <typename T>
ConstraintResiduals<T> constraint_residuals(const StateLayout& layout, std::span<const T> w)
{
    check_state_size<T>(layout, w.size());
    const int m = layout.m();
    const int n = layout.n();
    const int r = layout.minors().rank();
    auto at = [&w](int slot) -> const T& { return w[static_cast<std::size_t>(slot)]; };
    // m_{A,I} with the tau convention; unrepresentable labels read as zero.
    auto minor_at = [&](const IndexSet& a, const IndexSet& i) -> T {
        const int s = layout.minor_slot(a, i);
        return s < 0 ? T(0) : at(s);
    };
    auto first_order = [&](int alpha, int i) -> const T& {
        return at(layout.minor_slot(IndexSet(m, {alpha}), IndexSet(n, {i})));
    };
    const T& tau = at(StateLayout::tau_slot());

    ConstraintResiduals<T> out;
    T norm2(0);
    for (const auto& x : w) {
        norm2 += x * x;
    }
    out.lambda = (norm2 - T(1)) / T(2);

    out.omega.assign(static_cast<std::size_t>(n), T(0));
    for (int i = 1; i <= n; ++i) {
        T acc = tau * at(layout.v_slot(i));
        for (int alpha = 1; alpha <= m; ++alpha) {
            acc -= first_order(alpha, i) * at(layout.d_slot(alpha));
        }
        out.omega[static_cast<std::size_t>(i - 1)] = acc;
    }

    // φ^α_{A,I}: |I| = |A| + 1, expansion of [F]_{A∪α, I} along row α.
    for (int k = 0; k <= r && k + 1 <= n; ++k) {
        for (const auto& a : subsets_of_size(m, k)) {
            for (const auto& iset : subsets_of_size(n, k + 1)) {
                for (int alpha = 1; alpha <= m; ++alpha) {
                    T acc(0);
                    for (int i : iset.elements()) {
                        const T term = minor_at(a, iset.without(i)) * first_order(alpha, i);
                        if (parity_sign(ordinal(a, alpha) + ordinal(iset, i)) > 0) {
                            acc += term;
                        } else {
                            acc -= term;
                        }
                    }
                    if (!a.contains(alpha)) {
                        acc -= tau * minor_at(a.with(alpha), iset);
                    }
                    out.phi.push_back({a, iset, alpha, acc});
                }
            }
        }
    }

    // ψ^i_{A,I}: |A| = |I| + 1, expansion of [F]_{A, I∪i} along column i.
    for (int k = 0; k <= r && k + 1 <= m; ++k) {
        for (const auto& a : subsets_of_size(m, k + 1)) {
            for (const auto& iset : subsets_of_size(n, k)) {
                for (int i = 1; i <= n; ++i) {
                    T acc(0);
                    for (int alpha : a.elements()) {
                        const T term = minor_at(a.without(alpha), iset) * first_order(alpha, i);
                        if (parity_sign(ordinal(a, alpha) + ordinal(iset, i)) > 0) {
                            acc += term;
                        } else {
                            acc -= term;
                        }
                    }
                    if (!iset.contains(i)) {
                        acc -= tau * minor_at(a, iset.with(i));
                    }
                    out.psi.push_back({a, iset, i, acc});
                }
            }
        }
    }
    return out;
}

template <typename T>
ConstraintResiduals<T> constraint_residuals(const StateLayout& layout, const PrimitiveState<T>& w)
{
    const auto flat = to_vector(w);
    return constraint_residuals(layout, std::span<const T>(flat));
}

} // namespace brane
