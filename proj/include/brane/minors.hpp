#pragma once

// Combinatorics and algebra of matrix minors [F]_{A,I}.
//
// Every routine is templated on the scalar so the same code runs in exact
// rational arithmetic (identity checks) and in double precision (solver).

#include "brane/errors.hpp"
#include "brane/index_set.hpp"
#include "brane/matrix.hpp"

#include <span>
#include <utility>
#include <vector>

namespace brane {

struct MinorPair {
    IndexSet rows; // A, subset of {1..m}
    IndexSet cols; // I, subset of {1..n}
};

/// Canonical enumeration of every (A, I) with 1 <= |A| = |I| <= min(m, n).
/// Order: k ascending, then A lexicographic, then I lexicographic.
class MinorLayout {
public:
    static constexpr int max_dim = 8;

    MinorLayout() = default;
    MinorLayout(int m, int n);

    int m() const noexcept { return m_; }
    int n() const noexcept { return n_; }
    int rank() const noexcept { return m_ < n_ ? m_ : n_; }
    int size() const noexcept { return static_cast<int>(pairs_.size()); }
    const std::vector<MinorPair>& pairs() const noexcept { return pairs_; }
    const MinorPair& pair(int p) const { return pairs_.at(static_cast<std::size_t>(p)); }

    /// Position of (A, I) in the layout, or -1 when the pair is not stored
    /// (empty pair, |A| != |I|, or size above the rank).
    int index_of(const IndexSet& a, const IndexSet& i) const noexcept;

private:
    int m_ = 0;
    int n_ = 0;
    std::vector<MinorPair> pairs_;
    std::vector<int> lookup_; // [mask(A) << n | mask(I)] -> position
};

/// Throws DomainError when m or n is below 1.
MinorLayout enumerate_layout(int m, int n);

/// C(a, b) for small arguments.
long binomial(int a, int b);

/// Value of the minor labelled (A, I) from a vector in layout order; the
/// empty pair evaluates to `empty_value` and unrepresentable labels to zero.
template <typename T>
T lookup_minor(std::span<const T> minors, const MinorLayout& layout, const IndexSet& a,
               const IndexSet& i, const T& empty_value)
{
    if (a.empty() && i.empty()) {
        return empty_value;
    }
    const int p = layout.index_of(a, i);
    return p < 0 ? T(0) : minors[static_cast<std::size_t>(p)];
}

namespace detail {

template <typename T>
T bareiss_determinant(std::vector<T> a, int k)
{
    // Fraction-free elimination; every division is exact.
    T sign(1);
    T previous(1);
    auto at = [&a, k](int r, int c) -> T& { return a[static_cast<std::size_t>(r * k + c)]; };
    for (int p = 0; p < k - 1; ++p) {
        if (at(p, p) == 0) {
            int swap_row = -1;
            for (int r = p + 1; r < k; ++r) {
                if (at(r, p) != 0) {
                    swap_row = r;
                    break;
                }
            }
            if (swap_row < 0) {
                return T(0);
            }
            for (int c = 0; c < k; ++c) {
                std::swap(at(p, c), at(swap_row, c));
            }
            sign = -sign;
        }
        for (int r = p + 1; r < k; ++r) {
            for (int c = p + 1; c < k; ++c) {
                at(r, c) = (at(r, c) * at(p, p) - at(r, p) * at(p, c)) / previous;
            }
        }
        previous = at(p, p);
    }
    return sign * at(k - 1, k - 1);
}

} // namespace detail

/// Determinant of the submatrix with rows A and columns I; 1 for A = I = ∅.
/// Laplace expansion for k <= 3, fraction-free elimination above.
template <typename T>
T minor(const Matrix<T>& f, const IndexSet& a, const IndexSet& i)
{
    const int k = a.size();
    if (k != i.size()) {
        throw DomainError("minor: |A| != |I|");
    }
    if (k == 0) {
        return T(1);
    }
    const auto rows = a.elements();
    const auto cols = i.elements();
    if (rows.back() > f.rows() || cols.back() > f.cols()) {
        throw DomainError("minor: index set exceeds matrix shape");
    }
    auto e = [&](int p, int q) -> const T& {
        return f.at1(rows[static_cast<std::size_t>(p)], cols[static_cast<std::size_t>(q)]);
    };
    switch (k) {
    case 1:
        return e(0, 0);
    case 2:
        return e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
    case 3: {
        T out = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1));
        out -= e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0));
        out += e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
        return out;
    }
    default: {
        std::vector<T> sub;
        sub.reserve(static_cast<std::size_t>(k * k));
        for (int p = 0; p < k; ++p) {
            for (int q = 0; q < k; ++q) {
                sub.push_back(e(p, q));
            }
        }
        return detail::bareiss_determinant(std::move(sub), k);
    }
    }
}

template <typename T>
T determinant(const Matrix<T>& s)
{
    if (s.rows() != s.cols()) {
        throw DomainError("determinant: matrix not square");
    }
    if (s.rows() == 0) {
        return T(1);
    }
    const auto full = IndexSet::from_mask(s.rows(), (std::uint32_t{1} << s.rows()) - 1);
    return minor(s, full, full);
}

/// Every minor of F, in layout order.
template <typename T>
std::vector<T> all_minors(const Matrix<T>& f, const MinorLayout& layout)
{
    if (f.rows() != layout.m() || f.cols() != layout.n()) {
        throw DomainError("all_minors: matrix shape does not match layout");
    }
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(layout.size()));
    for (const auto& pr : layout.pairs()) {
        out.push_back(minor(f, pr.rows, pr.cols));
    }
    return out;
}

/// Both sides of the Cauchy–Binet formula for [MN]_{I,J}.
template <typename T>
std::pair<T, T> cauchy_binet_check(const Matrix<T>& mat_m, const Matrix<T>& mat_n,
                                   const IndexSet& rows, const IndexSet& cols)
{
    if (mat_m.cols() != mat_n.rows()) {
        throw DomainError("cauchy_binet_check: inner dimensions differ");
    }
    const int k = rows.size();
    const int inner = mat_m.cols();
    if (k != cols.size() || k > inner) {
        throw DomainError("cauchy_binet_check: need |I| = |J| <= inner dimension");
    }
    if ((k > 0 && rows.elements().back() > mat_m.rows()) ||
        (k > 0 && cols.elements().back() > mat_n.cols())) {
        throw DomainError("cauchy_binet_check: index set exceeds matrix shape");
    }
    const T lhs = minor(mat_m * mat_n, rows, cols);
    T rhs(0);
    for (const auto& kset : subsets_of_size(inner, k)) {
        rhs += minor(mat_m, rows, kset) * minor(mat_n, kset, cols);
    }
    return {lhs, rhs};
}

/// xi(F) = det(I_n + F^T F).
template <typename T>
T xi(const Matrix<T>& f)
{
    return determinant(Matrix<T>::identity(f.cols()) + f.transpose() * f);
}

/// 1 + sum of squared minors.
template <typename T>
T xi_minor_sum(std::span<const T> minors, const MinorLayout& layout)
{
    if (static_cast<int>(minors.size()) != layout.size()) {
        throw DomainError("xi_minor_sum: minor vector does not match layout");
    }
    T out(1);
    for (const auto& x : minors) {
        out += x * x;
    }
    return out;
}

/// Adjugate by cofactors: adj(S)_{ij} = (-1)^{i+j} det(S without row j, column i).
template <typename T>
Matrix<T> adjugate(const Matrix<T>& s)
{
    const int n = s.rows();
    if (n != s.cols()) {
        throw DomainError("adjugate: matrix not square");
    }
    Matrix<T> out(n, n);
    if (n == 1) {
        out(0, 0) = T(1);
        return out;
    }
    const auto full = IndexSet::from_mask(n, (std::uint32_t{1} << n) - 1);
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            const T cof = minor(s, full.without(j), full.without(i));
            out(i - 1, j - 1) = parity_sign(i + j) > 0 ? cof : T(-cof);
        }
    }
    return out;
}

/// Z = xi(F) (I_n + F^T F)^{-1}, computed as an adjugate.
template <typename T>
Matrix<T> z_matrix(const Matrix<T>& f)
{
    return adjugate(Matrix<T>::identity(f.cols()) + f.transpose() * f);
}

/// xi'(F)_{αi} = xi(F) (I + F^T F)^{-1}_{ij} F_{αj} = (F Z)_{αi}.
template <typename T>
Matrix<T> xi_prime(const Matrix<T>& f)
{
    return f * z_matrix(f);
}

/// Minor-sum form of xi'(F):
/// sum over (A, I) with α ∈ A, i ∈ I of (-1)^{O_A(α)+O_I(i)} M_{A,I} M_{A∖α,I∖i}.
template <typename T>
Matrix<T> xi_prime_minor_sum(std::span<const T> minors, const MinorLayout& layout)
{
    Matrix<T> out(layout.m(), layout.n());
    for (int p = 0; p < layout.size(); ++p) {
        const auto& [a, iset] = layout.pair(p);
        for (int alpha : a.elements()) {
            for (int i : iset.elements()) {
                const T lower = lookup_minor(minors, layout, a.without(alpha), iset.without(i), T(1));
                const T term = minors[static_cast<std::size_t>(p)] * lower;
                if (parity_sign(ordinal(a, alpha) + ordinal(iset, i)) > 0) {
                    out(alpha - 1, i - 1) += term;
                } else {
                    out(alpha - 1, i - 1) -= term;
                }
            }
        }
    }
    return out;
}

/// Minor-sum form of Z:
/// (1 + Σ M²) δ_ij − Σ_{A,I: j∈I, i∉I∖j} (-1)^{O_I(j)+O_{I∖j}(i)} M_{A,(I∖j)∪i} M_{A,I}.
template <typename T>
Matrix<T> z_minor_sum(std::span<const T> minors, const MinorLayout& layout)
{
    const int n = layout.n();
    Matrix<T> out(n, n);
    const T diag = xi_minor_sum(minors, layout);
    for (int i = 0; i < n; ++i) {
        out(i, i) = diag;
    }
    for (int p = 0; p < layout.size(); ++p) {
        const auto& [a, iset] = layout.pair(p);
        for (int j : iset.elements()) {
            const IndexSet reduced = iset.without(j);
            for (int i = 1; i <= n; ++i) {
                if (reduced.contains(i)) {
                    continue;
                }
                const T other = lookup_minor(minors, layout, a, reduced.with(i), T(1));
                const T term = other * minors[static_cast<std::size_t>(p)];
                if (parity_sign(ordinal(iset, j) + ordinal(reduced, i)) > 0) {
                    out(i - 1, j - 1) -= term;
                } else {
                    out(i - 1, j - 1) += term;
                }
            }
        }
    }
    return out;
}

/// Σ_p (-1)^{p+q} [F]_{A∖α_p, I∖i_q} F_{α_p j}.
template <typename T>
T laplace_mixed(const Matrix<T>& f, const IndexSet& a, const IndexSet& iset, int q, int j)
{
    const int k = a.size();
    if (k < 1 || k != iset.size()) {
        throw DomainError("laplace_mixed: need |A| = |I| >= 1");
    }
    if (q < 1 || q > k || j < 1 || j > f.cols()) {
        throw DomainError("laplace_mixed: q or j out of range");
    }
    const IndexSet cols = iset.without(iset.at(q));
    T out(0);
    for (int p = 1; p <= k; ++p) {
        const int alpha = a.at(p);
        const T term = minor(f, a.without(alpha), cols) * f.at1(alpha, j);
        if (parity_sign(p + q) > 0) {
            out += term;
        } else {
            out -= term;
        }
    }
    return out;
}

/// Closed form of laplace_mixed: ±[F]_{A,(I∖i_q)∪j}, or 0 when j ∈ I∖i_q.
template <typename T>
T laplace_mixed_contract(const Matrix<T>& f, const IndexSet& a, const IndexSet& iset, int q,
                         int j)
{
    const int k = a.size();
    if (k < 1 || k != iset.size() || q < 1 || q > k || j < 1 || j > f.cols()) {
        throw DomainError("laplace_mixed_contract: arguments out of range");
    }
    const IndexSet cols = iset.without(iset.at(q));
    if (cols.contains(j)) {
        return T(0);
    }
    const IndexSet target = cols.with(j);
    const T value = minor(f, a, target);
    return parity_sign(ordinal(target, j) + q) > 0 ? value : T(-value);
}

} // namespace brane
