#include "brane/minors.hpp"
#include "brane/verify.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <random>

using namespace brane;
using Q = Rational;

namespace {

Q q(long num, long den = 1) { return make_rational(num, den); }

// Recursive first-row cofactor expansion, independent of minor().
Q cofactor_det(const std::vector<std::vector<Q>>& a)
{
    const std::size_t k = a.size();
    if (k == 0) {
        return 1;
    }
    Q out = 0;
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<std::vector<Q>> sub;
        for (std::size_t r = 1; r < k; ++r) {
            std::vector<Q> row;
            for (std::size_t cc = 0; cc < k; ++cc) {
                if (cc != c) {
                    row.push_back(a[r][cc]);
                }
            }
            sub.push_back(row);
        }
        const Q term = a[0][c] * cofactor_det(sub);
        out += (c % 2 == 0) ? term : Q(-term);
    }
    return out;
}

Q oracle_minor(const Matrix<Q>& f, const IndexSet& rows, const IndexSet& cols)
{
    std::vector<std::vector<Q>> sub;
    for (int r : rows.elements()) {
        std::vector<Q> row;
        for (int c : cols.elements()) {
            row.push_back(f.at1(r, c));
        }
        sub.push_back(row);
    }
    return cofactor_det(sub);
}

// Gauss–Jordan inverse over the rationals.
Matrix<Q> oracle_inverse(Matrix<Q> a)
{
    const int n = a.rows();
    Matrix<Q> inv = Matrix<Q>::identity(n);
    for (int c = 0; c < n; ++c) {
        int piv = c;
        while (a(piv, c) == 0) {
            ++piv;
        }
        for (int k = 0; k < n; ++k) {
            std::swap(a(c, k), a(piv, k));
            std::swap(inv(c, k), inv(piv, k));
        }
        const Q d = a(c, c);
        for (int k = 0; k < n; ++k) {
            a(c, k) /= d;
            inv(c, k) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || a(r, c) == 0) {
                continue;
            }
            const Q factor = a(r, c);
            for (int k = 0; k < n; ++k) {
                a(r, k) -= factor * a(c, k);
                inv(r, k) -= factor * inv(c, k);
            }
        }
    }
    return inv;
}

Matrix<Q> scale(const Matrix<Q>& a, const Q& s)
{
    Matrix<Q> out = a;
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < a.cols(); ++c) {
            out(r, c) *= s;
        }
    }
    return out;
}

} // namespace

TEST_CASE("ordinal examples")
{
    CHECK(ordinal(IndexSet(6, {2, 5}), 3) == 2);
    CHECK(ordinal(IndexSet(6, {2, 5}), 2) == 1);
    CHECK(ordinal(IndexSet(7), 7) == 1);
    CHECK_THROWS_AS(ordinal(IndexSet(6, {2, 5}), 0), DomainError);
    CHECK_THROWS_AS(ordinal(IndexSet(6, {2, 5}), 7), DomainError);
}

TEST_CASE("ordinal is unchanged by inserting alpha")
{
    for (int bound = 1; bound <= 6; ++bound) {
        for (std::uint32_t mask = 0; mask < (1u << bound); ++mask) {
            const auto a = IndexSet::from_mask(bound, mask);
            for (int alpha = 1; alpha <= bound; ++alpha) {
                CHECK(ordinal(a, alpha) == ordinal(a.with(alpha), alpha));
                CHECK(ordinal(a, alpha) >= 1);
            }
        }
    }
}

TEST_CASE("ordinal parity identity, exhaustive up to bound 6")
{
    long checked = 0;
    for (int bound = 1; bound <= 6; ++bound) {
        for (std::uint32_t mask = 0; mask < (1u << bound); ++mask) {
            const auto iset = IndexSet::from_mask(bound, mask);
            for (int i = 1; i <= bound; ++i) {
                if (iset.contains(i)) {
                    continue;
                }
                for (int j : iset.elements()) {
                    const int lhs = ordinal(iset, i) + ordinal(iset.with(i), j);
                    const int rhs = ordinal(iset, j) + ordinal(iset.without(j), i) + 1;
                    CHECK((lhs - rhs) % 2 == 0);
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("index set basics")
{
    const IndexSet a(5, {1, 3, 4});
    CHECK_THROWS_AS(IndexSet(5, {4, 1, 3}), DomainError);
    CHECK(a.elements() == std::vector<int>{1, 3, 4});
    CHECK(a.at(2) == 3);
    CHECK(a.position(4) == 3);
    CHECK(a.without(3).elements() == std::vector<int>{1, 4});
    CHECK(a.to_string() == "{1,3,4}");
    CHECK_THROWS_AS(IndexSet(3, {4}), DomainError);
    CHECK(IndexSet(3).empty());
}

TEST_CASE("enumerate_layout examples")
{
    const auto l11 = enumerate_layout(1, 1);
    REQUIRE(l11.size() == 1);
    CHECK(l11.pair(0).rows == IndexSet(1, {1}));
    CHECK(l11.pair(0).cols == IndexSet(1, {1}));

    const auto l22 = enumerate_layout(2, 2);
    CHECK(l22.size() == 5);
    CHECK(l22.pair(4).rows.size() == 2);
    CHECK(enumerate_layout(2, 3).size() == 9);
    CHECK_THROWS_AS(enumerate_layout(0, 2), DomainError);
    CHECK_THROWS_AS(enumerate_layout(2, 0), DomainError);
}

TEST_CASE("layout count matches brute force and order is canonical")
{
    for (int m = 1; m <= 4; ++m) {
        for (int n = 1; n <= 4; ++n) {
            long brute = 0;
            for (std::uint32_t am = 1; am < (1u << m); ++am) {
                for (std::uint32_t im = 1; im < (1u << n); ++im) {
                    if (std::popcount(am) == std::popcount(im)) {
                        ++brute;
                    }
                }
            }
            const auto layout = enumerate_layout(m, n);
            CHECK(layout.size() == brute);
            CHECK(layout.size() == binomial(m + n, n) - 1);
            for (int p = 0; p + 1 < layout.size(); ++p) {
                const auto& x = layout.pair(p);
                const auto& y = layout.pair(p + 1);
                const bool ordered =
                    x.rows.size() < y.rows.size() ||
                    (x.rows.size() == y.rows.size() &&
                     (x.rows.lex_less(y.rows) || (x.rows == y.rows && x.cols.lex_less(y.cols))));
                CHECK(ordered);
            }
            for (int p = 0; p < layout.size(); ++p) {
                CHECK(layout.index_of(layout.pair(p).rows, layout.pair(p).cols) == p);
            }
            CHECK(layout.index_of(IndexSet(m), IndexSet(n)) == -1);
        }
    }
}

TEST_CASE("minor examples")
{
    const Matrix<Q> f{{1, 2}, {3, 4}};
    CHECK(minor(f, IndexSet(2, {1, 2}), IndexSet(2, {1, 2})) == -2);
    CHECK(minor(f, IndexSet(2), IndexSet(2)) == 1);
    CHECK(minor(f, IndexSet(2, {2}), IndexSet(2, {1})) == 3);
    CHECK_THROWS_AS(minor(f, IndexSet(2, {1}), IndexSet(2, {1, 2})), DomainError);
}

TEST_CASE("minor agrees with cofactor expansion up to k = 5")
{
    std::mt19937_64 rng(11);
    for (int k = 1; k <= 5; ++k) {
        for (int s = 0; s < 20; ++s) {
            const auto f = random_rational_matrix(rng, 5, 5);
            for (const auto& rows : subsets_of_size(5, k)) {
                const auto cols = subsets_of_size(5, k).front();
                CHECK(minor(f, rows, cols) == oracle_minor(f, rows, cols));
            }
        }
    }
    // Elimination path with a zero leading pivot.
    const Matrix<Q> p{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
    CHECK(determinant(p) == 1);
}

TEST_CASE("all_minors examples")
{
    const auto layout = enumerate_layout(2, 2);
    CHECK(all_minors(Matrix<Q>(2, 2), layout) == std::vector<Q>{0, 0, 0, 0, 0});
    CHECK(all_minors(Matrix<Q>::identity(2), layout) == std::vector<Q>{1, 0, 0, 1, 1});
    CHECK(all_minors(Matrix<Q>{{1, 2}, {3, 4}}, layout) == std::vector<Q>{1, 2, 3, 4, -2});
    CHECK_THROWS_AS(all_minors(Matrix<Q>(2, 3), layout), DomainError);
}

TEST_CASE("Cauchy-Binet examples")
{
    const Matrix<Q> mm{{1, 2}};
    const Matrix<Q> nn{{3}, {4}};
    const auto [lhs, rhs] = cauchy_binet_check(mm, nn, IndexSet(1, {1}), IndexSet(1, {1}));
    CHECK(lhs == 11);
    CHECK(rhs == 11);
    const auto [l0, r0] = cauchy_binet_check(mm, nn, IndexSet(1), IndexSet(1));
    CHECK(l0 == 1);
    CHECK(r0 == 1);
    CHECK_THROWS_AS(cauchy_binet_check(mm, mm, IndexSet(1), IndexSet(2)), DomainError);

    std::mt19937_64 rng(3);
    for (int s = 0; s < 50; ++s) {
        const auto a = random_rational_matrix(rng, 3, 2);
        const auto b = random_rational_matrix(rng, 2, 3);
        for (const auto& rows : subsets_of_size(3, 2)) {
            for (const auto& cols : subsets_of_size(3, 2)) {
                const auto [l, r] = cauchy_binet_check(a, b, rows, cols);
                CHECK(l == r);
                CHECK(l == oracle_minor(a * b, rows, cols));
            }
        }
    }
}

TEST_CASE("xi examples")
{
    const Matrix<Q> f1{{q(3, 2)}};
    CHECK(xi(f1) == 1 + q(9, 4));
    const Matrix<Q> f{{1, 2}, {3, 4}};
    const auto layout = enumerate_layout(2, 2);
    const auto ms = all_minors(f, layout);
    CHECK(xi(f) == 35);
    CHECK(xi_minor_sum(std::span<const Q>(ms), layout) == 35);
    CHECK(xi(Matrix<Q>(2, 3)) == 1);
}

TEST_CASE("xi_prime examples and oracle")
{
    const auto l11 = enumerate_layout(1, 1);
    const Matrix<Q> f1{{q(-7, 3)}};
    const auto m1 = all_minors(f1, l11);
    CHECK(xi_prime(f1)(0, 0) == q(-7, 3));
    CHECK(xi_prime_minor_sum(std::span<const Q>(m1), l11)(0, 0) == q(-7, 3));
    CHECK(xi_prime(Matrix<Q>(2, 3)) == Matrix<Q>(2, 3));

    std::mt19937_64 rng(5);
    const auto layout = enumerate_layout(2, 3);
    for (int s = 0; s < 50; ++s) {
        const auto f = random_rational_matrix(rng, 2, 3);
        const auto ms = all_minors(f, layout);
        const Matrix<Q> s3 = Matrix<Q>::identity(3) + f.transpose() * f;
        const Matrix<Q> oracle = scale(f * oracle_inverse(s3), xi(f));
        CHECK(xi_prime(f) == oracle);
        CHECK(xi_prime_minor_sum(std::span<const Q>(ms), layout) == oracle);
    }
}

TEST_CASE("z_matrix examples and oracle")
{
    const auto l11 = enumerate_layout(1, 1);
    const Matrix<Q> f1{{q(5, 2)}};
    const auto m1 = all_minors(f1, l11);
    CHECK(z_matrix(f1)(0, 0) == 1);
    CHECK(z_minor_sum(std::span<const Q>(m1), l11)(0, 0) == 1);
    CHECK(z_matrix(Matrix<Q>(2, 2)) == Matrix<Q>::identity(2));

    std::mt19937_64 rng(7);
    const auto layout = enumerate_layout(2, 2);
    for (int s = 0; s < 50; ++s) {
        const auto f = random_rational_matrix(rng, 2, 2);
        const auto ms = all_minors(f, layout);
        const Matrix<Q> oracle =
            scale(oracle_inverse(Matrix<Q>::identity(2) + f.transpose() * f), xi(f));
        CHECK(z_matrix(f) == oracle);
        CHECK(z_minor_sum(std::span<const Q>(ms), layout) == oracle);
    }
}

TEST_CASE("Z is symmetric positive definite for real F")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int s = 0; s < 100; ++s) {
        const int m = 1 + s % 3;
        const int n = 1 + (s / 3) % 3;
        Matrix<double> f(m, n);
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < n; ++c) {
                f(r, c) = u(rng);
            }
        }
        const auto z = z_matrix(f);
        Eigen::MatrixXd ze(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                CHECK(z(i, j) == z(j, i));
                ze(i, j) = z(i, j);
            }
        }
        CHECK(Eigen::LLT<Eigen::MatrixXd>(ze).info() == Eigen::Success);
    }
}

TEST_CASE("laplace_mixed examples")
{
    const Matrix<Q> f{{2, -3, 5}, {7, 1, q(1, 2)}, {-4, 6, 9}};
    // k = 1: the single term is +F_{αj}, matching the closed form.
    for (int alpha = 1; alpha <= 3; ++alpha) {
        for (int i = 1; i <= 3; ++i) {
            for (int j = 1; j <= 3; ++j) {
                const IndexSet a(3, {alpha});
                const IndexSet iset(3, {i});
                CHECK(laplace_mixed(f, a, iset, 1, j) == f.at1(alpha, j));
                CHECK(laplace_mixed_contract(f, a, iset, 1, j) == f.at1(alpha, j));
            }
        }
    }
    // j inside I without i_q.
    CHECK(laplace_mixed(f, IndexSet(3, {1, 2}), IndexSet(3, {1, 3}), 1, 3) == 0);
    CHECK(laplace_mixed_contract(f, IndexSet(3, {1, 2}), IndexSet(3, {1, 3}), 1, 3) == 0);
    CHECK_THROWS_AS(laplace_mixed(f, IndexSet(3, {1}), IndexSet(3, {1}), 2, 1), DomainError);
    CHECK_THROWS_AS(laplace_mixed(f, IndexSet(3, {1}), IndexSet(3, {1}), 1, 4), DomainError);
}

TEST_CASE("laplace_mixed k = 2 against direct determinants")
{
    std::mt19937_64 rng(13);
    for (int s = 0; s < 50; ++s) {
        const auto f = random_rational_matrix(rng, 3, 3);
        for (const auto& a : subsets_of_size(3, 2)) {
            for (const auto& iset : subsets_of_size(3, 2)) {
                for (int qpos = 1; qpos <= 2; ++qpos) {
                    for (int j = 1; j <= 3; ++j) {
                        const IndexSet rest = iset.without(iset.at(qpos));
                        Q expected = 0;
                        if (!rest.contains(j)) {
                            const IndexSet target = rest.with(j);
                            expected = oracle_minor(f, a, target);
                            if ((ordinal(target, j) + qpos) % 2 != 0) {
                                expected = -expected;
                            }
                        }
                        CHECK(laplace_mixed(f, a, iset, qpos, j) == expected);
                        CHECK(laplace_mixed_contract(f, a, iset, qpos, j) == expected);
                    }
                }
            }
        }
    }
}

TEST_CASE("double-precision minors")
{
    const Matrix<double> f{{1.5, -2.0}, {0.25, 4.0}};
    CHECK(minor(f, IndexSet(2, {1, 2}), IndexSet(2, {1, 2})) == doctest::Approx(6.5));
    CHECK(xi(f) == doctest::Approx(1.0 + 1.5 * 1.5 + 4.0 + 0.0625 + 16.0 + 6.5 * 6.5));
}

TEST_CASE("verify suites")
{
    SUBCASE("default shapes pass")
    {
        VerifyOptions options;
        options.samples = 20;
        options.seed = 42;
        const auto report = run_verify(options);
        CHECK(report.all_passed());
        CHECK(report.suites.size() == 7 * 5 + 1);
        CHECK(report.failures.empty());
    }
    SUBCASE("same seed gives identical reports")
    {
        VerifyOptions options;
        options.samples = 5;
        options.seed = 9;
        CHECK(run_verify(options).to_json().dump() == run_verify(options).to_json().dump());
    }
    SUBCASE("zero samples")
    {
        VerifyOptions options;
        options.samples = 0;
        const auto report = run_verify(options);
        CHECK(report.suites.empty());
        CHECK(report.all_passed());
    }
    SUBCASE("shape parsing")
    {
        const auto shapes = parse_shapes("2x3,1x1");
        REQUIRE(shapes.size() == 2);
        CHECK(shapes[0].m == 2);
        CHECK(shapes[0].n == 3);
        CHECK_THROWS_AS(parse_shapes("2by3"), ConfigError);
        CHECK_THROWS_AS(parse_shapes("5x1"), ConfigError);
    }
    SUBCASE("random rationals stay in range")
    {
        std::mt19937_64 rng(1);
        for (int k = 0; k < 1000; ++k) {
            const Q x = random_rational(rng);
            CHECK(x >= -5);
            CHECK(x <= 5);
        }
    }
}
