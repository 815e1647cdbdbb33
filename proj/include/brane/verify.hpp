#pragma once

// Randomized exact-arithmetic identity suites behind the `verify` subcommand.

#include "brane/matrix.hpp"
#include "brane/scalar.hpp"

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace brane {

struct Shape {
    int m = 1;
    int n = 1;
};

/// (1,1) (2,1) (1,2) (2,2) (2,3) (3,2) (3,3).
std::vector<Shape> default_shapes();
/// "2x3,1x1" style lists. Throws ConfigError on malformed entries or shapes outside [1,4].
std::vector<Shape> parse_shapes(const std::string& text);

/// Uniform over p/q with q in [1,4] and p/q in [-5, 5].
Rational random_rational(std::mt19937_64& rng);
Matrix<Rational> random_rational_matrix(std::mt19937_64& rng, int rows, int cols);

struct SuiteResult {
    std::string suite;
    Shape shape;
    long passed = 0;
    long failed = 0;
};

struct VerifyFailure {
    std::string suite;
    Shape shape;
    nlohmann::json reproducer;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    int samples = 0;
    std::vector<Shape> shapes;
    std::vector<SuiteResult> suites;
    std::vector<VerifyFailure> failures;

    bool all_passed() const;
    nlohmann::json to_json() const;
};

struct VerifyOptions {
    std::vector<Shape> shapes = default_shapes();
    int samples = 200;
    std::uint64_t seed = 0;
};

/// Cauchy–Binet, xi, xi' and Z minor sums, mixed Laplace expansion per shape,
/// plus the exhaustive ordinal parity identity. samples = 0 runs nothing.
VerifyReport run_verify(const VerifyOptions& options);

nlohmann::json rational_matrix_json(const Matrix<Rational>& a);

} // namespace brane
