#include "brane/verify.hpp"

#include "brane/errors.hpp"
#include "brane/minors.hpp"

#include <algorithm>
#include <sstream>

namespace brane {

namespace {

constexpr std::size_t max_reported_failures = 20;

IndexSet random_subset(std::mt19937_64& rng, int bound, int k)
{
    const auto all = subsets_of_size(bound, k);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    return all[pick(rng)];
}

nlohmann::json set_json(const IndexSet& s) { return s.elements(); }

class Runner {
public:
    explicit Runner(VerifyReport& report) : report_(report) {}

    SuiteResult& suite(const std::string& name, Shape shape)
    {
        report_.suites.push_back({name, shape, 0, 0});
        return report_.suites.back();
    }

    void record(std::size_t index, bool ok, const nlohmann::json& reproducer)
    {
        auto& s = report_.suites[index];
        if (ok) {
            ++s.passed;
            return;
        }
        ++s.failed;
        if (report_.failures.size() < max_reported_failures) {
            report_.failures.push_back({s.suite, s.shape, reproducer});
        }
    }

private:
    VerifyReport& report_;
};

void run_shape(Runner& runner, VerifyReport& report, Shape shape, int samples, std::mt19937_64& rng)
{
    const int m = shape.m;
    const int n = shape.n;
    const MinorLayout layout(m, n);
    runner.suite("cauchy_binet", shape);
    const std::size_t cb = report.suites.size() - 1;
    runner.suite("xi", shape);
    const std::size_t xs = report.suites.size() - 1;
    runner.suite("xi_prime", shape);
    const std::size_t xp = report.suites.size() - 1;
    runner.suite("z_matrix", shape);
    const std::size_t zm = report.suites.size() - 1;
    runner.suite("laplace_mixed", shape);
    const std::size_t lm = report.suites.size() - 1;

    std::uniform_int_distribution<int> inner_dist(1, 3);
    for (int s = 0; s < samples; ++s) {
        // Cauchy–Binet on an m x l times l x n product, every k.
        const int inner = inner_dist(rng);
        const auto mm = random_rational_matrix(rng, m, inner);
        const auto nn = random_rational_matrix(rng, inner, n);
        for (int k = 0; k <= std::min({m, n, inner}); ++k) {
            const IndexSet rows = random_subset(rng, m, k);
            const IndexSet cols = random_subset(rng, n, k);
            const auto [lhs, rhs] = cauchy_binet_check(mm, nn, rows, cols);
            runner.record(cb, lhs == rhs,
                          {{"M", rational_matrix_json(mm)},
                           {"N", rational_matrix_json(nn)},
                           {"I", set_json(rows)},
                           {"J", set_json(cols)}});
        }

        const auto f = random_rational_matrix(rng, m, n);
        const auto minors = all_minors(f, layout);
        const std::span<const Rational> view(minors);
        const nlohmann::json repro{{"F", rational_matrix_json(f)}};
        runner.record(xs, xi(f) == xi_minor_sum(view, layout), repro);
        runner.record(xp, xi_prime(f) == xi_prime_minor_sum(view, layout), repro);
        runner.record(zm, z_matrix(f) == z_minor_sum(view, layout), repro);

        bool ok = true;
        nlohmann::json where;
        for (const auto& [a, iset] : layout.pairs()) {
            for (int q = 1; q <= iset.size() && ok; ++q) {
                for (int j = 1; j <= n && ok; ++j) {
                    if (laplace_mixed(f, a, iset, q, j) != laplace_mixed_contract(f, a, iset, q, j)) {
                        ok = false;
                        where = {{"F", rational_matrix_json(f)},
                                 {"A", set_json(a)},
                                 {"I", set_json(iset)},
                                 {"q", q},
                                 {"j", j}};
                    }
                }
            }
        }
        runner.record(lm, ok, where);
    }
}

void run_parity(Runner& runner, VerifyReport& report)
{
    runner.suite("ordinal_parity", Shape{0, 0});
    const std::size_t idx = report.suites.size() - 1;
    for (int bound = 1; bound <= 6; ++bound) {
        for (std::uint32_t mask = 0; mask < (1u << bound); ++mask) {
            const IndexSet iset = IndexSet::from_mask(bound, mask);
            for (int i = 1; i <= bound; ++i) {
                if (iset.contains(i)) {
                    continue;
                }
                for (int j : iset.elements()) {
                    const int lhs = ordinal(iset, i) + ordinal(iset.with(i), j);
                    const int rhs = ordinal(iset, j) + ordinal(iset.without(j), i) + 1;
                    runner.record(idx, (lhs - rhs) % 2 == 0,
                                  {{"I", set_json(iset)}, {"i", i}, {"j", j}, {"bound", bound}});
                }
            }
        }
    }
}

} // namespace

std::vector<Shape> default_shapes()
{
    return {{1, 1}, {2, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 2}, {3, 3}};
}

std::vector<Shape> parse_shapes(const std::string& text)
{
    std::vector<Shape> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto x = item.find('x');
        Shape s;
        try {
            if (x == std::string::npos) {
                throw std::invalid_argument("no separator");
            }
            std::size_t used = 0;
            s.m = std::stoi(item.substr(0, x), &used);
            if (used != x) {
                throw std::invalid_argument("trailing characters");
            }
            const std::string rest = item.substr(x + 1);
            s.n = std::stoi(rest, &used);
            if (used != rest.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw ConfigError("shapes: cannot parse \"" + item + "\" (expected MxN)");
        }
        if (s.m < 1 || s.m > 4 || s.n < 1 || s.n > 4) {
            throw ConfigError("shapes: \"" + item + "\" outside 1..4");
        }
        out.push_back(s);
    }
    if (out.empty()) {
        throw ConfigError("shapes: empty list");
    }
    return out;
}

Rational random_rational(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> den_dist(1, 4);
    const long den = den_dist(rng);
    std::uniform_int_distribution<long> num_dist(-5 * den, 5 * den);
    return make_rational(num_dist(rng), den);
}

Matrix<Rational> random_rational_matrix(std::mt19937_64& rng, int rows, int cols)
{
    Matrix<Rational> out(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            out(r, c) = random_rational(rng);
        }
    }
    return out;
}

nlohmann::json rational_matrix_json(const Matrix<Rational>& a)
{
    nlohmann::json out = nlohmann::json::array();
    for (int r = 0; r < a.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < a.cols(); ++c) {
            row.push_back(a(r, c).get_str());
        }
        out.push_back(row);
    }
    return out;
}

bool VerifyReport::all_passed() const
{
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.failed == 0; });
}

nlohmann::json VerifyReport::to_json() const
{
    nlohmann::json doc;
    doc["seed"] = seed;
    doc["samples"] = samples;
    nlohmann::json shape_list = nlohmann::json::array();
    for (const auto& s : shapes) {
        shape_list.push_back({s.m, s.n});
    }
    doc["shapes"] = shape_list;
    nlohmann::json suite_list = nlohmann::json::array();
    for (const auto& s : suites) {
        nlohmann::json entry{{"suite", s.suite}, {"passed", s.passed}, {"failed", s.failed}};
        if (s.shape.m > 0) {
            entry["shape"] = {s.shape.m, s.shape.n};
        }
        suite_list.push_back(entry);
    }
    doc["suites"] = suite_list;
    nlohmann::json failure_list = nlohmann::json::array();
    for (const auto& f : failures) {
        nlohmann::json entry{{"suite", f.suite}, {"reproducer", f.reproducer}};
        if (f.shape.m > 0) {
            entry["shape"] = {f.shape.m, f.shape.n};
        }
        failure_list.push_back(entry);
    }
    doc["failures"] = failure_list;
    doc["all_passed"] = all_passed();
    return doc;
}

VerifyReport run_verify(const VerifyOptions& options)
{
    if (options.samples < 0) {
        throw ConfigError("samples: must be non-negative");
    }
    VerifyReport report;
    report.seed = options.seed;
    report.samples = options.samples;
    report.shapes = options.shapes;
    // Reserve so references handed out by Runner::suite stay valid.
    report.suites.reserve(options.shapes.size() * 5 + 1);
    if (options.samples == 0) {
        return report;
    }
    Runner runner(report);
    std::mt19937_64 rng(options.seed);
    for (const auto& shape : options.shapes) {
        run_shape(runner, report, shape, options.samples, rng);
    }
    run_parity(runner, report);
    return report;
}

} // namespace brane
