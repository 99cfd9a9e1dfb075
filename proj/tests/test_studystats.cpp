#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracle.hpp"
#include "stclone/errors.hpp"
#include "stclone/studystats.hpp"

using namespace stclone;

namespace {

using Matrix = std::vector<std::vector<double>>;

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Matrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::normal_distribution<double> noise(0.0, 1.0);
    Matrix m(n, std::vector<double>(k));
    for (auto& row : m) {
        const double subject = 2.0 * noise(rng);
        for (std::size_t j = 0; j < k; ++j) row[j] = subject + 0.3 * static_cast<double>(j) + noise(rng);
    }
    return m;
}

// Rescales the subject effect of `m` so that MSR / MSE equals `target_f`.
Matrix with_f(Matrix m, double target_f) {
    const auto n = m.size();
    const auto k = m.front().size();
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (const double x : m[i]) row_mean[i] += x / static_cast<double>(k);
        grand += row_mean[i] / static_cast<double>(n);
    }
    const auto current = icc3k(m).f_value;
    const double s = std::sqrt(target_f / current);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& x : m[i]) x += (s - 1.0) * (row_mean[i] - grand);
    }
    return m;
}

}  // namespace

TEST_CASE("likert mapping") {
    CHECK(likert_value("Strongly agree") == 1.0);
    CHECK(likert_value("Agree") == 0.5);
    CHECK(likert_value("Neither agree nor disagree") == 0.0);
    CHECK(likert_value("Disagree") == -0.5);
    CHECK(likert_value("strongly Disagree ") == -1.0);
    CHECK(likert_value("  NEITHER  agree nor\tdisagree") == 0.0);
    try {
        likert_value("Somewhat agree");
        FAIL("expected UnknownLabel");
    } catch (const UnknownLabel& e) {
        CHECK(e.label() == "Somewhat agree");
    }
}

TEST_CASE("aggregate ratings are rater means") {
    RatingSheet sheet;
    sheet.set_response(ResponseVariable::Aspect, "c1", "r1", "Strongly agree");
    sheet.set_response(ResponseVariable::Aspect, "c1", "r2", "Agree");
    sheet.set_response(ResponseVariable::Aspect, "c1", "r3", "Strongly agree");
    sheet.set_response(ResponseVariable::Aspect, "c2", "r1", "Neither agree nor disagree");
    sheet.set_response(ResponseVariable::Aspect, "c2", "r2", "Neither agree nor disagree");
    sheet.set_response(ResponseVariable::Aspect, "c2", "r3", "neither agree nor disagree");
    const auto means = aggregate_ratings(sheet, ResponseVariable::Aspect);
    REQUIRE(means.size() == 2);
    CHECK(near(means[0], 2.5 / 3.0, 1e-15));
    CHECK(means[1] == 0.0);
}

TEST_CASE("aggregate ratings on a random sheet equal a recount") {
    static const char* labels[] = {"Strongly disagree", "Disagree", "Neither agree nor disagree", "Agree",
                                   "Strongly agree"};
    std::mt19937_64 rng(10);
    RatingSheet sheet;
    std::vector<std::vector<int>> idx(10, std::vector<int>(3));
    for (int c = 0; c < 10; ++c) {
        for (int r = 0; r < 3; ++r) {
            idx[c][r] = static_cast<int>(rng() % 5);
            sheet.set_response(ResponseVariable::Relevance, "c" + std::to_string(c), "r" + std::to_string(r),
                               labels[idx[c][r]]);
        }
    }
    const auto means = aggregate_ratings(sheet, ResponseVariable::Relevance);
    for (int c = 0; c < 10; ++c) {
        const double want = ((idx[c][0] - 2) + (idx[c][1] - 2) + (idx[c][2] - 2)) * 0.5 / 3.0;
        CHECK(near(means[static_cast<std::size_t>(c)], want, 1e-15));
        CHECK(means[static_cast<std::size_t>(c)] >= -1.0);
        CHECK(means[static_cast<std::size_t>(c)] <= 1.0);
    }
}

TEST_CASE("incomplete sheets list the missing cells") {
    RatingSheet sheet;
    sheet.set_response(ResponseVariable::Logical, "c1", "r1", "Agree");
    sheet.set_response(ResponseVariable::Logical, "c1", "r2", "Agree");
    sheet.set_response(ResponseVariable::Logical, "c2", "r1", "Agree");
    sheet.set_response(ResponseVariable::Aspect, "c2", "r2", "Agree");
    try {
        aggregate_ratings(sheet, ResponseVariable::Logical);
        FAIL("expected IncompleteSheet");
    } catch (const IncompleteSheet& e) {
        REQUIRE(e.missing().size() == 1);
        CHECK(e.missing()[0] == IncompleteSheet::Cell{"c2", "r2"});
    }
    CHECK(sheet.variables() == std::vector<ResponseVariable>{ResponseVariable::Aspect, ResponseVariable::Logical});
}

TEST_CASE("zero residual gives icc 1 with p 0") {
    const Matrix m = {{1, 2}, {2, 3}, {3, 4}};
    const auto r = icc3k(m);
    CHECK(r.icc == 1.0);
    CHECK(std::isinf(r.f_value));
    CHECK(r.p_value == 0.0);
    CHECK(r.ci_lower == 1.0);
    CHECK(r.ci_upper == 1.0);
    CHECK(r.df1 == 2);
    CHECK(r.df2 == 2);
}

TEST_CASE("equal subject means are degenerate") {
    CHECK_THROWS_AS(icc3k(Matrix{{1, 2}, {2, 1}, {1.5, 1.5}}), DegenerateData);
    CHECK_THROWS_AS(icc3k(Matrix{{0, 0}, {0, 0}}), DegenerateData);
}

TEST_CASE("shape errors") {
    CHECK_THROWS_AS(icc3k(Matrix{{1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(icc3k(Matrix{{1}, {2}}), std::invalid_argument);
    CHECK_THROWS_AS(icc3k(Matrix{{1, 2}, {2}}), std::invalid_argument);
    CHECK_THROWS_AS(icc3k(Matrix{{1, 2}, {2, 4}}, 0.0), std::invalid_argument);
}

TEST_CASE("worked six-by-four matrix") {
    const Matrix m = {{9, 2, 5, 8}, {6, 1, 3, 2}, {8, 4, 6, 8}, {7, 1, 2, 6}, {10, 5, 6, 9}, {6, 2, 4, 7}};
    const auto r = icc3k(m);
    // Frozen from a scipy two-way ANOVA run.
    CHECK(near(r.icc, 0.9093155423770697, 1e-9));
    CHECK(near(r.f_value, 11.027247956403299, 1e-9));
    CHECK(near(r.ci_lower, 0.6756747138163053, 1e-6));
    CHECK(near(r.ci_upper, 0.9858916781690623, 1e-6));
    CHECK(near(r.p_value, 0.00013456651648433476, 1e-10));
    CHECK(near(r.ms_rows, 11.241666666666669, 1e-9));
    CHECK(near(r.ms_columns, 32.486111111111114, 1e-9));
    CHECK(near(r.ms_error, 1.019444444444442, 1e-9));
    CHECK(r.df1 == 5);
    CHECK(r.df2 == 15);
    const auto o = testing::anova_oracle(m);
    CHECK(near(r.icc, o.icc, 1e-12));
    CHECK(near(r.ci_lower, o.ci_lower, 1e-9));
}

TEST_CASE("table of five F values at n = 480, k = 3") {
    struct Row {
        double f;
        double icc;
        double lo;
        double hi;
    };
    const Row rows[] = {{5.528, 0.819, 0.789, 0.845}, {10.193, 0.902, 0.886, 0.916}, {26.080, 0.962, 0.955, 0.967},
                        {2.019, 0.505, 0.423, 0.577}, {4.999, 0.800, 0.767, 0.829}};
    std::mt19937_64 rng(480);
    for (const auto& row : rows) {
        const auto m = with_f(random_matrix(rng, 480, 3), row.f);
        const auto r = icc3k(m);
        CAPTURE(row.f);
        CHECK(r.df1 == 479);
        CHECK(r.df2 == 958);
        CHECK(near(r.f_value, row.f, 1e-9));
        CHECK(near(r.icc, 1.0 - 1.0 / r.f_value, 1e-12));
        CHECK(near(r.icc, row.icc, 0.001));
        CHECK(near(r.ci_lower, row.lo, 0.001));
        CHECK(near(r.ci_upper, row.hi, 0.001));
        CHECK(r.p_value < 1e-12);
    }
}

TEST_CASE("random matrices agree with the ANOVA oracle") {
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 100; ++iter) {
        const auto n = 5 + rng() % 46;
        const auto k = 2 + rng() % 4;
        const auto m = random_matrix(rng, n, k);
        const auto r = icc3k(m);
        const auto o = testing::anova_oracle(m);
        CAPTURE(n);
        CAPTURE(k);
        CHECK(near(r.icc, o.icc, 1e-9));
        CHECK(near(r.f_value, o.f_value, 1e-9 * std::max(1.0, o.f_value)));
        CHECK(near(r.ci_lower, o.ci_lower, 1e-6));
        CHECK(near(r.ci_upper, o.ci_upper, 1e-6));
        CHECK(near(r.p_value, o.p_value, 1e-9));
        CHECK(r.ci_lower <= r.icc);
        CHECK(r.icc <= r.ci_upper);
        CHECK(r.df1 == static_cast<int>(n - 1));
        CHECK(r.df2 == static_cast<int>((n - 1) * (k - 1)));
    }
}

TEST_CASE("shift invariance and scale covariance") {
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 20; ++iter) {
        const auto m = random_matrix(rng, 12, 4);
        const auto base = icc3k(m);
        auto shifted = m;
        for (auto& row : shifted) row[2] += 3.75;
        const auto s = icc3k(shifted);
        CHECK(near(s.icc, base.icc, 1e-10));
        CHECK(near(s.f_value, base.f_value, 1e-8 * base.f_value));
        CHECK(near(s.ci_lower, base.ci_lower, 1e-9));
        CHECK(near(s.ci_upper, base.ci_upper, 1e-9));
        for (const double c : {-2.5, 0.1, 7.0}) {
            auto scaled = m;
            for (auto& row : scaled) {
                for (auto& x : row) x *= c;
            }
            CHECK(near(icc3k(scaled).icc, base.icc, 1e-10));
        }
    }
}

TEST_CASE("group summary quartiles") {
    const std::vector<double> three = {1, -1, 0};
    auto s = group_summary(three);
    CHECK(s.median == 0.0);
    CHECK(s.mean == 0.0);
    CHECK(s.min == -1.0);
    CHECK(s.max == 1.0);
    CHECK(s.q1 == -1.0);
    CHECK(s.q3 == 1.0);
    CHECK(s.count == 3);

    const std::vector<double> flat = {0.5, 0.5, 0.5, 0.5};
    s = group_summary(flat);
    CHECK(s.q1 == 0.5);
    CHECK(s.median == 0.5);
    CHECK(s.q3 == 0.5);

    const std::vector<double> one = {0.25};
    s = group_summary(one);
    CHECK(s.q1 == 0.25);
    CHECK(s.q3 == 0.25);

    const std::vector<double> eight = {8, 1, 7, 2, 6, 3, 5, 4};
    s = group_summary(eight);
    CHECK(s.q1 == 2.5);
    CHECK(s.median == 4.5);
    CHECK(s.q3 == 6.5);

    CHECK_THROWS_AS(group_summary(std::vector<double>{}), EmptyGroup);
}

TEST_CASE("group summary on random values equals the quantile oracle") {
    std::mt19937_64 rng(100);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (const std::size_t n : {100u, 101u, 2u, 5u}) {
        std::vector<double> v(n);
        for (auto& x : v) x = unit(rng);
        const auto s = group_summary(v);
        const auto [q1, med, q3] = testing::quartiles_oracle(v);
        CHECK(s.q1 == q1);
        CHECK(s.median == med);
        CHECK(s.q3 == q3);
    }
}

TEST_CASE("variable names round trip") {
    for (const auto v : kAllResponseVariables) CHECK(parse_variable(variable_name(v)) == v);
    CHECK(parse_variable("Structural") == ResponseVariable::Structural);
    CHECK_FALSE(parse_variable("style").has_value());
}
