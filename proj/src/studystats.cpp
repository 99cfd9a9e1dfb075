#include "stclone/studystats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "stclone/errors.hpp"
#include "stclone/fdist.hpp"

namespace stclone {

namespace {

std::string fold(std::string_view label) {
    std::string out;
    bool pending_space = false;
    for (const unsigned char c : label) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

double median_of_sorted(std::span<const double> v) {
    const auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

IncompleteSheet::IncompleteSheet(std::vector<Cell> missing)
    : Error([&] {
          std::string msg = "incomplete rating sheet; missing (clone, rater):";
          for (const auto& [clone, rater] : missing) msg += " (" + clone + ", " + rater + ")";
          return msg;
      }()),
      missing_(std::move(missing)) {}

std::string_view variable_name(ResponseVariable v) {
    switch (v) {
        case ResponseVariable::Aspect: return "aspect";
        case ResponseVariable::Logical: return "logical";
        case ResponseVariable::Structural: return "structural";
        case ResponseVariable::Syntactical: return "syntactical";
        case ResponseVariable::Relevance: return "relevance";
    }
    return "?";
}

std::optional<ResponseVariable> parse_variable(std::string_view name) {
    const auto folded = fold(name);
    for (const auto v : kAllResponseVariables) {
        if (variable_name(v) == folded) return v;
    }
    return std::nullopt;
}

double likert_value(std::string_view label) {
    const auto folded = fold(label);
    if (folded == "strongly disagree") return -1.0;
    if (folded == "disagree") return -0.5;
    if (folded == "neither agree nor disagree") return 0.0;
    if (folded == "agree") return 0.5;
    if (folded == "strongly agree") return 1.0;
    throw UnknownLabel(std::string(label));
}

std::size_t RatingSheet::subject_index(const std::string& id) {
    auto [it, inserted] = subject_lookup_.try_emplace(id, subjects_.size());
    if (inserted) subjects_.push_back(id);
    return it->second;
}

std::size_t RatingSheet::rater_index(const std::string& id) {
    auto [it, inserted] = rater_lookup_.try_emplace(id, raters_.size());
    if (inserted) raters_.push_back(id);
    return it->second;
}

void RatingSheet::set_response(ResponseVariable variable, const std::string& clone_id,
                               const std::string& rater_id, std::string label) {
    const auto s = subject_index(clone_id);
    const auto r = rater_index(rater_id);
    cells_[variable][{s, r}] = std::move(label);
}

std::vector<ResponseVariable> RatingSheet::variables() const {
    std::vector<ResponseVariable> out;
    for (const auto& [v, cells] : cells_) out.push_back(v);
    return out;
}

std::vector<std::vector<double>> RatingSheet::matrix(ResponseVariable variable) const {
    static const std::map<std::pair<std::size_t, std::size_t>, std::string> none;
    const auto it = cells_.find(variable);
    const auto& cells = it == cells_.end() ? none : it->second;

    std::vector<IncompleteSheet::Cell> missing;
    std::vector<std::vector<double>> m(subjects_.size(), std::vector<double>(raters_.size(), 0.0));
    for (std::size_t s = 0; s < subjects_.size(); ++s) {
        for (std::size_t r = 0; r < raters_.size(); ++r) {
            const auto cell = cells.find({s, r});
            if (cell == cells.end()) {
                missing.emplace_back(subjects_[s], raters_[r]);
                continue;
            }
            m[s][r] = likert_value(cell->second);
        }
    }
    if (!missing.empty()) throw IncompleteSheet(std::move(missing));
    return m;
}

std::vector<double> aggregate_ratings(const RatingSheet& sheet, ResponseVariable variable) {
    std::vector<double> means;
    for (const auto& row : sheet.matrix(variable)) {
        means.push_back(std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size()));
    }
    return means;
}

IccResult icc3k(std::span<const std::vector<double>> matrix, double alpha) {
    const std::size_t n = matrix.size();
    if (n < 2) throw std::invalid_argument("icc3k needs at least two subjects");
    const std::size_t k = matrix.front().size();
    if (k < 2) throw std::invalid_argument("icc3k needs at least two raters");
    for (const auto& row : matrix) {
        if (row.size() != k) throw std::invalid_argument("icc3k: ragged rating matrix");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("icc3k: alpha must lie in (0, 1)");

    std::vector<double> row_mean(n, 0.0);
    std::vector<double> col_mean(k, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            row_mean[i] += matrix[i][j];
            col_mean[j] += matrix[i][j];
            grand += matrix[i][j];
        }
    }
    for (auto& r : row_mean) r /= static_cast<double>(k);
    for (auto& c : col_mean) c /= static_cast<double>(n);
    grand /= static_cast<double>(n * k);

    double ss_rows = 0.0;
    double ss_cols = 0.0;
    double ss_err = 0.0;
    double ss_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss_rows += (row_mean[i] - grand) * (row_mean[i] - grand);
    ss_rows *= static_cast<double>(k);
    for (std::size_t j = 0; j < k; ++j) ss_cols += (col_mean[j] - grand) * (col_mean[j] - grand);
    ss_cols *= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double resid = matrix[i][j] - row_mean[i] - col_mean[j] + grand;
            ss_err += resid * resid;
            ss_total += (matrix[i][j] - grand) * (matrix[i][j] - grand);
        }
    }

    IccResult r;
    r.df1 = static_cast<int>(n - 1);
    r.df2 = static_cast<int>((n - 1) * (k - 1));
    r.ms_rows = ss_rows / r.df1;
    r.ms_columns = ss_cols / static_cast<double>(k - 1);
    r.ms_error = ss_err / r.df2;

    constexpr double rel_zero = 1e-12;
    if (ss_total == 0.0 || ss_rows <= rel_zero * ss_total)
        throw DegenerateData("all subject means are equal; ICC(3,k) is undefined");

    if (ss_err <= rel_zero * ss_total) {
        r.ms_error = 0.0;
        r.icc = 1.0;
        r.f_value = std::numeric_limits<double>::infinity();
        r.p_value = 0.0;
        r.ci_lower = 1.0;
        r.ci_upper = 1.0;
        return r;
    }

    r.f_value = r.ms_rows / r.ms_error;
    r.icc = (r.ms_rows - r.ms_error) / r.ms_rows;
    r.p_value = f_sf(r.f_value, r.df1, r.df2);
    const double q = 1.0 - alpha / 2.0;
    r.ci_lower = 1.0 - f_quantile(q, r.df1, r.df2) / r.f_value;
    r.ci_upper = 1.0 - 1.0 / (r.f_value * f_quantile(q, r.df2, r.df1));
    return r;
}

GroupSummary group_summary(std::span<const double> values) {
    if (values.empty()) throw EmptyGroup();
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    GroupSummary s;
    s.count = n;
    s.min = v.front();
    s.max = v.back();
    s.median = median_of_sorted(v);
    const std::span<const double> all(v);
    const auto lower = all.first(n / 2);
    const auto upper = all.subspan((n + 1) / 2);
    s.q1 = lower.empty() ? v.front() : median_of_sorted(lower);
    s.q3 = upper.empty() ? v.back() : median_of_sorted(upper);
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    return s;
}

}  // namespace stclone
