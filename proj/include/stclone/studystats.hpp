#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stclone {

/// Inspection response variables: the four clone natures plus refactoring relevance.
enum class ResponseVariable { Aspect, Logical, Structural, Syntactical, Relevance };

inline constexpr std::array<ResponseVariable, 5> kAllResponseVariables = {
    ResponseVariable::Aspect, ResponseVariable::Logical, ResponseVariable::Structural,
    ResponseVariable::Syntactical, ResponseVariable::Relevance,
};

std::string_view variable_name(ResponseVariable v);  // lower-case
std::optional<ResponseVariable> parse_variable(std::string_view name);

/// Maps a 5-point agreement label onto {-1, -0.5, 0, 0.5, 1}.
/// Case and surrounding whitespace are ignored. Throws UnknownLabel.
double likert_value(std::string_view label);

/// Clone x rater responses, stored as the raw Likert labels.
class RatingSheet {
public:
    /// Records one response; subjects and raters are added on first sight.
    void set_response(ResponseVariable variable, const std::string& clone_id,
                      const std::string& rater_id, std::string label);

    const std::vector<std::string>& subjects() const { return subjects_; }
    const std::vector<std::string>& raters() const { return raters_; }
    std::vector<ResponseVariable> variables() const;

    /// n x k mapped values, rows in subject order. Throws IncompleteSheet.
    std::vector<std::vector<double>> matrix(ResponseVariable variable) const;

private:
    std::size_t subject_index(const std::string& id);
    std::size_t rater_index(const std::string& id);

    std::vector<std::string> subjects_;
    std::vector<std::string> raters_;
    std::map<std::string, std::size_t> subject_lookup_;
    std::map<std::string, std::size_t> rater_lookup_;
    std::map<ResponseVariable, std::map<std::pair<std::size_t, std::size_t>, std::string>> cells_;
};

/// Mean over raters per clone, in subject order.
std::vector<double> aggregate_ratings(const RatingSheet& sheet, ResponseVariable variable);

struct IccResult {
    double icc = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    double f_value = 0.0;  // +inf for zero residual
    int df1 = 0;
    int df2 = 0;
    double p_value = 1.0;
    // Mean squares of the two-way ANOVA.
    double ms_rows = 0.0;
    double ms_columns = 0.0;
    double ms_error = 0.0;
};

/**
 * Two-way mixed, consistency, average-measures ICC (ICC(3,k)) of an n x k
 * matrix (rows are subjects, columns are raters).
 *
 * icc = (MSR - MSE) / MSR = 1 - 1/F with F = MSR / MSE on (n-1, (n-1)(k-1))
 * degrees of freedom. The 1 - alpha interval is
 *   [1 - F_{1-alpha/2}(df1, df2) / F,  1 - 1 / (F * F_{1-alpha/2}(df2, df1))].
 * A zero residual yields icc = 1, F = +inf, p = 0 and a degenerate interval.
 * Throws DegenerateData when the subject means are all equal and
 * std::invalid_argument for ragged input or n, k < 2.
 */
IccResult icc3k(std::span<const std::vector<double>> matrix, double alpha = 0.05);

struct GroupSummary {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double mean = 0.0;
    std::size_t count = 0;
};

/// Quartiles by the median-of-halves rule: q1 and q3 are the medians of the
/// values strictly below and above the median position (the middle element
/// is excluded for odd counts). Throws EmptyGroup.
GroupSummary group_summary(std::span<const double> values);

}  // namespace stclone
