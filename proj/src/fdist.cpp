#include "stclone/fdist.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace stclone {

namespace {

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    constexpr int max_terms = 100000;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_terms; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

// (I_x(a, b), 1 - I_x(a, b)) with y = 1 - x supplied by the caller. The
// continued fraction is evaluated for the smaller tail; the other is its complement.
std::pair<double, double> beta_tails(double x, double y, double a, double b) {
    if (x <= 0.0) return {0.0, 1.0};
    if (y <= 0.0) return {1.0, 0.0};
    const double front = std::exp(a * std::log(x) + b * std::log(y) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double lower = front * beta_continued_fraction(x, a, b) / a;
        return {lower, 1.0 - lower};
    }
    const double upper = front * beta_continued_fraction(y, b, a) / b;
    return {1.0 - upper, upper};
}

// Solves I_x(a, b) = p by Newton steps kept inside a shrinking bisection bracket.
double solve_incomplete_beta(double p, double a, double b) {
    const double lbeta = log_beta(a, b);
    double lo = 0.0;
    double hi = 1.0;
    double x = a / (a + b);
    for (int iter = 0; iter < 400; ++iter) {
        const double f = beta_tails(x, 1.0 - x, a, b).first - p;
        if (f == 0.0) return x;
        if (f < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        const double log_pdf = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta;
        const double pdf = std::exp(log_pdf);
        double next = (pdf > 0.0 && std::isfinite(pdf)) ? x - f / pdf : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x ||
            hi - lo <= std::numeric_limits<double>::min())
            return next;
        x = next;
    }
    return x;
}

}  // namespace

double incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0) || !(x >= 0.0 && x <= 1.0))
        throw std::domain_error("incomplete_beta: bad arguments");
    return beta_tails(x, 1.0 - x, a, b).first;
}

double inverse_incomplete_beta(double p, double a, double b) {
    if (!(a > 0.0 && b > 0.0) || !(p >= 0.0 && p <= 1.0))
        throw std::domain_error("inverse_incomplete_beta: bad arguments");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    return solve_incomplete_beta(p, a, b);
}

namespace {

void check_df(double df1, double df2) {
    if (!(df1 > 0.0 && df2 > 0.0)) throw std::domain_error("F distribution: degrees of freedom must be positive");
}

// Both tails of F at x, each evaluated without cancellation.
std::pair<double, double> f_tails(double x, double df1, double df2) {
    check_df(df1, df2);
    if (std::isnan(x)) throw std::domain_error("F distribution: x is NaN");
    if (x <= 0.0) return {0.0, 1.0};
    if (std::isinf(x)) return {1.0, 0.0};
    const double u = df1 * x;
    return beta_tails(u / (u + df2), df2 / (u + df2), df1 / 2.0, df2 / 2.0);
}

}  // namespace

double f_cdf(double x, double df1, double df2) { return f_tails(x, df1, df2).first; }

double f_sf(double x, double df1, double df2) { return f_tails(x, df1, df2).second; }

double f_quantile(double p, double df1, double df2) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("f_quantile: p must lie in (0, 1)");
    if (!(df1 >= 1.0 && df2 >= 1.0)) throw std::domain_error("f_quantile: degrees of freedom must be >= 1");
    const double a = df1 / 2.0;
    const double b = df2 / 2.0;
    // X = df1 F / (df1 F + df2) ~ Beta(a, b); Y = 1 - X ~ Beta(b, a).
    // Solve for whichever of X, Y is small so that F = (df2/df1) X / Y keeps precision.
    double x = 0.0;
    double y = 0.0;
    if (p <= 0.5) {
        x = inverse_incomplete_beta(p, a, b);
        y = 1.0 - x;
        if (x > 0.5) {
            y = inverse_incomplete_beta(1.0 - p, b, a);
            x = 1.0 - y;
        }
    } else {
        y = inverse_incomplete_beta(1.0 - p, b, a);
        x = 1.0 - y;
        if (y > 0.5) {
            x = inverse_incomplete_beta(p, a, b);
            y = 1.0 - x;
        }
    }
    if (y <= 0.0) return std::numeric_limits<double>::infinity();
    return (df2 / df1) * (x / y);
}

}  // namespace stclone
