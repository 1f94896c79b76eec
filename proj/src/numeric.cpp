#include "conflab/numeric.hpp"

#include <cmath>

#include "conflab/errors.hpp"

namespace conflab {

void LogSumExp::add(double log_term) noexcept {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term > max_) {
        if (!empty()) {
            double rescale = std::exp(max_ - log_term);
            CompensatedSum r;
            r.add(scaled_.value() * rescale);
            scaled_ = r;
        }
        max_ = log_term;
    }
    scaled_.add(std::exp(log_term - max_));
}

double LogSumExp::value() const noexcept {
    if (empty()) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(scaled_.value());
}

double log_sum_exp(std::span<const double> log_terms) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : log_terms) m = std::max(m, v);
    if (m == -std::numeric_limits<double>::infinity()) return m;
    CompensatedSum s;
    for (double v : log_terms) s.add(std::exp(v - m));
    return m + std::log(s.value());
}

double frac(double x) noexcept {
    double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

long double frac(long double x) noexcept {
    long double f = x - std::floor(x);
    return f >= 1.0L ? 0.0L : f;
}

HighFloat frac(const HighFloat& x) {
    HighFloat f = x - boost::multiprecision::floor(x);
    return f >= 1 ? HighFloat(0) : f;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) throw InvalidArgument("fit_line needs at least 3 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) throw InvalidArgument("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - fit.intercept - fit.slope * x[i];
        rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
    fit.points = x.size();
    return fit;
}

double round_significant(double v, int digits) {
    if (v == 0.0) return 0.0;
    if (!std::isfinite(v)) return v;
    int exponent = static_cast<int>(std::floor(std::log10(std::abs(v))));
    int shift = digits - 1 - exponent;
    if (shift > 300 || shift < -300) return v;
    double scale = std::pow(10.0, shift);
    double r = std::round(v * scale) / scale;
    return r == 0.0 ? 0.0 : r;
}

}  // namespace conflab
