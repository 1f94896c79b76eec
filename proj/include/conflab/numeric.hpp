#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace conflab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using HighFloat = boost::multiprecision::cpp_bin_float_50;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) noexcept {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Streaming log-sum-exp; rescales whenever a new maximum shows up.
class LogSumExp {
public:
    void add(double log_term) noexcept;
    double value() const noexcept;
    bool empty() const noexcept { return max_ == -std::numeric_limits<double>::infinity(); }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    CompensatedSum scaled_;
};

double log_sum_exp(std::span<const double> log_terms);

// Fractional part in [0, 1).
double frac(double x) noexcept;
long double frac(long double x) noexcept;
HighFloat frac(const HighFloat& x);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
};

// Ordinary least squares y = a + b x with the usual standard error on b.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Round to a fixed number of significant digits, so serialized output is stable.
double round_significant(double v, int digits);

}  // namespace conflab
