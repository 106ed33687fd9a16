#pragma once

// Small regression helpers for log-log fits.

#include <vector>

#include "qcspec/common.hpp"

namespace qcs {

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double residual = 0;  // root-mean-square residual
    int points = 0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// Median of pairwise slopes.
double theil_sen_slope(const std::vector<double>& x, const std::vector<double>& y);

struct WindowedSlopes {
    std::vector<double> slopes;  // one per window of `width` consecutive points
    double min = 0;
    double max = 0;
};

/// Slopes over sliding windows of `width` consecutive points, Theil-Sen when
/// robust is set, least squares otherwise.
WindowedSlopes windowed_slopes(const std::vector<double>& x, const std::vector<double>& y, int width,
                               bool robust = true);

/// n points geometrically spaced from a to b inclusive.
std::vector<double> log_space(double a, double b, int n);
std::vector<double> lin_space(double a, double b, int n);

}  // namespace qcs
