#include "qcspec/fit.hpp"

#include <algorithm>
#include <cmath>

namespace qcs {

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("least_squares needs >= 2 paired points");
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
    if (sxx == 0) throw InvalidArgument("least_squares: x values coincide");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    f.points = static_cast<int>(x.size());
    return f;
}

double theil_sen_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("theil_sen_slope needs >= 2 paired points");
    std::vector<double> s;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            if (x[j] != x[i]) s.push_back((y[j] - y[i]) / (x[j] - x[i]));
    if (s.empty()) throw InvalidArgument("theil_sen_slope: x values coincide");
    std::sort(s.begin(), s.end());
    const std::size_t m = s.size() / 2;
    return s.size() % 2 ? s[m] : 0.5 * (s[m - 1] + s[m]);
}

WindowedSlopes windowed_slopes(const std::vector<double>& x, const std::vector<double>& y, int width, bool robust) {
    if (width < 2 || static_cast<std::size_t>(width) > x.size())
        throw InvalidArgument("window width must be in [2, number of points]");
    WindowedSlopes w;
    for (std::size_t i = 0; i + static_cast<std::size_t>(width) <= x.size(); ++i) {
        std::vector<double> xs(x.begin() + static_cast<std::ptrdiff_t>(i), x.begin() + static_cast<std::ptrdiff_t>(i) + width);
        std::vector<double> ys(y.begin() + static_cast<std::ptrdiff_t>(i), y.begin() + static_cast<std::ptrdiff_t>(i) + width);
        w.slopes.push_back(robust ? theil_sen_slope(xs, ys) : least_squares(xs, ys).slope);
    }
    w.min = *std::min_element(w.slopes.begin(), w.slopes.end());
    w.max = *std::max_element(w.slopes.begin(), w.slopes.end());
    return w;
}

std::vector<double> log_space(double a, double b, int n) {
    if (!(a > 0 && b > 0) || n < 1) throw InvalidArgument("log_space needs positive bounds and n >= 1");
    std::vector<double> v;
    if (n == 1) return {a};
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) v.push_back(std::exp(la + (lb - la) * i / (n - 1)));
    v.front() = a;
    v.back() = b;
    return v;
}

std::vector<double> lin_space(double a, double b, int n) {
    if (n < 1) throw InvalidArgument("lin_space needs n >= 1");
    if (n == 1) return {a};
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    v.back() = b;
    return v;
}

}  // namespace qcs
