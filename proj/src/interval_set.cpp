#include "qcspec/interval_set.hpp"

#include <algorithm>
#include <cmath>

namespace qcs {

IntervalSet::IntervalSet(std::vector<Interval> intervals) {
    for (const auto& iv : intervals)
        if (!(iv.left <= iv.right)) throw InvalidArgument("interval with left > right");
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.left < b.left || (a.left == b.left && a.right < b.right); });
    for (const auto& iv : intervals) {
        if (!intervals_.empty() && iv.left <= intervals_.back().right)
            intervals_.back().right = std::max(intervals_.back().right, iv.right);
        else
            intervals_.push_back(iv);
    }
}

double IntervalSet::measure() const {
    double m = 0;
    for (const auto& iv : intervals_) m += iv.length();
    return m;
}

bool IntervalSet::contains(double x, double tol) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](double v, const Interval& iv) { return v < iv.left; });
    if (it != intervals_.end() && it->left - tol <= x) return true;
    if (it == intervals_.begin()) return false;
    --it;
    return x <= it->right + tol;
}

IntervalSet IntervalSet::dilate(double eps) const {
    std::vector<Interval> v;
    for (const auto& iv : intervals_) v.push_back({iv.left - eps, iv.right + eps});
    return IntervalSet(std::move(v));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    std::vector<Interval> v = intervals_;
    v.insert(v.end(), other.intervals_.begin(), other.intervals_.end());
    return IntervalSet(std::move(v));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    std::vector<Interval> v;
    std::size_t i = 0, j = 0;
    while (i < intervals_.size() && j < other.intervals_.size()) {
        const auto& a = intervals_[i];
        const auto& b = other.intervals_[j];
        const double l = std::max(a.left, b.left), r = std::min(a.right, b.right);
        if (l <= r) v.push_back({l, r});
        if (a.right < b.right) ++i; else ++j;
    }
    return IntervalSet(std::move(v));
}

double IntervalSet::symmetric_difference(const IntervalSet& other) const {
    return measure() + other.measure() - 2.0 * intersect(other).measure();
}

bool IntervalSet::subset_of(const IntervalSet& other, double tol) const {
    const IntervalSet wide = other.dilate(tol);
    for (const auto& iv : intervals_) {
        auto it = std::upper_bound(wide.intervals_.begin(), wide.intervals_.end(), iv.left,
                                   [](double v, const Interval& w) { return v < w.left; });
        if (it == wide.intervals_.begin()) return false;
        --it;
        if (iv.right > it->right) return false;
    }
    return true;
}

Index IntervalSet::box_count(double eps) const {
    if (!(eps > 0)) throw InvalidArgument("box size must be positive");
    constexpr double slack = 1e-9;  // absorbs rounding of endpoints lying on box edges
    Index count = 0;
    bool have_last = false;
    double last = 0;
    for (const auto& iv : intervals_) {
        double lo = std::floor(iv.left / eps + slack);
        double hi = std::ceil(iv.right / eps - slack) - 1;
        if (hi < lo) hi = lo;
        if (have_last && lo <= last) lo = last + 1;
        if (hi >= lo) count += static_cast<Index>(hi - lo + 1);
        if (!have_last || hi > last) last = hi;
        have_last = true;
    }
    return count;
}

IntervalSet cantor_set(int level) {
    std::vector<Interval> v{{0.0, 1.0}};
    for (int l = 0; l < level; ++l) {
        std::vector<Interval> next;
        for (const auto& iv : v) {
            const double t = iv.length() / 3.0;
            next.push_back({iv.left, iv.left + t});
            next.push_back({iv.right - t, iv.right});
        }
        v.swap(next);
    }
    return IntervalSet(std::move(v));
}

}  // namespace qcs
