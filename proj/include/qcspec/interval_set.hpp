#pragma once

// Finite unions of closed real intervals.

#include <vector>

#include "qcspec/common.hpp"

namespace qcs {

struct Interval {
    double left = 0;
    double right = 0;
    double length() const { return right - left; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

class IntervalSet {
public:
    IntervalSet() = default;
    /// Sorts and merges overlapping or touching intervals.
    explicit IntervalSet(std::vector<Interval> intervals);

    const std::vector<Interval>& intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    bool empty() const { return intervals_.empty(); }
    double measure() const;
    bool contains(double x, double tol = 0.0) const;

    /// Every interval widened by eps on both sides.
    IntervalSet dilate(double eps) const;
    IntervalSet unite(const IntervalSet& other) const;
    IntervalSet intersect(const IntervalSet& other) const;
    /// Measure of the symmetric difference.
    double symmetric_difference(const IntervalSet& other) const;
    /// this is contained in `other` widened by tol.
    bool subset_of(const IntervalSet& other, double tol) const;

    /// Number of boxes [j eps, (j+1) eps) meeting the set, intervals taken
    /// half-open.  A degenerate interval counts one box.
    Index box_count(double eps) const;

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<Interval> intervals_;
};

/// Middle-thirds Cantor construction on [0,1] after `level` steps.
IntervalSet cantor_set(int level);

}  // namespace qcs
