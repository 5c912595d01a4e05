#pragma once

#include <optional>
#include <vector>

#include "ergokit/scalar.hpp"

namespace ergokit {

struct Interval {
    Scalar lo, hi;
    Scalar length() const { return hi - lo; }
    bool empty() const { return !(lo < hi); }
    friend bool operator==(const Interval&, const Interval&) = default;
};

using IntervalList = std::vector<Interval>;

// Periodic tail. Right tail: {x >= start : (x - start) mod period in pattern}.
// Left tail: {x < start : (x - start) mod period in pattern}.
struct Tail {
    Scalar start, period;
    IntervalList pattern;  // sorted, disjoint, inside [0, period)
    friend bool operator==(const Tail&, const Tail&) = default;
};

// Arithmetic progression of intervals {I + m*step : m >= 0}; step 0 means the single interval I.
struct Prog {
    Interval I;
    Scalar step;
};

class IntervalSet {
public:
    IntervalList core;
    std::optional<Tail> right, left;

    static IntervalSet empty() { return {}; }
    static IntervalSet line();
    static IntervalSet interval(const Scalar& a, const Scalar& b);
    static IntervalSet ray_right(const Scalar& a);  // [a, inf)
    static IntervalSet ray_left(const Scalar& b);   // (-inf, b)
    static IntervalSet of_prog(const Prog& p);
    static IntervalSet of_list(IntervalList l);

    ExtMeasure measure() const;
    bool is_null() const;
    bool bounded() const { return !right && !left; }
    IntervalSet canonical() const;
    IntervalSet translate(const Scalar& c) const;
    // Progressions whose union is this set (core: step 0; tails: one per pattern interval).
    std::vector<Prog> progressions() const;
    // Restriction to the window [a, b) as a finite list.
    IntervalList window(const Scalar& a, const Scalar& b) const;
    bool contains(const Scalar& x) const;

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;
};

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_diff(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_symdiff(const IntervalSet& a, const IntervalSet& b);
IntervalSet complement(const IntervalSet& a);
bool set_equal(const IntervalSet& a, const IntervalSet& b);
bool subset(const IntervalSet& a, const IntervalSet& b);
bool disjoint(const IntervalSet& a, const IntervalSet& b);
// Union of many sets on one common frame; optionally reports whether they were pairwise disjoint a.e.
IntervalSet union_all(const std::vector<IntervalSet>& sets, bool* pairwise_disjoint = nullptr);

IntervalSet sup_increasing(const std::vector<IntervalSet>& sets);
IntervalSet staircase_set(const Scalar& t);

// Helpers on sorted disjoint lists.
IntervalList normalize_list(IntervalList l);
enum class BoolOp { Union, Intersect, Diff, Symdiff };
IntervalList list_op(const IntervalList& a, const IntervalList& b, BoolOp op);
Scalar list_length(const IntervalList& l);

}  // namespace ergokit
