#include "ergokit/intervalset.hpp"

#include <algorithm>

#include "ergokit/error.hpp"

namespace ergokit {

IntervalList normalize_list(IntervalList l) {
    std::erase_if(l, [](const Interval& i) { return i.empty(); });
    std::sort(l.begin(), l.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    IntervalList out;
    for (auto& i : l) {
        if (!out.empty() && i.lo <= out.back().hi) {
            if (out.back().hi < i.hi) out.back().hi = i.hi;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

IntervalList list_op(const IntervalList& a, const IntervalList& b, BoolOp op) {
    std::vector<Scalar> pts;
    pts.reserve(2 * (a.size() + b.size()));
    for (auto& i : a) { pts.push_back(i.lo); pts.push_back(i.hi); }
    for (auto& i : b) { pts.push_back(i.lo); pts.push_back(i.hi); }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    IntervalList out;
    size_t ia = 0, ib = 0;
    for (size_t k = 0; k + 1 < pts.size(); ++k) {
        const Scalar& x = pts[k];
        while (ia < a.size() && a[ia].hi <= x) ++ia;
        while (ib < b.size() && b[ib].hi <= x) ++ib;
        bool inA = ia < a.size() && a[ia].lo <= x;
        bool inB = ib < b.size() && b[ib].lo <= x;
        bool in = false;
        switch (op) {
            case BoolOp::Union: in = inA || inB; break;
            case BoolOp::Intersect: in = inA && inB; break;
            case BoolOp::Diff: in = inA && !inB; break;
            case BoolOp::Symdiff: in = inA != inB; break;
        }
        if (!in) continue;
        if (!out.empty() && out.back().hi == x)
            out.back().hi = pts[k + 1];
        else
            out.push_back({x, pts[k + 1]});
    }
    return out;
}

Scalar list_length(const IntervalList& l) {
    Scalar s;
    for (auto& i : l) s += i.length();
    return s;
}

namespace {

IntervalList clip(const IntervalList& l, const Scalar& a, const Scalar& b) {
    IntervalList out;
    for (auto& i : l) {
        Interval j{max(i.lo, a), min(i.hi, b)};
        if (!j.empty()) out.push_back(j);
    }
    return out;
}

IntervalList shifted(IntervalList l, const Scalar& c) {
    for (auto& i : l) { i.lo += c; i.hi += c; }
    return l;
}

// (base + t*P + pattern) over all integers t, restricted to [a, b).
IntervalList periodic_window(const IntervalList& pattern, const Scalar& base, const Scalar& P,
                             const Scalar& a, const Scalar& b) {
    IntervalList out;
    if (!(a < b) || pattern.empty()) return out;
    mpz_class t = ((a - base) / P).floor() - 1;
    for (;; ++t) {
        Scalar off = base + P * Scalar(t);
        if (!(off < b)) break;
        for (auto& i : pattern) {
            Interval j{max(off + i.lo, a), min(off + i.hi, b)};
            if (!j.empty()) out.push_back(j);
        }
    }
    return normalize_list(out);
}

IntervalList tail_window(const Tail& t, bool right_side, const Scalar& a, const Scalar& b) {
    if (right_side) return periodic_window(t.pattern, t.start, t.period, max(a, t.start), b);
    return periodic_window(t.pattern, t.start, t.period, a, min(b, t.start));
}

Tail rebase(const Tail& t, bool right_side, const Scalar& s) {
    Tail n{s, t.period, {}};
    n.pattern = shifted(periodic_window(t.pattern, t.start, t.period, s, s + t.period), -s);
    (void)right_side;
    return n;
}

Tail with_period(const Tail& t, const Scalar& P) {
    if (t.period == P) return t;
    mpq_class k = rational_ratio(P, t.period);
    if (k.get_den() != 1) throw Error("INCOMMENSURABLE_PERIODS", "period " + P.str() + " is not a multiple of " + t.period.str());
    Tail n{t.start, P, {}};
    for (mpz_class j = 0; j < k.get_num(); ++j)
        for (auto& i : t.pattern) n.pattern.push_back({i.lo + t.period * Scalar(j), i.hi + t.period * Scalar(j)});
    return n;
}

bool full_pattern(const Tail& t) {
    return t.pattern.size() == 1 && t.pattern[0].lo.is_zero() && t.pattern[0].hi == t.period;
}

IntervalList rotate(const IntervalList& pattern, const Scalar& P, const Scalar& q) {
    IntervalList out;
    for (auto& i : pattern) {
        Scalar lo = i.lo + q, hi = i.hi + q;
        if (hi <= P) {
            out.push_back({lo, hi});
        } else if (lo >= P) {
            out.push_back({lo - P, hi - P});
        } else {
            out.push_back({lo, P});
            out.push_back({Scalar(0), hi - P});
        }
    }
    return normalize_list(out);
}

struct Side {
    bool present = false;
    Scalar start, period;
    IntervalList a, b;
};

struct Aligned {
    IntervalList coreA, coreB;
    Side right, left;
};

Aligned align(const IntervalSet& A, const IntervalSet& B) {
    std::vector<Scalar> lows, highs;
    for (const IntervalSet* S : {&A, &B}) {
        if (!S->core.empty()) {
            lows.push_back(S->core.front().lo);
            highs.push_back(S->core.back().hi);
        }
        if (S->right) { lows.push_back(S->right->start); highs.push_back(S->right->start); }
        if (S->left) { lows.push_back(S->left->start); highs.push_back(S->left->start); }
    }
    Aligned al;
    al.coreA = A.core;
    al.coreB = B.core;
    if (lows.empty()) return al;
    Scalar SL = *std::min_element(lows.begin(), lows.end());
    Scalar SR = *std::max_element(highs.begin(), highs.end());

    auto do_side = [&](bool right_side, Side& side) {
        const auto& ta = right_side ? A.right : A.left;
        const auto& tb = right_side ? B.right : B.left;
        if (!ta && !tb) return;
        side.present = true;
        side.start = right_side ? SR : SL;
        if (ta && tb) side.period = lcm(ta->period, tb->period);
        else side.period = ta ? ta->period : tb->period;
        auto place = [&](const std::optional<Tail>& t, IntervalList& core, IntervalList& pat) {
            if (!t) return;
            if (right_side) {
                auto extra = tail_window(*t, true, t->start, SR);
                core.insert(core.end(), extra.begin(), extra.end());
            } else {
                auto extra = tail_window(*t, false, SL, t->start);
                core.insert(core.end(), extra.begin(), extra.end());
            }
            Tail r = with_period(rebase(*t, right_side, side.start), side.period);
            pat = r.pattern;
        };
        place(ta, al.coreA, side.a);
        place(tb, al.coreB, side.b);
    };
    do_side(true, al.right);
    do_side(false, al.left);
    al.coreA = normalize_list(al.coreA);
    al.coreB = normalize_list(al.coreB);
    return al;
}

IntervalSet combine(const IntervalSet& A, const IntervalSet& B, BoolOp op) {
    Aligned al = align(A, B);
    IntervalSet out;
    out.core = list_op(al.coreA, al.coreB, op);
    if (al.right.present)
        out.right = Tail{al.right.start, al.right.period, list_op(al.right.a, al.right.b, op)};
    if (al.left.present)
        out.left = Tail{al.left.start, al.left.period, list_op(al.left.a, al.left.b, op)};
    return out.canonical();
}

}  // namespace

IntervalSet IntervalSet::line() {
    IntervalSet s;
    s.right = Tail{Scalar(0), Scalar(1), {{Scalar(0), Scalar(1)}}};
    s.left = Tail{Scalar(0), Scalar(1), {{Scalar(0), Scalar(1)}}};
    return s;
}

IntervalSet IntervalSet::interval(const Scalar& a, const Scalar& b) {
    IntervalSet s;
    if (a < b) s.core.push_back({a, b});
    return s;
}

IntervalSet IntervalSet::ray_right(const Scalar& a) {
    IntervalSet s;
    s.right = Tail{a, Scalar(1), {{Scalar(0), Scalar(1)}}};
    return s;
}

IntervalSet IntervalSet::ray_left(const Scalar& b) {
    IntervalSet s;
    s.left = Tail{b, Scalar(1), {{Scalar(0), Scalar(1)}}};
    return s;
}

IntervalSet IntervalSet::of_prog(const Prog& p) {
    IntervalSet s;
    if (p.I.empty()) return s;
    if (p.step.is_zero()) {
        s.core.push_back(p.I);
        return s;
    }
    Scalar P = p.step.abs();
    Scalar len = min(p.I.length(), P);
    if (p.step.sign() > 0)
        s.right = Tail{p.I.lo, P, {{Scalar(0), len}}};
    else
        s.left = Tail{p.I.lo + P, P, {{Scalar(0), len}}};
    return s.canonical();
}

IntervalSet IntervalSet::of_list(IntervalList l) {
    IntervalSet s;
    s.core = normalize_list(std::move(l));
    return s;
}

ExtMeasure IntervalSet::measure() const {
    if (right || left) return ExtMeasure::inf();
    return ExtMeasure::fin(list_length(core));
}

bool IntervalSet::is_null() const {
    IntervalSet c = canonical();
    return c.core.empty() && !c.right && !c.left;
}

IntervalSet IntervalSet::canonical() const {
    IntervalSet s;
    s.core = normalize_list(core);
    auto fix_tail = [](const std::optional<Tail>& t) -> std::optional<Tail> {
        if (!t) return std::nullopt;
        Tail n = *t;
        if (n.period.sign() <= 0) throw Error("PARSE_ERROR", "tail period must be positive");
        n.pattern = normalize_list(clip(n.pattern, Scalar(0), n.period));
        if (n.pattern.empty()) return std::nullopt;
        if (full_pattern(n)) {
            n.period = Scalar(1);
            n.pattern = {{Scalar(0), Scalar(1)}};
            return n;
        }
        size_t m = n.pattern.size();
        for (size_t k = m; k >= 2; --k) {
            // k copies of a pattern give k*r intervals, or k*(r-1)+1 when a copy wraps around
            if (m % k != 0 && (m - 1) % k != 0) continue;
            Scalar q = n.period / Scalar(static_cast<long>(k));
            if (rotate(n.pattern, n.period, q) == n.pattern) {
                n.period = q;
                n.pattern = clip(n.pattern, Scalar(0), q);
                break;
            }
        }
        return n;
    };
    s.right = fix_tail(right);
    s.left = fix_tail(left);
    if (s.right && s.left && s.left->start > s.right->start) {
        // overlapping tail regions: unroll the left tail down to the right start
        Scalar S = s.right->start;
        auto extra = tail_window(*s.left, false, S, s.left->start);
        // points in [S, sL) belong to the left tail; the right tail also covers them, so union them into the right tail region
        IntervalList rextra = tail_window(*s.right, true, S, s.left->start);
        auto both = list_op(normalize_list(extra), rextra, BoolOp::Union);
        s.core.insert(s.core.end(), both.begin(), both.end());
        s.core = normalize_list(s.core);
        s.left = rebase(*s.left, false, S);
        Scalar top = s.core.empty() ? S : max(S, s.core.back().hi);
        auto rx = tail_window(*s.right, true, S, top);
        s.core.insert(s.core.end(), rx.begin(), rx.end());
        s.core = normalize_list(s.core);
        s.right = rebase(*s.right, true, top);
    }
    // keep the core inside [sL, sR) by unrolling tails outward if needed
    if (s.right && !s.core.empty() && s.core.back().hi > s.right->start) {
        Scalar top = s.core.back().hi;
        auto extra = tail_window(*s.right, true, s.right->start, top);
        s.core.insert(s.core.end(), extra.begin(), extra.end());
        s.core = normalize_list(s.core);
        s.right = rebase(*s.right, true, top);
    }
    if (s.left && !s.core.empty() && s.core.front().lo < s.left->start) {
        Scalar bot = s.core.front().lo;
        auto extra = tail_window(*s.left, false, bot, s.left->start);
        s.core.insert(s.core.end(), extra.begin(), extra.end());
        s.core = normalize_list(s.core);
        s.left = rebase(*s.left, false, bot);
    }
    // pull the right start down while the core continues the periodic pattern
    if (s.right) {
        const Scalar& st = s.right->start;
        const Scalar& P = s.right->period;
        Scalar low = s.left ? s.left->start : (s.core.empty() ? st : min(s.core.front().lo, st)) - P;
        Scalar ns = low;
        for (mpz_class t = 0;; ++t) {
            Scalar bhi = st - P * Scalar(t);
            if (bhi <= low) break;
            Scalar blo = max(bhi - P, low);
            auto E = periodic_window(s.right->pattern, st, P, blo, bhi);
            auto C = clip(s.core, blo, bhi);
            auto D = list_op(E, C, BoolOp::Symdiff);
            if (!D.empty()) {
                ns = D.back().hi;
                break;
            }
        }
        if (ns != st) {
            s.right = Tail{ns, P, shifted(periodic_window(s.right->pattern, st, P, ns, ns + P), -ns)};
            s.core = clip(s.core, s.core.empty() ? ns : min(ns, s.core.front().lo), ns);
        }
    }
    if (s.left) {
        const Scalar& st = s.left->start;
        const Scalar& P = s.left->period;
        Scalar high = s.right ? s.right->start : (s.core.empty() ? st : max(s.core.back().hi, st)) + P;
        Scalar ns = high;
        for (mpz_class t = 0;; ++t) {
            Scalar blo = st + P * Scalar(t);
            if (blo >= high) break;
            Scalar bhi = min(blo + P, high);
            auto E = periodic_window(s.left->pattern, st, P, blo, bhi);
            auto C = clip(s.core, blo, bhi);
            auto D = list_op(E, C, BoolOp::Symdiff);
            if (!D.empty()) {
                ns = D.front().lo;
                break;
            }
        }
        if (ns != st) {
            s.left = Tail{ns, P, shifted(periodic_window(s.left->pattern, st, P, ns - P, ns), P - ns)};
            s.core = clip(s.core, ns, s.core.empty() ? ns : max(ns, s.core.back().hi));
        }
    }
    return s;
}

IntervalSet IntervalSet::translate(const Scalar& c) const {
    IntervalSet s;
    s.core = shifted(core, c);
    if (right) s.right = Tail{right->start + c, right->period, right->pattern};
    if (left) s.left = Tail{left->start + c, left->period, left->pattern};
    return s;
}

std::vector<Prog> IntervalSet::progressions() const {
    std::vector<Prog> out;
    for (auto& i : core) out.push_back({i, Scalar(0)});
    if (right)
        for (auto& i : right->pattern) out.push_back({{right->start + i.lo, right->start + i.hi}, right->period});
    if (left) {
        Scalar base = left->start - left->period;
        for (auto& i : left->pattern) out.push_back({{base + i.lo, base + i.hi}, -left->period});
    }
    return out;
}

IntervalList IntervalSet::window(const Scalar& a, const Scalar& b) const {
    IntervalList out = clip(core, a, b);
    if (right) {
        auto r = tail_window(*right, true, a, b);
        out.insert(out.end(), r.begin(), r.end());
    }
    if (left) {
        auto l = tail_window(*left, false, a, b);
        out.insert(out.end(), l.begin(), l.end());
    }
    return normalize_list(out);
}

bool IntervalSet::contains(const Scalar& x) const {
    for (auto& i : core)
        if (i.lo <= x && x < i.hi) return true;
    auto in_tail = [&](const Tail& t) {
        Scalar r = x - t.start;
        r -= t.period * Scalar((r / t.period).floor());
        for (auto& i : t.pattern)
            if (i.lo <= r && r < i.hi) return true;
        return false;
    };
    if (right && x >= right->start && in_tail(*right)) return true;
    if (left && x < left->start && in_tail(*left)) return true;
    return false;
}

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) { return combine(a, b, BoolOp::Union); }
IntervalSet set_intersect(const IntervalSet& a, const IntervalSet& b) { return combine(a, b, BoolOp::Intersect); }
IntervalSet set_diff(const IntervalSet& a, const IntervalSet& b) { return combine(a, b, BoolOp::Diff); }
IntervalSet set_symdiff(const IntervalSet& a, const IntervalSet& b) { return combine(a, b, BoolOp::Symdiff); }

IntervalSet complement(const IntervalSet& a0) {
    IntervalSet a = a0.canonical();
    if (a.core.empty() && !a.right && !a.left) return IntervalSet::line();
    Scalar SR, SL;
    if (a.right) SR = a.right->start;
    else if (!a.core.empty()) SR = a.core.back().hi;
    else SR = a.left->start;
    if (a.left) SL = a.left->start;
    else if (!a.core.empty()) SL = a.core.front().lo;
    else SL = SR;
    IntervalSet out;
    out.core = list_op({{SL, SR}}, a.core, BoolOp::Diff);
    if (a.right) {
        out.right = Tail{SR, a.right->period, list_op({{Scalar(0), a.right->period}}, a.right->pattern, BoolOp::Diff)};
    } else {
        out.right = Tail{SR, Scalar(1), {{Scalar(0), Scalar(1)}}};
    }
    if (a.left) {
        out.left = Tail{SL, a.left->period, list_op({{Scalar(0), a.left->period}}, a.left->pattern, BoolOp::Diff)};
    } else {
        out.left = Tail{SL, Scalar(1), {{Scalar(0), Scalar(1)}}};
    }
    return out.canonical();
}

bool set_equal(const IntervalSet& a, const IntervalSet& b) { return set_symdiff(a, b).is_null(); }
bool subset(const IntervalSet& a, const IntervalSet& b) { return set_diff(a, b).is_null(); }
bool disjoint(const IntervalSet& a, const IntervalSet& b) { return set_intersect(a, b).is_null(); }

IntervalSet union_all(const std::vector<IntervalSet>& sets0, bool* pairwise_disjoint) {
    // place every set on one frame (common starts, common periods) and merge once
    std::vector<IntervalSet> sets;
    for (auto& s : sets0) sets.push_back(s.canonical());
    std::vector<Scalar> lows, highs;
    std::optional<Scalar> PR, PL;
    for (auto& S : sets) {
        if (!S.core.empty()) {
            lows.push_back(S.core.front().lo);
            highs.push_back(S.core.back().hi);
        }
        if (S.right) {
            lows.push_back(S.right->start);
            highs.push_back(S.right->start);
            PR = PR ? lcm(*PR, S.right->period) : S.right->period;
        }
        if (S.left) {
            lows.push_back(S.left->start);
            highs.push_back(S.left->start);
            PL = PL ? lcm(*PL, S.left->period) : S.left->period;
        }
    }
    if (pairwise_disjoint) *pairwise_disjoint = true;
    if (lows.empty()) return IntervalSet::empty();
    Scalar SL = *std::min_element(lows.begin(), lows.end());
    Scalar SR = *std::max_element(highs.begin(), highs.end());
    IntervalList core, rp, lp;
    for (auto& S : sets) {
        core.insert(core.end(), S.core.begin(), S.core.end());
        if (S.right) {
            auto extra = tail_window(*S.right, true, S.right->start, SR);
            core.insert(core.end(), extra.begin(), extra.end());
            auto pat = with_period(rebase(*S.right, true, SR), *PR).pattern;
            rp.insert(rp.end(), pat.begin(), pat.end());
        }
        if (S.left) {
            auto extra = tail_window(*S.left, false, SL, S.left->start);
            core.insert(core.end(), extra.begin(), extra.end());
            auto pat = with_period(rebase(*S.left, false, SL), *PL).pattern;
            lp.insert(lp.end(), pat.begin(), pat.end());
        }
    }
    IntervalSet out;
    auto merge = [&](IntervalList& l) {
        Scalar total = list_length(l);
        l = normalize_list(std::move(l));
        if (pairwise_disjoint && list_length(l) != total) *pairwise_disjoint = false;
    };
    merge(core);
    out.core = core;
    if (PR) {
        merge(rp);
        out.right = Tail{SR, *PR, rp};
    }
    if (PL) {
        merge(lp);
        out.left = Tail{SL, *PL, lp};
    }
    return out.canonical();
}

IntervalSet sup_increasing(const std::vector<IntervalSet>& sets) {
    if (sets.empty()) throw Error("NOT_INCREASING", "empty family");
    for (size_t i = 0; i + 1 < sets.size(); ++i)
        if (!subset(sets[i], sets[i + 1])) throw Error("NOT_INCREASING", "member " + std::to_string(i) + " is not contained in its successor");
    IntervalSet u = union_all(sets);
    if (u.measure().infinite) throw Error("INFINITE_SUPREMUM", "union has infinite measure");
    return u;
}

IntervalSet staircase_set(const Scalar& t) {
    if (t.sign() < 0 || t > Scalar(1)) throw Error("OUT_OF_RANGE", "staircase parameter must lie in [0,1]");
    if (t.is_zero()) return IntervalSet::empty();
    if (t == Scalar(1)) return IntervalSet::line();
    IntervalSet s;
    s.right = Tail{Scalar(0), Scalar(1), {{Scalar(0), t}}};
    s.left = Tail{Scalar(0), Scalar(1), {{Scalar(0), t}}};
    return s.canonical();
}

}  // namespace ergokit
