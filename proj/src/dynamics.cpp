#include "ergokit/dynamics.hpp"

#include <algorithm>
#include <map>

#include "ergokit/coloring.hpp"
#include "ergokit/error.hpp"
#include "ergokit/matcher.hpp"

namespace ergokit {

namespace {

// Largest power tried when looking for periodic points.
constexpr long kMaxPeriod = 360;
// Piece count beyond which power iteration gives up.
constexpr size_t kMaxPieces = 20000;

Scalar S(long v) { return Scalar(v); }

bool full_tail(const Tail& t) { return t.pattern.size() == 1 && t.pattern[0].lo.is_zero() && t.pattern[0].hi == t.period; }

// Points whose whole c-orbit stays in the periodic extension of the tail.
IntervalSet tail_invariant(const Tail& t, const Scalar& c) {
    if (full_tail(t)) return IntervalSet::line();
    IntervalSet Q;
    Q.right = t;
    Q.left = t;
    Q = Q.canonical();
    mpq_class r;
    try {
        r = rational_ratio(t.period, c.abs());
    } catch (const Error&) {
        return IntervalSet::empty();
    }
    long m = mpz_class(r.get_num()).get_si();
    IntervalSet Z = Q;
    for (long k = 1; k < m; ++k) Z = set_intersect(Z, Q.translate(c * S(-k)));
    return Z;
}

// Largest subset P of S with P + c = P.
IntervalSet invariant_core(const IntervalSet& S0, const Scalar& c) {
    IntervalSet s = S0.canonical();
    if (!s.right || !s.left) return IntervalSet::empty();
    IntervalSet Z = set_intersect(tail_invariant(*s.right, c), tail_invariant(*s.left, c));
    if (Z.is_null()) return Z;
    IntervalSet E = set_diff(IntervalSet::interval(s.left->start, s.right->start), s);
    return set_diff(Z, periodize(E, c)).canonical();
}

Scalar piece_shift_const(const Piece& p, bool& constant) {
    constant = p.step.is_zero() || p.beta.is_zero();
    return p.alpha;
}

void find_dissipative(const PMap& T, IntervalSet& R, std::vector<Component>& out) {
    std::map<Scalar, std::vector<IntervalSet>> by_shift;
    for (auto& p : T.pieces()) {
        bool constant;
        Scalar c = piece_shift_const(p, constant);
        if (!constant || c.is_zero()) continue;
        by_shift[c].push_back(IntervalSet::of_prog({p.dom, p.step}));
    }
    for (auto& [c, parts] : by_shift) {
        IntervalSet Sc = set_intersect(union_all(parts), R);
        IntervalSet P = invariant_core(Sc, c);
        if (P.is_null()) continue;
        Component comp;
        comp.set = P;
        comp.kind = Kind::Dissipative;
        comp.k = 1;
        comp.c = c;
        Scalar a = c.abs();
        comp.wandering = set_intersect(P, IntervalSet::interval(Scalar(0), a));
        comp.certificate = "translation by " + c.str() + " on a " + a.str() + "-periodic invariant set";
        out.push_back(comp);
        R = set_diff(R, P);
    }
}

// Shifts of the interval exchange with lengths l: (2 1) for two lengths, (3 2 1) for three.
std::vector<Scalar> iet_shifts(const std::vector<Scalar>& l) {
    if (l.size() == 2) return {l[1], -l[0]};
    return {l[1] + l[2], l[2] - l[0], -l[0] - l[1]};
}

// Rotation number of the circle rotation the exchange is induced from.
Scalar iet_rotation(const std::vector<Scalar>& l) {
    if (l.size() == 2) return l[1] / (l[0] + l[1]);
    return (l[1] + l[2]) / (l[0] + S(2) * l[1] + l[2]);
}

// Adjacent pieces forming a (2 1) or (3 2 1) exchange with irrational rotation number.
void find_rotations(const PMap& T, IntervalSet& R, std::vector<Component>& out) {
    if (R.is_null()) return;
    auto ps = restrict(T, R).pieces();
    std::sort(ps.begin(), ps.end(), [](const Piece& x, const Piece& y) {
        if (x.step != y.step) return x.step < y.step;
        return x.dom.lo < y.dom.lo;
    });
    auto chain = [&](size_t i, size_t k) {
        if (i + k > ps.size()) return false;
        for (size_t j = i; j < i + k; ++j) {
            if (ps[j].step != ps[i].step) return false;
            if (!ps[j].step.is_zero() && !ps[j].beta.is_zero()) return false;
            if (j > i && ps[j - 1].dom.hi != ps[j].dom.lo) return false;
        }
        std::vector<Scalar> l;
        for (size_t j = i; j < i + k; ++j) l.push_back(ps[j].dom.length());
        auto sh = iet_shifts(l);
        for (size_t j = 0; j < k; ++j)
            if (ps[i + j].alpha != sh[j]) return false;
        return !iet_rotation(l).is_rational();
    };
    for (size_t i = 0; i < ps.size(); ++i) {
        size_t k = chain(i, 3) ? 3 : chain(i, 2) ? 2 : 0;
        if (k == 0) continue;
        Component comp;
        comp.kind = Kind::Aperiodic;
        Interval blk{ps[i].dom.lo, ps[i + k - 1].dom.hi};
        comp.blocks.push_back({blk, ps[i].step});
        comp.set = IntervalSet::of_prog({blk, ps[i].step});
        for (size_t j = i; j < i + k; ++j) comp.lengths.push_back(ps[j].dom.length());
        comp.rotation = iet_rotation(comp.lengths);
        comp.certificate = (k == 2 ? "rotation number " : "induced from a rotation with number ") +
                           comp.rotation.str() + ", irrational";
        out.push_back(comp);
        R = set_diff(R, comp.set);
        i += k - 1;
    }
}

void find_periodic(const PMap& T, IntervalSet& R, std::vector<Component>& out, Budget& budget) {
    if (R.is_null()) return;
    PMap Tr = restrict(T, R);
    PMap P = Tr;
    long cap = std::min(kMaxPeriod, budget.left());
    for (long n = 2; n <= cap && !R.is_null(); ++n) {
        budget.spend();
        try {
            P = compose(Tr, P);
        } catch (const Error&) {
            return;
        }
        if (P.pieces().size() > kMaxPieces) return;
        IntervalSet F = set_diff(R, support(P));
        if (F.is_null()) continue;
        Component comp;
        comp.kind = Kind::Periodic;
        comp.set = F.canonical();
        comp.period = n;
        comp.certificate = "T^" + std::to_string(n) + " is the identity on the component";
        out.push_back(comp);
        R = set_diff(R, F);
        Tr = restrict(Tr, R);
        P = restrict(P, R);
    }
}

// Sets of points of X visiting D exactly k times along M, M^2, ..., listed by k.
std::vector<IntervalSet> visit_slices(const std::vector<IntervalSet>& hits, const IntervalSet& X) {
    std::vector<IntervalSet> cnt{X};
    for (auto& G : hits) {
        std::vector<IntervalSet> next(cnt.size() + 1);
        for (size_t k = 0; k < cnt.size(); ++k) {
            IntervalSet in = set_intersect(cnt[k], G);
            next[k] = set_union(next[k], set_diff(cnt[k], G));
            next[k + 1] = set_union(next[k + 1], in);
        }
        cnt = std::move(next);
    }
    return cnt;
}

// Half of a set by measure: leftmost half if finite, alternate tail blocks if infinite.
IntervalSet half_of(const IntervalSet& F0) {
    IntervalSet F = F0.canonical();
    if (F.is_null()) return F;
    ExtMeasure m = F.measure();
    if (!m.infinite) return take_measure(F, m.value / S(2));
    IntervalSet H;
    H.core = F.core;
    if (F.right) H.right = Tail{F.right->start, F.right->period * S(2), F.right->pattern};
    if (F.left) H.left = Tail{F.left->start, F.left->period * S(2), F.left->pattern};
    return H.canonical();
}

// The part S1 of the period-n component X of M in a balanced split relative to D.
IntervalSet split_periodic(const PMap& M, const IntervalSet& X, long n, const IntervalSet& D) {
    IntervalSet F = fundamental_domain(M, X, n);
    std::vector<PMap> pw{PMap::identity()};
    for (long j = 1; j < n; ++j) pw.push_back(compose(M, pw.back()));
    std::vector<IntervalSet> hits;
    for (auto& P : pw) hits.push_back(preimage(P, D));
    std::vector<IntervalSet> images;
    for (auto& slice : visit_slices(hits, F)) {
        IntervalSet H = half_of(slice);
        for (auto& P : pw) images.push_back(image(P, H));
    }
    return union_all(images);
}

IntervalSet split_dissipative(const Component& comp, const IntervalSet& D) {
    IntervalSet E = set_intersect(D, comp.set).canonical();
    if (E.measure().infinite)
        throw Error("OUT_OF_CLASS", "D meets a dissipative component in infinite measure");
    std::vector<IntervalSet> hits;
    if (!E.is_null()) {
        const Scalar& c = comp.c;
        mpz_class i1 = (E.core.front().lo / c).floor() - 2, i2 = (E.core.back().hi / c).ceil() + 2;
        if (i2 < i1) std::swap(i1, i2);
        for (mpz_class i = i1; i <= i2; ++i) hits.push_back(E.translate(-c * Scalar(i)));
    }
    std::vector<IntervalSet> halves;
    for (auto& slice : visit_slices(hits, comp.wandering)) halves.push_back(half_of(slice));
    return set_intersect(periodize(union_all(halves), comp.c), comp.set);
}

PMap paste_with_identity(std::vector<Piece> ps, const IntervalSet& covered) {
    for (auto& p : complement(covered).progressions()) ps.push_back({p.I, p.step, Scalar(0), Scalar(0)});
    return validate_bijection(PMap::from_pieces(ps));
}

}  // namespace

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::Periodic: return "PERIODIC";
        case Kind::Dissipative: return "DISSIPATIVE";
        case Kind::Aperiodic: return "CONSERVATIVE_APERIODIC";
        default: return "UNKNOWN";
    }
}

IntervalSet Classification::of_kind(Kind k) const {
    std::vector<IntervalSet> v;
    for (auto& c : comps)
        if (c.kind == k) v.push_back(c.set);
    return union_all(v);
}

bool Classification::complete() const {
    return std::none_of(comps.begin(), comps.end(), [](const Component& c) { return c.kind == Kind::Unknown; });
}

Classification classify(const PMap& T, long budget_steps) {
    Budget budget(budget_steps);
    Classification cl;
    IntervalSet R = support(T).canonical();
    find_dissipative(T, R, cl.comps);
    find_rotations(T, R, cl.comps);
    find_periodic(T, R, cl.comps, budget);
    if (!R.is_null()) {
        Component comp;
        comp.set = R.canonical();
        comp.certificate = "budget spent before the orbit structure was resolved";
        cl.comps.push_back(comp);
    }
    return cl;
}

bool verify_component(const PMap& T, const Component& comp) {
    if (!set_equal(image(T, comp.set), comp.set)) return false;
    switch (comp.kind) {
        case Kind::Periodic: {
            PMap Tr = restrict(T, comp.set);
            PMap P = Tr;
            for (long j = 1; j < comp.period; ++j) {
                if (!set_diff(comp.set, support(P)).is_null()) return false;  // a smaller period
                P = compose(Tr, P);
            }
            return support(P).is_null();
        }
        case Kind::Dissipative:
            return set_equal(image(power(T, comp.k), comp.wandering), comp.wandering.translate(comp.c)) &&
                   set_equal(periodize(comp.wandering, comp.c), comp.set);
        case Kind::Aperiodic: {
            if (iet_rotation(comp.lengths).is_rational()) return false;
            auto sh = iet_shifts(comp.lengths);
            for (auto& b : comp.blocks) {
                std::vector<Piece> ps;
                Scalar lo = b.I.lo;
                for (size_t j = 0; j < sh.size(); ++j) {
                    ps.push_back({{lo, lo + comp.lengths[j]}, b.step, sh[j], Scalar(0)});
                    lo += comp.lengths[j];
                }
                if (lo != b.I.hi) return false;
                if (!eq_ae(restrict(T, IntervalSet::of_prog(b)), PMap::from_pieces(ps))) return false;
            }
            return true;
        }
        default: return true;
    }
}

IntervalSet fundamental_domain(const PMap& T, const IntervalSet& X, long n) {
    if (n == 1) return X;
    std::vector<PMap> pw;
    PMap P = T;
    for (long j = 1; j < n; ++j) {
        pw.push_back(P);
        P = compose(T, P);
    }
    std::vector<IntervalSet> parts;
    IntervalSet covered;
    for (auto& F : disjoint_colors(X, pw)) {
        IntervalSet Fi = set_diff(F, covered);
        if (Fi.is_null()) continue;
        parts.push_back(Fi);
        std::vector<IntervalSet> orbit{covered, Fi};
        for (auto& Q : pw) orbit.push_back(image(Q, Fi));
        covered = union_all(orbit);
    }
    return union_all(parts);
}

HopfParts hopf(const PMap& T, long budget) {
    Classification cl = classify(T, budget);
    if (!cl.complete()) throw Error("CLASSIFICATION_INCOMPLETE", "classification left an UNKNOWN component");
    return {restrict_invariant(T, cl.of_kind(Kind::Dissipative)),
            restrict_invariant(T, cl.of_kind(Kind::Periodic)),
            restrict_invariant(T, cl.of_kind(Kind::Aperiodic))};
}

Induced induce(const PMap& T, const IntervalSet& A0, long budget) {
    IntervalSet A = A0.canonical();
    if (A.is_null()) throw Error("OUT_OF_RANGE", "induce needs a set of positive measure");
    Classification cl = classify(T, budget);
    IntervalSet bad = set_intersect(A, cl.of_kind(Kind::Dissipative));
    if (!bad.is_null()) {
        IntervalSet b = bad.canonical();
        Scalar lo = !b.core.empty() ? b.core.front().lo : b.right ? b.right->start : b.left->start;
        throw Error("NOT_CONSERVATIVE", "A meets a dissipative component near " + lo.str());
    }
    Induced out;
    std::vector<Piece> ps;
    IntervalSet Y = A;
    PMap psi = restrict(T, A);
    for (long n = 1;; ++n) {
        if (n > budget) throw Error("BUDGET_EXHAUSTED", "returns unresolved after " + std::to_string(budget) + " steps");
        PMap back = restrict_image(psi, A);
        IntervalSet H = domain(back);
        if (!H.is_null()) {
            out.parts.push_back({H.canonical(), n});
            for (auto& p : back.pieces()) ps.push_back(p);
            Y = set_diff(Y, H);
            if (Y.is_null()) break;
            psi = restrict(psi, Y);
        }
        psi = compose(T, psi);
    }
    out.map = paste_with_identity(ps, A);
    return out;
}

Marker rokhlin_marker(const PMap& T, const Scalar& eps, long budget) {
    if (eps.sign() <= 0) throw Error("OUT_OF_RANGE", "eps must be positive");
    Classification cl = classify(T, budget);
    if (cl.comps.empty()) throw Error("NOT_APERIODIC", "T has null support");
    for (auto& c : cl.comps) {
        if (c.kind == Kind::Unknown) throw Error("BUDGET_EXHAUSTED", "aperiodicity of the support not certified");
        if (c.kind != Kind::Aperiodic) throw Error("NOT_APERIODIC", "support contains a " + kind_name(c.kind) + " component");
    }
    ExtMeasure lam = support(T).measure();
    if (lam.infinite)
        throw Error("OUT_OF_CLASS", "a marker on an infinite aperiodic support is not eventually periodic");
    Scalar total = min(eps / S(2), lam.value);
    IntervalList C;
    for (auto& c : cl.comps)
        for (auto& b : c.blocks) C.push_back({b.I.lo, b.I.lo + total * b.I.length() / lam.value});
    return {IntervalSet::of_list(C), "minimal rotation blocks: every orbit is dense in its block and meets the marker"};
}

Factorization factor_split(const PMap& T, const IntervalSet& D, const Scalar& eps, long budget) {
    if (eps.sign() <= 0) throw Error("OUT_OF_RANGE", "eps must be positive");
    Classification cl = classify(T, budget);
    if (!cl.complete()) throw Error("CLASSIFICATION_INCOMPLETE", "classification left an UNKNOWN component");
    std::vector<IntervalSet> s1T;
    for (auto& c : cl.comps) {
        if (c.kind == Kind::Periodic) s1T.push_back(split_periodic(T, c.set, c.period, D));
        if (c.kind == Kind::Dissipative) s1T.push_back(split_dissipative(c, D));
    }
    IntervalSet S1 = union_all(s1T);
    IntervalSet S2 = set_diff(set_union(cl.of_kind(Kind::Periodic), cl.of_kind(Kind::Dissipative)), S1);
    std::vector<Piece> p1 = restrict(T, S1).pieces(), p2 = restrict(T, S2).pieces();
    IntervalSet cov1 = S1, cov2 = S2;
    PMap teps = PMap::identity();
    IntervalSet Y = cl.of_kind(Kind::Aperiodic);
    if (!Y.is_null()) {
        if (Y.measure().infinite) throw Error("OUT_OF_CLASS", "infinite aperiodic part");
        PMap TY = restrict_invariant(T, Y);
        Marker C = rokhlin_marker(TY, eps, budget);
        Induced ind = induce(TY, C.set, budget);
        PMap Q = compose(TY, inverse(ind.map));
        Classification qc = classify(Q, budget);
        std::vector<IntervalSet> s1Q;
        for (auto& c : qc.comps) {
            if (c.kind != Kind::Periodic)
                throw Error("BUDGET_EXHAUSTED", "quotient T T_C^-1 not certified periodic");
            s1Q.push_back(split_periodic(Q, c.set, c.period, D));
        }
        IntervalSet Q1 = union_all(s1Q);
        IntervalSet Q2 = set_diff(support(Q), Q1);
        for (auto& p : restrict(Q, Q1).pieces()) p1.push_back(p);
        for (auto& p : restrict(Q, Q2).pieces()) p2.push_back(p);
        cov1 = set_union(cov1, Q1);
        cov2 = set_union(cov2, Q2);
        teps = ind.map;
    }
    return {paste_with_identity(p1, cov1), paste_with_identity(p2, cov2), teps};
}

std::vector<std::pair<std::string, bool>> verify_factorization(const PMap& T, const IntervalSet& D, const Scalar& eps,
                                                               const Factorization& f) {
    IntervalSet s1 = support(f.t1), s2 = support(f.t2), se = support(f.teps);
    ExtMeasure me = se.measure();
    std::vector<std::pair<std::string, bool>> out;
    out.push_back({"product", eq_ae(compose(f.t1, compose(f.t2, f.teps)), T)});
    out.push_back({"disjoint_supports", set_intersect(s1, s2).is_null()});
    out.push_back({"equal_support_measures", s1.measure() == s2.measure()});
    out.push_back({"equal_D_measures", set_intersect(s1, D).measure() == set_intersect(s2, D).measure()});
    out.push_back({"small_teps", !me.infinite && me.value < eps});
    return out;
}

PMap skyscraper_approx(const PMap& T, long levels, long budget) {
    if (levels < 1) throw Error("OUT_OF_RANGE", "levels must be positive");
    Classification cl = classify(T, budget);
    if (cl.comps.empty()) return PMap::identity();
    std::vector<IntervalSet> keep;
    Scalar lo(1 - levels), hi(levels);
    for (auto& c : cl.comps) {
        if (c.kind == Kind::Unknown) throw Error("BUDGET_EXHAUSTED", "aperiodicity of the support not certified");
        if (c.kind != Kind::Aperiodic) throw Error("NOT_APERIODIC", "support contains a " + kind_name(c.kind) + " component");
        for (auto& b : c.blocks) {
            if (b.step.is_zero()) {
                if (!(b.I.lo < lo) && !(hi < b.I.hi)) keep.push_back(IntervalSet::interval(b.I.lo, b.I.hi));
                continue;
            }
            for (long w = 0;; ++w) {
                Interval J{b.I.lo + b.step * S(w), b.I.hi + b.step * S(w)};
                if (b.step.sign() > 0 ? !(J.lo < hi) : !(lo < J.hi)) break;
                if (!(J.lo < lo) && !(hi < J.hi)) keep.push_back(IntervalSet::interval(J.lo, J.hi));
            }
        }
    }
    return restrict_invariant(T, union_all(keep));
}

bool is_involution(const PMap& T) { return eq_ae(compose(T, T), PMap::identity()); }

PMap truncate_support(const PMap& T, const IntervalSet& X) {
    if (!is_involution(T)) throw Error("NOT_INVOLUTION", "truncation needs an involution");
    if (X.measure().infinite) throw Error("OUT_OF_RANGE", "truncation set must have finite measure");
    IntervalSet Y = set_intersect(X, preimage(T, X));
    return restrict_invariant(T, Y);
}

}  // namespace ergokit
