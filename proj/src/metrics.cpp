#include "ergokit/metrics.hpp"

#include "ergokit/error.hpp"

namespace ergokit {

namespace {

Scalar S(const mpz_class& z) { return Scalar(z); }

Scalar pow2_neg(const mpz_class& e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, e.get_ui());
    return Scalar(mpq_class(mpz_class(1), p));
}

Scalar mu_list(const IntervalList& l) {
    Scalar total;
    for (auto& i : l) {
        mpz_class n = i.lo.floor();
        for (;; ++n) {
            Scalar a = max(i.lo, S(n)), b = min(i.hi, S(n + 1));
            if (!(S(n) < i.hi)) break;
            if (a < b) total += (b - a) * mu_density(n);
        }
    }
    return total;
}

Scalar integer_period(const Scalar& p) {
    if (!p.is_rational()) throw Error("INCOMMENSURABLE_PERIODS", "tail period " + p.str() + " is not commensurable with 1");
    return Scalar(mpz_class(p.rat().get_num()));
}

struct Diff {
    Prog prog;
    Scalar c, e;  // shift difference on block w is c + e w
};

// Common refinement of the domains of S and T with the difference S - T of shifts.
std::vector<Diff> shift_differences(const PMap& Smap, const PMap& Tmap) {
    std::vector<Diff> out;
    auto sp = Smap.pieces();
    auto tp = Tmap.pieces();
    for (auto& s : sp)
        for (auto& t : tp)
            for (auto& h : intersect_progs({s.dom, s.step}, {t.dom, t.step})) {
                Scalar c = s.alpha + s.beta * S(h.m0) - t.alpha - t.beta * S(h.n0);
                Scalar e = s.beta * S(h.ms) - t.beta * S(h.ns);
                if (h.res.step.is_zero()) e = Scalar(0);
                out.push_back({h.res, c, e});
            }
    return out;
}

}  // namespace

Scalar mu_density(const mpz_class& n) {
    mpz_class a = abs(n) + 2;
    return Scalar(4, 3) * pow2_neg(a);
}

Scalar mu(const IntervalSet& A0) {
    IntervalSet A = A0.canonical();
    Scalar total = mu_list(A.core);
    if (A.right) {
        const Tail& t = *A.right;
        Scalar M = integer_period(t.period);
        mpz_class N0 = t.start.ceil();
        if (N0 < 0) N0 = 0;
        IntervalSet only;
        only.right = t;
        total += mu_list(only.window(t.start, S(N0)));
        Scalar w = mu_list(only.window(S(N0), S(N0) + M));
        total += w / (Scalar(1) - pow2_neg(M.rat().get_num()));
    }
    if (A.left) {
        const Tail& t = *A.left;
        Scalar M = integer_period(t.period);
        mpz_class N1 = t.start.floor();
        if (N1 > 0) N1 = 0;
        IntervalSet only;
        only.left = t;
        total += mu_list(only.window(S(N1), t.start));
        Scalar w = mu_list(only.window(S(N1) - M, S(N1)));
        total += w / (Scalar(1) - pow2_neg(M.rat().get_num()));
    }
    return total;
}

IntervalSet disagreement(const PMap& Smap, const PMap& Tmap) { return support(compose(inverse(Smap), Tmap)); }

ExtMeasure d_uC(const PMap& Smap, const PMap& Tmap, const IntervalSet& C) {
    if (C.measure().infinite) throw Error("C_INFINITE", "d_uC needs a set of finite measure");
    return set_intersect(C, disagreement(Smap, Tmap)).measure();
}

Scalar d_mu(const PMap& Smap, const PMap& Tmap) { return mu(disagreement(Smap, Tmap)); }

ExtMeasure d_uf(const PMap& Smap, const PMap& Tmap) { return disagreement(Smap, Tmap).measure(); }

std::vector<Interval> dyadic_level(long m) {
    std::vector<Interval> out;
    long r = m < 1 ? 1 : m;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(m));
    mpz_class lo = -r * den, hi = r * den;
    for (mpz_class k = lo; k < hi; ++k)
        out.push_back({Scalar(mpq_class(k, den)), Scalar(mpq_class(mpz_class(k + 1), den))});
    return out;
}

std::vector<Interval> dyadic_sets(long count) {
    std::vector<Interval> out;
    for (long m = 0; static_cast<long>(out.size()) < count; ++m) {
        for (auto& i : dyadic_level(m)) {
            if (static_cast<long>(out.size()) == count) break;
            out.push_back(i);
        }
    }
    return out;
}

Scalar weak_term(const PMap& Smap, const PMap& Tmap, const IntervalSet& C) {
    ExtMeasure m = set_symdiff(image(Smap, C), image(Tmap, C)).measure();
    if (m.infinite || m.value > Scalar(1)) return Scalar(1);
    return m.value;
}

WeakValue weak_metric(const PMap& Smap, const PMap& Tmap, long trunc) {
    if (trunc < 1) throw Error("OUT_OF_RANGE", "truncation must be positive");
    WeakValue w;
    auto sets = dyadic_sets(trunc);
    for (size_t i = 0; i < sets.size(); ++i) {
        Scalar t = weak_term(Smap, Tmap, IntervalSet::interval(sets[i].lo, sets[i].hi));
        if (!t.is_zero()) w.value += t * pow2_neg(mpz_class(static_cast<unsigned long>(i + 1)));
    }
    w.truncation_error = pow2_neg(mpz_class(static_cast<unsigned long>(trunc)));
    return w;
}

Scalar cm_metric(const PMap& Smap, const PMap& Tmap) {
    Scalar total;
    for (auto& d : shift_differences(Smap, Tmap)) {
        if (d.e.is_zero()) {
            Scalar v = min(d.c.abs(), Scalar(1));
            if (!v.is_zero()) total += v * mu(IntervalSet::of_prog(d.prog));
            continue;
        }
        // blocks with |c + e w| < 1 are finitely many; the rest contribute 1
        Scalar x = (Scalar(-1) - d.c) / d.e, y = (Scalar(1) - d.c) / d.e;
        mpz_class lo = min(x, y).floor() + 1, hi = max(x, y).ceil() - 1;
        if (lo < 0) lo = 0;
        Scalar whole = mu(IntervalSet::of_prog(d.prog));
        Scalar near;
        for (mpz_class w = lo; w <= hi; ++w) {
            Interval b{d.prog.I.lo + d.prog.step * S(w), d.prog.I.hi + d.prog.step * S(w)};
            Scalar m = mu(IntervalSet::interval(b.lo, b.hi));
            near += m;
            total += (d.c + d.e * S(w)).abs() * m;
        }
        total += whole - near;
    }
    return total;
}

Scalar partial_metric(const PartialIso& phi, const PartialIso& psi) {
    IntervalSet agree;
    std::vector<IntervalSet> parts;
    for (auto& d : shift_differences(phi.map, psi.map)) {
        if (d.e.is_zero()) {
            if (d.c.is_zero()) parts.push_back(IntervalSet::of_prog(d.prog));
            continue;
        }
        Scalar w = -d.c / d.e;
        if (w.is_integer() && w.sign() >= 0) {
            Scalar off = d.prog.step * w;
            parts.push_back(IntervalSet::interval(d.prog.I.lo + off, d.prog.I.hi + off));
        }
    }
    agree = union_all(parts);
    IntervalSet common = set_intersect(phi.dom, psi.dom);
    return mu(set_diff(common, agree)) + mu(set_symdiff(phi.dom, psi.dom));
}

}  // namespace ergokit
