#include "ergokit/coloring.hpp"

#include "ergokit/error.hpp"

namespace ergokit {

namespace {

Scalar S(const mpz_class& z) { return Scalar(z); }

// Image of the sub-progression {J + (w0 + q u) D} of an atom under map j.
Prog image_prog(const Atom& a, size_t j, const Interval& J, const mpz_class& w0, long q) {
    Scalar sh = a.c[j] + a.e[j] * S(w0);
    Scalar st = (a.prog.step + a.e[j]) * Scalar(q);
    return {{J.lo + sh, J.hi + sh}, st};
}

bool progs_meet(const std::vector<Prog>& xs, const std::vector<Prog>& ys) {
    for (auto& x : xs)
        for (auto& y : ys)
            if (!intersect_progs(x, y).empty()) return true;
    return false;
}

// Chunks of length h covering I.
IntervalList chunks(const Interval& I, const Scalar& h) {
    IntervalList out;
    for (Scalar lo = I.lo; lo < I.hi; lo += h) out.push_back({lo, min(lo + h, I.hi)});
    return out;
}

void bounded_colors(const Interval& I, const std::vector<Scalar>& t, std::vector<IntervalSet>& out) {
    Scalar h, hmax;
    for (size_t j = 0; j < t.size(); ++j) {
        if (t[j].is_zero()) return;  // fixed by some map
        Scalar a = t[j].abs();
        if (j == 0 || a < h) h = a;
        if (j == 0 || hmax < a) hmax = a;
    }
    if (t.empty()) return;
    if (!(h < I.length())) {
        out.push_back(IntervalSet::interval(I.lo, I.hi));
        return;
    }
    auto cs = chunks(I, h);
    long K = (hmax / h).floor().get_si() + 2;
    for (long r = 0; r < K && r < static_cast<long>(cs.size()); ++r) {
        IntervalList l;
        for (size_t k = r; k < cs.size(); k += K) l.push_back(cs[k]);
        out.push_back(IntervalSet::of_list(l));
    }
}

void family_colors(const Atom& a, long max_modulus, std::vector<IntervalSet>& out) {
    const Interval& I = a.prog.I;
    const Scalar& D = a.prog.step;
    Scalar len = I.length();
    size_t nmaps = a.c.size();
    mpz_class w1 = 0;
    Scalar h = len, hmax = len;
    bool chunked = false;
    for (size_t j = 0; j < nmaps; ++j) {
        if (a.e[j].is_zero()) {
            if (a.c[j].is_zero()) return;
            Scalar s = a.c[j].abs();
            if (s < len) {
                chunked = true;
                if (s < h) h = s;
            }
            if (hmax < s) hmax = s;
            continue;
        }
        Scalar bound = a.e[j].sign() > 0 ? (len - a.c[j]) / a.e[j] : (-len - a.c[j]) / a.e[j];
        mpz_class w = bound.ceil();
        if (w > w1) w1 = w;
    }
    for (mpz_class w = 0; w < w1; ++w) {
        std::vector<Scalar> t;
        for (size_t j = 0; j < nmaps; ++j) t.push_back(a.c[j] + a.e[j] * S(w));
        Scalar off = D * S(w);
        bounded_colors({I.lo + off, I.hi + off}, t, out);
    }
    IntervalList cs = chunked ? chunks(I, h) : IntervalList{I};
    long K = chunked ? (hmax / h).floor().get_si() + 2 : 1;
    if (K > static_cast<long>(cs.size())) K = static_cast<long>(cs.size());
    for (long q = 1; q <= max_modulus; ++q) {
        std::vector<std::vector<Prog>> cand;
        bool ok = true;
        for (long r = 0; r < K && ok; ++r) {
            for (long s = 0; s < q && ok; ++s) {
                mpz_class w0 = w1 + s;
                std::vector<Prog> F, img;
                Scalar off = D * S(w0);
                for (size_t k = r; k < cs.size(); k += K) {
                    Interval J{cs[k].lo + off, cs[k].hi + off};
                    F.push_back({J, D * Scalar(q)});
                    for (size_t j = 0; j < nmaps; ++j) img.push_back(image_prog(a, j, J, w0, q));
                }
                try {
                    if (progs_meet(F, img)) ok = false;
                } catch (const Error&) {
                    ok = false;
                }
                cand.push_back(F);
            }
        }
        if (!ok) continue;
        for (auto& F : cand) {
            std::vector<IntervalSet> parts;
            for (auto& p : F) parts.push_back(IntervalSet::of_prog(p));
            out.push_back(union_all(parts));
        }
        return;
    }
    throw Error("OUT_OF_CLASS", "no residue split up to modulus " + std::to_string(max_modulus) +
                                    " separates the family starting at " + I.lo.str());
}

}  // namespace

std::vector<Atom> refine(const IntervalSet& region, const std::vector<PMap>& maps) {
    std::vector<Atom> atoms;
    for (auto& p : region.canonical().progressions()) atoms.push_back({p, {}, {}});
    for (auto& M : maps) {
        auto pieces = M.pieces();
        std::vector<Atom> next;
        for (auto& a : atoms) {
            for (auto& p : pieces) {
                Scalar beta = p.step.is_zero() ? Scalar(0) : p.beta;
                for (auto& h : intersect_progs(a.prog, {p.dom, p.step})) {
                    Atom b;
                    b.prog = h.res;
                    for (size_t j = 0; j < a.c.size(); ++j) {
                        b.c.push_back(a.c[j] + a.e[j] * S(h.m0));
                        b.e.push_back(h.res.step.is_zero() ? Scalar(0) : a.e[j] * S(h.ms));
                    }
                    b.c.push_back(p.alpha + beta * S(h.n0));
                    b.e.push_back(h.res.step.is_zero() ? Scalar(0) : beta * S(h.ns));
                    next.push_back(std::move(b));
                }
            }
        }
        atoms = std::move(next);
    }
    return atoms;
}

std::vector<IntervalSet> disjoint_colors(const IntervalSet& region, const std::vector<PMap>& maps, long max_modulus) {
    std::vector<IntervalSet> out;
    for (auto& a : refine(region, maps)) {
        if (a.prog.I.empty()) continue;
        if (a.prog.step.is_zero())
            bounded_colors(a.prog.I, a.c, out);
        else
            family_colors(a, max_modulus, out);
    }
    return out;
}

IntervalSet periodize(const IntervalSet& E0, const Scalar& c) {
    IntervalSet E = E0.canonical();
    if (!E.bounded()) throw Error("OUT_OF_CLASS", "periodize needs a bounded set");
    Scalar p = c.abs();
    IntervalList pat;
    for (auto& i : E.core) {
        if (!(i.length() < p)) {
            pat = {{Scalar(0), p}};
            break;
        }
        Scalar a = i.lo - p * Scalar(mpz_class((i.lo / p).floor()));
        Scalar b = a + i.length();
        if (!(p < b)) {
            pat.push_back({a, b});
        } else {
            pat.push_back({a, p});
            pat.push_back({Scalar(0), b - p});
        }
    }
    pat = normalize_list(pat);
    if (pat.empty()) return IntervalSet::empty();
    IntervalSet s;
    s.right = Tail{Scalar(0), p, pat};
    s.left = Tail{Scalar(0), p, pat};
    return s.canonical();
}

}  // namespace ergokit
