#include "ergokit/map.hpp"

#include <algorithm>

#include "ergokit/error.hpp"

namespace ergokit {

namespace {

constexpr long kEnumLimit = 2000000;

Scalar S(const mpz_class& z) { return Scalar(z); }

Interval meet(const Interval& a, const Interval& b) { return {max(a.lo, b.lo), min(a.hi, b.hi)}; }
Interval operator+(const Interval& a, const Scalar& c) { return {a.lo + c, a.hi + c}; }

void tick(long& count) {
    if (++count > kEnumLimit)
        throw Error("COMPOSITION_OUT_OF_CLASS", "piece interaction does not stabilize within the enumeration window");
}

// integers n with x < n < y (x, y in any order)
std::pair<mpz_class, mpz_class> open_range(const Scalar& x, const Scalar& y) {
    const Scalar& lo = min(x, y);
    const Scalar& hi = max(x, y);
    return {lo.floor() + 1, hi.ceil() - 1};
}

// n >= 0 with (J + n E) meeting K, E != 0
std::pair<mpz_class, mpz_class> single_vs_prog(const Interval& K, const Interval& J, const Scalar& E) {
    auto [lo, hi] = open_range((K.lo - J.hi) / E, (K.hi - J.lo) / E);
    if (lo < 0) lo = 0;
    return {lo, hi};
}

}  // namespace

std::vector<ProgHit> intersect_progs(const Prog& a, const Prog& b) {
    std::vector<ProgHit> out;
    long count = 0;
    const Interval& I = a.I;
    const Interval& J = b.I;
    const Scalar& D = a.step;
    const Scalar& E = b.step;
    if (I.empty() || J.empty()) return out;
    if (D.is_zero() && E.is_zero()) {
        Interval r = meet(I, J);
        if (!r.empty()) out.push_back({{r, Scalar(0)}, 0, 0, 0, 0});
        return out;
    }
    if (D.is_zero()) {
        auto [lo, hi] = single_vs_prog(I, J, E);
        for (mpz_class n = lo; n <= hi; ++n) {
            tick(count);
            Interval r = meet(I, J + E * S(n));
            if (!r.empty()) out.push_back({{r, Scalar(0)}, 0, 0, n, 0});
        }
        return out;
    }
    if (E.is_zero()) {
        auto [lo, hi] = single_vs_prog(J, I, D);
        for (mpz_class m = lo; m <= hi; ++m) {
            tick(count);
            Interval r = meet(I + D * S(m), J);
            if (!r.empty()) out.push_back({{r, Scalar(0)}, m, 0, 0, 0});
        }
        return out;
    }
    if (D.sign() == E.sign()) {
        mpq_class ratio = rational_ratio(D, E);  // a/b
        mpz_class ra = ratio.get_num(), rb = ratio.get_den();
        Scalar L = D * S(rb);
        for (mpz_class m0 = 0; m0 < rb; ++m0) {
            tick(count);
            Interval K = I + D * S(m0);
            auto [lo, hi] = open_range((K.lo - J.hi) / E, (K.hi - J.lo) / E);
            for (mpz_class n0 = lo; n0 <= hi; ++n0) {
                tick(count);
                mpz_class w0 = 0;
                if (n0 < 0) w0 = (-n0 + ra - 1) / ra;
                mpz_class mm = m0 + rb * w0, nn = n0 + ra * w0;
                Interval r = meet(I + D * S(mm), J + E * S(nn));
                if (!r.empty()) out.push_back({{r, L}, mm, rb, nn, ra});
            }
        }
        return out;
    }
    // opposite directions: finitely many blocks of a can meet b
    mpz_class mmax;
    if (D.sign() > 0)
        mmax = ((J.hi - I.lo) / D).ceil() - 1;
    else
        mmax = ((I.hi - J.lo) / (-D)).ceil() - 1;
    for (mpz_class m = 0; m <= mmax; ++m) {
        tick(count);
        Interval K = I + D * S(m);
        auto [lo, hi] = single_vs_prog(K, J, E);
        for (mpz_class n = lo; n <= hi; ++n) {
            tick(count);
            Interval r = meet(K, J + E * S(n));
            if (!r.empty()) out.push_back({{r, Scalar(0)}, m, 0, n, 0});
        }
    }
    return out;
}

namespace {

bool same_shift_merge(std::vector<CorePiece>& v) {
    std::sort(v.begin(), v.end(), [](const CorePiece& x, const CorePiece& y) { return x.dom.lo < y.dom.lo; });
    std::vector<CorePiece> out;
    for (auto& p : v) {
        if (p.dom.empty()) continue;
        if (!out.empty() && out.back().dom.hi == p.dom.lo && out.back().shift == p.shift)
            out.back().dom.hi = p.dom.hi;
        else
            out.push_back(p);
    }
    bool changed = out.size() != v.size();
    v = std::move(out);
    return changed;
}

void merge_families(std::vector<Family>& f) {
    std::sort(f.begin(), f.end(), [](const Family& x, const Family& y) { return x.u < y.u; });
    std::vector<Family> out;
    for (auto& e : f) {
        if (!(e.u < e.v)) continue;
        if (!out.empty() && out.back().v == e.u && out.back().c == e.c && out.back().slope == e.slope)
            out.back().v = e.v;
        else
            out.push_back(e);
    }
    f = std::move(out);
}

std::vector<CorePiece> clip_core(const std::vector<CorePiece>& v, const Scalar& a, const Scalar& b) {
    std::vector<CorePiece> out;
    for (auto& p : v) {
        Interval d{max(p.dom.lo, a), min(p.dom.hi, b)};
        if (!d.empty()) out.push_back({d, p.shift});
    }
    return out;
}

bool same_function(std::vector<CorePiece> x, std::vector<CorePiece> y) {
    same_shift_merge(x);
    same_shift_merge(y);
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
        if (!(x[i].dom == y[i].dom) || x[i].shift != y[i].shift) return false;
    return true;
}

// Moves each tail start down by less than a period, as far as the core agrees
// with the rotated families. Makes the normal form independent of construction order.
void pull_starts(NormalForm& nf) {
    auto reach = [&](const std::vector<CorePiece>& ext, const Scalar& a, const Scalar& b, bool down) {
        std::vector<Scalar> cut;
        for (auto& p : ext) { cut.push_back(p.dom.lo); cut.push_back(p.dom.hi); }
        for (auto& p : clip_core(nf.core, a, b)) { cut.push_back(p.dom.lo); cut.push_back(p.dom.hi); }
        std::sort(cut.begin(), cut.end());
        if (down) std::reverse(cut.begin(), cut.end());
        Scalar best = down ? b : a;
        for (auto& t : cut) {
            if (!(a < t && t < b)) continue;
            Scalar lo = down ? t : a, hi = down ? b : t;
            if (!same_function(clip_core(ext, lo, hi), clip_core(nf.core, lo, hi))) break;
            best = t;
        }
        return best;
    };
    if (nf.right && !nf.right->fam.empty()) {
        auto& R = *nf.right;
        Scalar w0 = R.start - R.period;
        if (nf.left) w0 = max(w0, nf.left->start);
        std::vector<CorePiece> ext;
        for (auto& f : R.fam) ext.push_back({{R.start - R.period + f.u, R.start - R.period + f.v}, f.c - f.slope});
        Scalar t = reach(ext, w0, R.start, true);
        if (t < R.start) {
            Scalar d = R.start - t, cutp = R.period - d;
            std::vector<Family> fam;
            for (auto& f : R.fam) {
                if (cutp < f.v) fam.push_back({max(f.u, cutp) - cutp, f.v - cutp, f.c - f.slope, f.slope});
                if (f.u < cutp) fam.push_back({f.u + d, min(f.v, cutp) + d, f.c, f.slope});
            }
            R.fam = std::move(fam);
            merge_families(R.fam);
            R.start = t;
            nf.core = clip_core(nf.core, nf.core.empty() ? t : min(nf.core.front().dom.lo, t), t);
        }
    }
    if (nf.left && !nf.left->fam.empty()) {
        auto& Lf = *nf.left;
        Scalar w1 = Lf.start + Lf.period;
        if (nf.right) w1 = min(w1, nf.right->start);
        std::vector<CorePiece> ext;
        for (auto& f : Lf.fam) ext.push_back({{Lf.start + f.u, Lf.start + f.v}, f.c - f.slope});
        Scalar t = reach(ext, Lf.start, w1, false);
        if (Lf.start < t) {
            Scalar d = t - Lf.start;
            std::vector<Family> fam;
            for (auto& f : Lf.fam) {
                // window [t - P, t): old block 0 part [d, P) then old block -1 part [0, d)
                if (d < f.v) fam.push_back({max(f.u, d) - d, f.v - d, f.c, f.slope});
                if (f.u < d) fam.push_back({f.u + Lf.period - d, min(f.v, d) + Lf.period - d, f.c - f.slope, f.slope});
            }
            Lf.fam = std::move(fam);
            merge_families(Lf.fam);
            Lf.start = t;
            nf.core = clip_core(nf.core, t, nf.core.empty() ? t : max(nf.core.back().dom.hi, t));
        }
    }
}

}  // namespace

PMap PMap::from_pieces(std::vector<Piece> pieces) {
    std::vector<Piece> core, rp, lp;
    for (auto& p : pieces) {
        if (p.dom.empty()) continue;
        if (p.step.is_zero()) {
            p.beta = Scalar(0);
            core.push_back(p);
        } else if (p.step.sign() > 0) {
            rp.push_back(p);
        } else {
            lp.push_back(p);
        }
    }
    PMap out;
    if (core.empty() && rp.empty() && lp.empty()) return out;
    std::vector<Scalar> marks;
    for (auto& p : core) { marks.push_back(p.dom.lo); marks.push_back(p.dom.hi); }
    for (auto& p : rp) marks.push_back(p.dom.lo);
    for (auto& p : lp) marks.push_back(p.dom.hi);
    Scalar sR = *std::max_element(marks.begin(), marks.end());
    Scalar sL = *std::min_element(marks.begin(), marks.end());
    NormalForm& nf = out.nf;
    for (auto& p : core) nf.core.push_back({p.dom, p.alpha});
    long count = 0;

    if (!rp.empty()) {
        Scalar P = rp[0].step;
        for (auto& p : rp) P = lcm(P, p.step);
        SideForm side{sR, P, {}};
        for (auto& p : rp) {
            mpz_class k = rational_ratio(P, p.step).get_num();
            for (mpz_class j = 0; j < k; ++j) {
                Interval I = p.dom + p.step * S(j);
                Scalar a = p.alpha + p.beta * S(j), b = p.beta * S(k);
                for (mpz_class t = 0;; ++t) {
                    tick(count);
                    Interval B = I + P * S(t);
                    if (!(B.lo < sR + P)) break;
                    Scalar sh = a + b * S(t);
                    Interval below{B.lo, min(B.hi, sR)};
                    if (!below.empty()) nf.core.push_back({below, sh});
                    Interval win = meet(B, {sR, sR + P});
                    if (!win.empty()) side.fam.push_back({win.lo - sR, win.hi - sR, sh, b});
                    Interval over{max(B.lo, sR + P), B.hi};
                    if (!over.empty()) side.fam.push_back({over.lo - sR - P, over.hi - sR - P, sh - b, b});
                }
            }
        }
        nf.right = side;
    }
    if (!lp.empty()) {
        Scalar P = -lp[0].step;
        for (auto& p : lp) P = lcm(P, -p.step);
        SideForm side{sL, P, {}};
        Scalar base = sL - P;
        for (auto& p : lp) {
            mpz_class k = rational_ratio(P, -p.step).get_num();
            for (mpz_class j = 0; j < k; ++j) {
                Interval I = p.dom + p.step * S(j);
                Scalar a = p.alpha + p.beta * S(j), b = p.beta * S(k);
                for (mpz_class t = 0;; ++t) {
                    tick(count);
                    Interval B = I + (-P) * S(t);
                    if (!(B.hi > base)) break;
                    Scalar sh = a + b * S(t);
                    Interval above{max(B.lo, sL), B.hi};
                    if (!above.empty()) nf.core.push_back({above, sh});
                    Interval win = meet(B, {base, sL});
                    if (!win.empty()) side.fam.push_back({win.lo - base, win.hi - base, sh, b});
                    Interval under{B.lo, min(B.hi, base)};
                    if (!under.empty()) side.fam.push_back({under.lo - base + P, under.hi - base + P, sh - b, b});
                }
            }
        }
        nf.left = side;
    }
    same_shift_merge(nf.core);
    if (nf.right) merge_families(nf.right->fam);
    if (nf.left) merge_families(nf.left->fam);

    // shrink tail starts while the core continues the families
    while (nf.right) {
        auto& R = *nf.right;
        Scalar w0 = R.start - R.period;
        if (nf.left && w0 < nf.left->start) break;
        std::vector<CorePiece> ext;
        for (auto& f : R.fam) ext.push_back({{w0 + f.u, w0 + f.v}, f.c - f.slope});
        auto win = clip_core(nf.core, w0, R.start);
        if (ext.empty() || !same_function(ext, win)) break;
        nf.core = clip_core(nf.core, nf.core.empty() ? w0 : min(nf.core.front().dom.lo, w0), w0);
        R.start = w0;
        for (auto& f : R.fam) f.c -= f.slope;
    }
    while (nf.left) {
        auto& Lf = *nf.left;
        Scalar w1 = Lf.start + Lf.period;
        if (nf.right && w1 > nf.right->start) break;
        std::vector<CorePiece> ext;
        for (auto& f : Lf.fam) ext.push_back({{Lf.start + f.u, Lf.start + f.v}, f.c - f.slope});
        auto win = clip_core(nf.core, Lf.start, w1);
        if (ext.empty() || !same_function(ext, win)) break;
        nf.core = clip_core(nf.core, w1, nf.core.empty() ? w1 : max(nf.core.back().dom.hi, w1));
        Lf.start = w1;
        for (auto& f : Lf.fam) f.c -= f.slope;
    }
    pull_starts(nf);
    same_shift_merge(nf.core);
    return out;
}

std::vector<Piece> PMap::pieces() const {
    std::vector<Piece> out;
    for (auto& c : nf.core) out.push_back({c.dom, Scalar(0), c.shift, Scalar(0)});
    if (nf.right)
        for (auto& f : nf.right->fam)
            out.push_back({{nf.right->start + f.u, nf.right->start + f.v}, nf.right->period, f.c, f.slope});
    if (nf.left) {
        Scalar base = nf.left->start - nf.left->period;
        for (auto& f : nf.left->fam)
            out.push_back({{base + f.u, base + f.v}, -nf.left->period, f.c, f.slope});
    }
    return out;
}

PMap PMap::identity() {
    PMap m = translation_on(IntervalSet::line(), Scalar(0));
    m.validated = true;
    return m;
}

PMap PMap::translation(const Scalar& c) {
    PMap m = translation_on(IntervalSet::line(), c);
    m.validated = true;
    return m;
}

PMap PMap::translation_on(const IntervalSet& A, const Scalar& c) {
    std::vector<Piece> ps;
    for (auto& p : A.progressions()) ps.push_back({p.I, p.step, c, Scalar(0)});
    return from_pieces(std::move(ps));
}

PMap compose(const PMap& Smap, const PMap& Tmap) {
    auto sp = Smap.pieces();
    auto tp = Tmap.pieces();
    std::vector<Piece> out;
    for (auto& t : tp) {
        Prog img{t.dom + t.alpha, t.step + t.beta};
        for (auto& s : sp) {
            for (auto& h : intersect_progs(img, {s.dom, s.step})) {
                Scalar shiftT = t.alpha + t.beta * S(h.m0);
                Piece p;
                p.dom = h.res.I + (-shiftT);
                p.step = t.step * S(h.ms);
                p.alpha = shiftT + s.alpha + s.beta * S(h.n0);
                p.beta = t.beta * S(h.ms) + s.beta * S(h.ns);
                out.push_back(p);
            }
        }
    }
    PMap r = PMap::from_pieces(std::move(out));
    r.validated = Smap.validated && Tmap.validated;
    return r;
}

PMap inverse(const PMap& T) {
    std::vector<Piece> out;
    for (auto& p : T.pieces()) out.push_back({p.dom + p.alpha, p.step + p.beta, -p.alpha, -p.beta});
    PMap r = PMap::from_pieces(std::move(out));
    r.validated = T.validated;
    return r;
}

PMap power(const PMap& T, long n) {
    if (n == 0) return PMap::identity();
    PMap base = n < 0 ? inverse(T) : T;
    long k = n < 0 ? -n : n;
    PMap acc = base;
    for (long i = 1; i < k; ++i) acc = compose(base, acc);
    return acc;
}

PMap restrict(const PMap& T, const IntervalSet& A) {
    std::vector<Piece> out;
    auto progs = A.canonical().progressions();
    for (auto& p : T.pieces()) {
        for (auto& q : progs) {
            for (auto& h : intersect_progs({p.dom, p.step}, q)) {
                out.push_back({h.res.I, p.step * S(h.ms), p.alpha + p.beta * S(h.m0), p.beta * S(h.ms)});
            }
        }
    }
    return PMap::from_pieces(std::move(out));
}

PMap restrict_image(const PMap& T, const IntervalSet& B) { return inverse(restrict(inverse(T), B)); }

PMap paste_pieces(const std::vector<PMap>& parts) {
    std::vector<Piece> all;
    for (auto& m : parts) {
        auto p = m.pieces();
        all.insert(all.end(), p.begin(), p.end());
    }
    return PMap::from_pieces(std::move(all));
}

namespace {

IntervalSet union_of_progs(const std::vector<Prog>& progs, bool* pairwise_disjoint = nullptr) {
    std::vector<IntervalSet> sets;
    for (auto& p : progs)
        if (!p.I.empty()) sets.push_back(IntervalSet::of_prog(p));
    return union_all(sets, pairwise_disjoint);
}

}  // namespace

IntervalSet domain(const PMap& T) {
    std::vector<Prog> progs;
    for (auto& p : T.pieces()) progs.push_back({p.dom, p.step});
    return union_of_progs(progs);
}

IntervalSet range(const PMap& T) {
    std::vector<Prog> progs;
    for (auto& p : T.pieces()) progs.push_back({p.dom + p.alpha, p.step + p.beta});
    return union_of_progs(progs);
}

IntervalSet image(const PMap& T, const IntervalSet& A) { return range(restrict(T, A)); }

IntervalSet preimage(const PMap& T, const IntervalSet& A) { return domain(restrict_image(T, A)); }

IntervalSet support(const PMap& T) {
    const NormalForm& nf = T.nf;
    IntervalSet s;
    for (auto& c : nf.core)
        if (!c.shift.is_zero()) s.core.push_back(c.dom);
    auto side = [&](const SideForm& sf, bool right_side) -> std::optional<Tail> {
        // blocks below `unroll` are listed individually, the rest form the tail
        mpz_class unroll = 0;
        for (auto& f : sf.fam) {
            if (f.slope.is_zero()) continue;
            Scalar n = -f.c / f.slope;
            if (n.is_integer() && n.sign() >= 0 && n.rat().get_num() + 1 > unroll) unroll = n.rat().get_num() + 1;
        }
        for (mpz_class n = 0; n < unroll; ++n) {
            for (auto& f : sf.fam) {
                if ((f.c + f.slope * S(n)).is_zero()) continue;
                Scalar base = right_side ? sf.start + sf.period * S(n) : sf.start - sf.period * S(n + 1);
                s.core.push_back({base + f.u, base + f.v});
            }
        }
        Tail t;
        t.period = sf.period;
        t.start = right_side ? sf.start + sf.period * S(unroll) : sf.start - sf.period * S(unroll);
        for (auto& f : sf.fam)
            if (!f.c.is_zero() || !f.slope.is_zero()) t.pattern.push_back({f.u, f.v});
        if (t.pattern.empty()) return std::nullopt;
        return t;
    };
    if (nf.right) s.right = side(*nf.right, true);
    if (nf.left) s.left = side(*nf.left, false);
    return s.canonical();
}

Scalar apply(const PMap& T, const Scalar& x) {
    for (auto& p : T.pieces()) {
        if (p.step.is_zero()) {
            if (p.dom.lo <= x && x < p.dom.hi) return x + p.alpha;
            continue;
        }
        Scalar r = (x - p.dom.lo) / p.step;
        mpz_class m = r.floor();
        if (p.step.sign() < 0) m = r.ceil();
        for (mpz_class mm : std::initializer_list<mpz_class>{m - 1, m, m + 1}) {
            if (mm < 0) continue;
            Scalar lo = p.dom.lo + p.step * S(mm), hi = p.dom.hi + p.step * S(mm);
            if (lo <= x && x < hi) return x + p.alpha + p.beta * S(mm);
        }
    }
    throw Error("NOT_IN_DOMAIN", x.str() + " is not covered by the map");
}

namespace {

[[noreturn]] void fail_with(const std::string& code, const std::string& msg, const IntervalSet& wit) {
    IntervalSet w = wit.canonical();
    Interval i;
    if (!w.core.empty()) {
        i = w.core.front();
    } else if (w.right) {
        i = {w.right->start + w.right->pattern.front().lo, w.right->start + w.right->pattern.front().hi};
    } else {
        Scalar base = w.left->start - w.left->period;
        i = {base + w.left->pattern.back().lo, base + w.left->pattern.back().hi};
    }
    throw Error(code, msg, i.lo.str(), i.hi.str());
}

void check_cover(const std::vector<Prog>& progs, const IntervalSet& target, const std::string& what) {
    const std::string up = what == "domain" ? "DOMAIN" : "IMAGE";
    bool disjoint = true;
    IntervalSet acc = union_of_progs(progs, &disjoint);
    if (!disjoint) {
        // locate a witness pair
        IntervalSet seen;
        for (auto& p : progs) {
            if (p.I.empty()) continue;
            IntervalSet s = IntervalSet::of_prog(p);
            IntervalSet ov = set_intersect(seen, s);
            if (!ov.is_null()) fail_with(up + "_OVERLAP", what + " pieces overlap", ov);
            seen = set_union(seen, s);
        }
    }
    IntervalSet gap = set_diff(target, acc);
    if (!gap.is_null()) fail_with(up + "_GAP", what + " pieces leave a gap", gap);
    IntervalSet extra = set_diff(acc, target);
    if (!extra.is_null()) fail_with(up + "_OVERLAP", what + " pieces exceed the declared set", extra);
}

void check_progressions(const std::vector<Piece>& ps) {
    for (auto& p : ps) {
        if (p.step.is_zero()) continue;
        Scalar len = p.dom.length();
        if (len > p.step.abs()) {
            Interval w{p.dom.lo + p.step.abs(), p.dom.hi};
            throw Error("DOMAIN_OVERLAP", "progression blocks overlap", w.lo.str(), w.hi.str());
        }
        Scalar istep = p.step + p.beta;
        if (istep.is_zero() || len > istep.abs()) {
            Interval w = p.dom + p.alpha;
            throw Error("IMAGE_OVERLAP", "image blocks of a progression overlap", w.lo.str(), w.hi.str());
        }
    }
}

}  // namespace

void check_partial(const PMap& T, const IntervalSet& dom, const IntervalSet& rng) {
    auto ps = T.pieces();
    check_progressions(ps);
    std::vector<Prog> d, r;
    for (auto& p : ps) {
        d.push_back({p.dom, p.step});
        r.push_back({p.dom + p.alpha, p.step + p.beta});
    }
    check_cover(d, dom, "domain");
    check_cover(r, rng, "image");
}

PMap validate_bijection(PMap T) {
    check_partial(T, IntervalSet::line(), IntervalSet::line());
    T.validated = true;
    return T;
}

bool eq_ae(const PMap& Smap, const PMap& Tmap) {
    return support(compose(inverse(Smap), Tmap)).is_null();
}

PMap cut_and_paste(const std::vector<std::pair<PMap, IntervalSet>>& pairs) {
    IntervalSet acc;
    std::vector<PMap> parts;
    for (auto& [T, A] : pairs) {
        if (!set_intersect(acc, A).is_null()) throw Error("NOT_A_PARTITION", "paste sets overlap");
        acc = set_union(acc, A);
        parts.push_back(restrict(T, A));
    }
    if (!set_equal(acc, IntervalSet::line())) throw Error("NOT_A_PARTITION", "paste sets do not cover the line");
    return validate_bijection(paste_pieces(parts));
}

PartialIso partial_restrict(const PMap& T, const IntervalSet& A) {
    PMap m = restrict(T, A);
    IntervalSet dom = domain(m).canonical();
    IntervalSet rng = range(m).canonical();
    return {m, dom, rng};
}

PartialIso partial_compose(const PartialIso& phi, const PartialIso& psi) {
    if (!set_equal(psi.rng, phi.dom)) throw Error("DOMAIN_RANGE_MISMATCH", "range of the inner map differs from the domain of the outer map");
    PMap m = compose(phi.map, psi.map);
    return {m, psi.dom, phi.rng};
}

PartialIso partial_paste(const std::vector<PartialIso>& parts) {
    IntervalSet dom, rng;
    std::vector<PMap> maps;
    for (auto& p : parts) {
        if (!disjoint(dom, p.dom)) throw Error("OVERLAP", "pasted domains overlap");
        if (!disjoint(rng, p.rng)) throw Error("OVERLAP", "pasted ranges overlap");
        dom = set_union(dom, p.dom);
        rng = set_union(rng, p.rng);
        maps.push_back(p.map);
    }
    return {paste_pieces(maps), dom, rng};
}

PartialIso partial_inverse(const PartialIso& phi) { return {inverse(phi.map), phi.rng, phi.dom}; }

}  // namespace ergokit
