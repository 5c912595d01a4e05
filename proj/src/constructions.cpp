#include "ergokit/constructions.hpp"

#include "ergokit/coloring.hpp"
#include "ergokit/dynamics.hpp"
#include "ergokit/error.hpp"
#include "ergokit/matcher.hpp"

namespace ergokit {

namespace {

Scalar S(long v) { return Scalar(v); }

PMap with_identity(std::vector<Piece> ps, const IntervalSet& covered) {
    for (auto& p : complement(covered).progressions()) ps.push_back({p.I, p.step, Scalar(0), Scalar(0)});
    return validate_bijection(PMap::from_pieces(ps));
}

void append(std::vector<Piece>& out, const PMap& m) {
    for (auto& p : m.pieces()) out.push_back(p);
}

void require_involution(const PMap& U, const char* name) {
    if (!is_involution(U)) throw Error("NOT_INVOLUTION", std::string(name) + " is not an involution");
}

}  // namespace

PMap GroupWord::evaluate(const std::map<std::string, PMap>& gens) const {
    PMap acc = PMap::identity();
    for (auto& l : letters) {
        auto it = gens.find(l.tag);
        if (it == gens.end()) throw Error("PARSE_ERROR", "unknown generator " + l.tag);
        PMap f = l.exp < 0 ? ergokit::inverse(it->second) : it->second;
        if (l.conj) f = compose(*l.conj, compose(f, ergokit::inverse(*l.conj)));
        acc = compose(acc, f);
    }
    return acc;
}

GroupWord GroupWord::inverse() const {
    GroupWord w;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back({it->tag, -it->exp, it->conj});
    return w;
}

GroupWord GroupWord::conjugated(const PMap& V) const {
    GroupWord w = *this;
    for (auto& l : w.letters) l.conj = l.conj ? compose(V, *l.conj) : V;
    return w;
}

std::string GroupWord::str() const {
    std::string s;
    int k = 0;
    for (auto& l : letters) {
        if (!s.empty()) s += " ";
        std::string g = l.tag + (l.exp < 0 ? "^-1" : "");
        if (l.conj) {
            std::string c = "c" + std::to_string(k++);
            s += c + " " + g + " " + c + "^-1";
        } else {
            s += g;
        }
    }
    return s.empty() ? "id" : s;
}

IntervalSet separator(const PMap& T, const IntervalSet& C) {
    IntervalSet X = set_intersect(C, support(T)).canonical();
    PMap Ti = inverse(T);
    IntervalSet covered;
    std::vector<IntervalSet> parts;
    for (auto& F : disjoint_colors(X, {T})) {
        IntervalSet Fi = set_diff(F, covered);
        if (Fi.is_null()) continue;
        parts.push_back(Fi);
        covered = union_all({covered, image(T, Fi), image(Ti, Fi)});
    }
    return union_all(parts);
}

bool separator_holds(const PMap& T, const IntervalSet& C, const IntervalSet& A) {
    IntervalSet X = set_intersect(C, support(T));
    IntervalSet TA = image(T, A), TiA = preimage(T, A);
    if (!subset(A, X) || !set_intersect(A, set_union(TA, TiA)).is_null()) return false;
    return subset(X, union_all({A, TA, TiA}));
}

WordResult commutator_involution(const PMap& T, const IntervalSet& B0) {
    IntervalSet B = B0.canonical();
    ExtMeasure m = B.measure();
    if (m.infinite || m.is_zero()) throw Error("OUT_OF_RANGE", "B must have finite positive measure");
    if (!set_intersect(B, image(T, B)).is_null()) throw Error("OVERLAP", "B meets T(B)");
    IntervalSet B1 = take_measure(B, m.value / S(2));
    PMap V = exchange_involution(B1, set_diff(B, B1));
    PMap U = compose(T, compose(V, compose(inverse(T), V)));
    GroupWord w;
    w.letters.push_back({"T", 1, std::nullopt});
    w.letters.push_back({"T", -1, V});
    return {validate_bijection(U), w};
}

PMap conjugate_involutions(const PMap& U, const PMap& V, const IntervalSet& C) {
    require_involution(U, "U");
    require_involution(V, "V");
    IntervalSet sU = support(U), sV = support(V);
    if (!subset(sU, C) || !subset(sV, C)) throw Error("NOT_SUBSET", "supports must lie in C");
    if (!(sU.measure() == sV.measure()))
        throw Error("MEASURE_MISMATCH", "supports have measures " + sU.measure().str() + " and " + sV.measure().str());
    IntervalSet X = set_diff(C, sU), Y = set_diff(C, sV);
    if (!(X.measure() == Y.measure()))
        throw Error("MEASURE_MISMATCH", "complements in C have measures " + X.measure().str() + " and " + Y.measure().str());
    if (eq_ae(U, V)) return PMap::identity();
    IntervalSet AU = separator(U, IntervalSet::line()), AV = separator(V, IntervalSet::line());
    PartialIso phi1 = partial_iso_between(AU, AV);
    std::vector<Piece> ps;
    append(ps, phi1.map);
    append(ps, compose(V, compose(phi1.map, restrict(U, image(U, AU)))));
    IntervalSet XmY = set_diff(X, Y), YmX = set_diff(Y, X);
    if (XmY.measure() == YmX.measure()) {
        IntervalSet O = set_intersect(X, Y);
        for (auto& p : O.progressions()) ps.push_back({p.I, p.step, Scalar(0), Scalar(0)});
        append(ps, partial_iso_between(XmY, YmX).map);
    } else {
        append(ps, partial_iso_between(X, Y).map);
    }
    return with_identity(ps, C);
}

std::vector<PMap> three_involutions(const PMap& T, long budget) {
    if (is_involution(T)) return {T, PMap::identity(), PMap::identity()};
    Classification cl = classify(T, budget);
    std::vector<Piece> r1, r2;
    for (auto& comp : cl.comps) {
        if (comp.kind == Kind::Aperiodic)
            throw Error("UNSUPPORTED_APERIODIC", "conservative aperiodic component: " + comp.certificate);
        if (comp.kind == Kind::Unknown) throw Error("OUT_OF_CLASS", "component not classified within budget");
        if (comp.kind == Kind::Dissipative) {
            const Scalar& c = comp.c;
            for (auto& J : comp.wandering.canonical().core) {
                r1.push_back({J, c, Scalar(0), -c * S(2)});
                r1.push_back({{J.lo - c, J.hi - c}, -c, c * S(2), c * S(2)});
                r2.push_back({J, c, c, -c * S(2)});
                r2.push_back({{J.lo - c, J.hi - c}, -c, c * S(3), c * S(2)});
            }
            continue;
        }
        long n = comp.period;
        IntervalSet F = fundamental_domain(T, comp.set, n);
        PMap Tc = restrict(T, comp.set);
        std::vector<PMap> pw{restrict(PMap::identity(), comp.set)};
        for (long j = 1; j < n; ++j) pw.push_back(compose(Tc, pw.back()));
        auto mod = [n](long a) { return ((a % n) + n) % n; };
        for (long i = 0; i < n; ++i) {
            IntervalSet TiF = image(pw[i], F);
            append(r1, restrict(pw[mod(-2 * i)], TiF));
            append(r2, restrict(pw[mod(1 - 2 * i)], TiF));
        }
    }
    IntervalSet sup = support(T);
    return {with_identity(r2, sup), with_identity(r1, sup), PMap::identity()};
}

PMap multiply_support(const PMap& T, long k) {
    if (k < 1) throw Error("OUT_OF_RANGE", "k must be positive");
    IntervalSet sup = support(T).canonical();
    if (sup.measure().infinite) throw Error("INFINITE_SUPPORT", "pi_k needs finite support");
    if (k == 1) return T;
    std::vector<Piece> ps;
    std::vector<IntervalSet> cov;
    for (auto& p : restrict(T, sup).pieces()) {
        const Scalar& s = p.alpha;
        // cut the domain at integers and at points mapped to integers
        std::vector<Scalar> cuts{p.dom.lo, p.dom.hi};
        for (mpz_class z = p.dom.lo.floor() + 1; Scalar(z) < p.dom.hi; ++z) cuts.push_back(Scalar(z));
        for (mpz_class z = (p.dom.lo + s).floor() + 1; Scalar(z) < p.dom.hi + s; ++z) cuts.push_back(Scalar(z) - s);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (size_t j = 0; j + 1 < cuts.size(); ++j) {
            Interval d{cuts[j], cuts[j + 1]};
            mpz_class n = d.lo.floor(), m = (d.lo + s).floor();
            for (long i = 0; i < k; ++i) {
                Scalar off = S(k - 1) * Scalar(n) + S(i);
                Interval e{d.lo + off, d.hi + off};
                ps.push_back({e, Scalar(0), s + S(k - 1) * Scalar(mpz_class(m - n)), Scalar(0)});
                cov.push_back(IntervalSet::interval(e.lo, e.hi));
            }
        }
    }
    return with_identity(ps, union_all(cov));
}

WordResult normal_involution_with_measure(const PMap& U, const Scalar& t) {
    require_involution(U, "U");
    ExtMeasure s0 = support(U).measure();
    if (s0.infinite || s0.is_zero()) throw Error("NOT_INVOLUTION", "U must have finite positive support");
    if (t.sign() <= 0) throw Error("OUT_OF_RANGE", "t must be positive");
    PMap cur = U;
    GroupWord word;
    word.letters.push_back({"U", 1, std::nullopt});
    Scalar s = s0.value;
    auto step = [&](const Scalar& target) {
        IntervalSet A = separator(cur, IntervalSet::line());
        IntervalSet B = take_measure(A, target / S(4));
        IntervalSet Cs = set_union(B, image(cur, B));
        IntervalSet sup = support(cur).canonical();
        Scalar top = sup.core.back().hi;
        IntervalSet Ds = IntervalSet::interval(top, top + target / S(2));
        PMap V = exchange_involution(Cs, Ds);
        cur = validate_bijection(compose(cur, compose(V, compose(cur, V))));
        GroupWord tail = word.inverse().conjugated(V);
        word.letters.insert(word.letters.end(), tail.letters.begin(), tail.letters.end());
    };
    while (S(2) * s < t) {
        step(S(2) * s);
        s = S(2) * s;
    }
    step(t);
    return {cur, word};
}

}  // namespace ergokit
