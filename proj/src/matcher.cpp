#include "ergokit/matcher.hpp"

#include <algorithm>

#include "ergokit/error.hpp"

namespace ergokit {

namespace {

// Intervals consumed in order from the leading end; dir -1 consumes leftward.
struct Stream {
    IntervalList prefix;
    bool periodic = false;
    Scalar start, period;
    IntervalList pattern;  // inside [0, period), ascending
    int dir = 1;

    Scalar per_period() const { return list_length(pattern); }
    Scalar prefix_measure() const { return list_length(prefix); }

    // block b occupies start + b P + [0, P) (dir 1) or start - (b+1) P + [0, P) (dir -1)
    Scalar block_base(const mpz_class& b) const {
        return dir > 0 ? start + period * Scalar(b) : start - period * Scalar(mpz_class(b + 1));
    }
    Scalar block_step() const { return dir > 0 ? period : -period; }
};

struct Seg {
    Interval iv;
    bool periodic;
};

std::vector<Seg> enumerate(const Stream& s, const Scalar& upto) {
    std::vector<Seg> out;
    Scalar acc;
    for (auto& i : s.prefix) {
        out.push_back({i, false});
        acc += i.length();
    }
    if (!s.periodic) return out;
    IntervalList pat = s.pattern;
    if (s.dir < 0) std::reverse(pat.begin(), pat.end());
    for (mpz_class b = 0; acc < upto; ++b) {
        Scalar base = s.block_base(b);
        for (auto& i : pat) {
            out.push_back({{base + i.lo, base + i.hi}, true});
            acc += i.length();
        }
    }
    return out;
}

// Even and odd blocks of a periodic stream; the prefix stays with the even one.
std::pair<Stream, Stream> split_stream(const Stream& s) {
    Stream even = s, odd = s;
    odd.prefix.clear();
    even.period = odd.period = s.period * Scalar(2);
    IntervalList shifted;
    for (auto& i : s.pattern) shifted.push_back({i.lo + s.period, i.hi + s.period});
    even.pattern = s.dir > 0 ? s.pattern : shifted;
    odd.pattern = s.dir > 0 ? shifted : s.pattern;
    return {even, odd};
}

std::vector<Stream> streams_of(const IntervalSet& A0) {
    IntervalSet A = A0.canonical();
    std::vector<Stream> out;
    auto tail_stream = [](const Tail& t, int dir, IntervalList prefix) {
        Stream s;
        s.prefix = std::move(prefix);
        s.periodic = true;
        s.start = t.start;
        s.period = t.period;
        s.pattern = t.pattern;
        s.dir = dir;
        return s;
    };
    if (A.right) out.push_back(tail_stream(*A.right, 1, A.core));
    if (A.left) {
        IntervalList pre;
        if (!A.right) pre.assign(A.core.rbegin(), A.core.rend());
        out.push_back(tail_stream(*A.left, -1, pre));
    }
    if (out.empty()) {
        Stream s;
        s.prefix = A.core;
        out.push_back(s);
    }
    return out;
}

void match_streams(const Stream& X, const Stream& Y, std::vector<Piece>& out) {
    Scalar M0 = max(X.prefix_measure(), Y.prefix_measure());
    Scalar L, stepX, betaY;
    if (X.periodic) {
        Scalar x = X.per_period(), y = Y.per_period();
        L = lcm(x, y);
        stepX = X.block_step() * (L / x);
        betaY = Y.block_step() * (L / y) - stepX;
    }
    Scalar end = M0 + L;
    auto xs = enumerate(X, end), ys = enumerate(Y, end);
    size_t i = 0, j = 0;
    Scalar pos, ux, uy;  // measure consumed overall and inside the current intervals
    while (pos < end && i < xs.size() && j < ys.size()) {
        const Interval& a = xs[i].iv;
        const Interval& b = ys[j].iv;
        Scalar len = min(a.length() - ux, b.length() - uy);
        if (pos < M0 && M0 < pos + len) len = M0 - pos;
        if (pos + len > end) len = end - pos;
        Scalar dlo = X.dir > 0 ? a.lo + ux : a.hi - ux - len;
        Scalar rlo = Y.dir > 0 ? b.lo + uy : b.hi - uy - len;
        Interval dom{dlo, dlo + len};
        if (pos < M0 || !X.periodic)
            out.push_back({dom, Scalar(0), rlo - dlo, Scalar(0)});
        else
            out.push_back({dom, stepX, rlo - dlo, betaY});
        pos += len;
        ux += len;
        uy += len;
        if (ux == a.length()) {
            ++i;
            ux = Scalar(0);
        }
        if (uy == b.length()) {
            ++j;
            uy = Scalar(0);
        }
    }
}

}  // namespace

PartialIso partial_iso_between(const IntervalSet& A0, const IntervalSet& B0) {
    IntervalSet A = A0.canonical(), B = B0.canonical();
    ExtMeasure ma = A.measure(), mb = B.measure();
    if (!(ma == mb)) throw Error("MEASURE_MISMATCH", "measures " + ma.str() + " and " + mb.str() + " differ");
    auto xs = streams_of(A), ys = streams_of(B);
    if (xs.size() == 1 && ys.size() == 2) {
        auto [e, o] = split_stream(xs[0]);
        xs = {e, o};
    } else if (xs.size() == 2 && ys.size() == 1) {
        auto [e, o] = split_stream(ys[0]);
        ys = {e, o};
    }
    std::vector<Piece> pieces;
    for (size_t k = 0; k < xs.size(); ++k) match_streams(xs[k], ys[k], pieces);
    PartialIso phi{PMap::from_pieces(pieces), A, B};
    return phi;
}

PMap exchange_involution(const IntervalSet& A, const IntervalSet& B) {
    IntervalSet d1 = set_diff(A, B), d2 = set_diff(B, A);
    PartialIso phi = partial_iso_between(d1, d2);
    std::vector<Piece> ps = phi.map.pieces();
    for (auto& p : inverse(phi.map).pieces()) ps.push_back(p);
    for (auto& p : complement(set_union(d1, d2)).progressions()) ps.push_back({p.I, p.step, Scalar(0), Scalar(0)});
    return validate_bijection(PMap::from_pieces(ps));
}

PMap send_within(const IntervalSet& C, const IntervalSet& A, const IntervalSet& B) {
    if (!subset(A, C) || !subset(B, C)) throw Error("NOT_SUBSET", "A and B must lie inside C");
    PartialIso p1 = partial_iso_between(A, B);
    PartialIso p2 = partial_iso_between(set_diff(C, A), set_diff(C, B));
    std::vector<Piece> ps = p1.map.pieces();
    for (auto& p : p2.map.pieces()) ps.push_back(p);
    for (auto& p : complement(C).progressions()) ps.push_back({p.I, p.step, Scalar(0), Scalar(0)});
    return validate_bijection(PMap::from_pieces(ps));
}

IntervalSet take_measure(const IntervalSet& A0, const Scalar& m) {
    IntervalSet A = A0.canonical();
    if (!A.bounded()) throw Error("OUT_OF_CLASS", "take_measure needs a bounded set");
    IntervalList out;
    Scalar left = m;
    for (auto& i : A.core) {
        if (left.sign() <= 0) break;
        Scalar len = min(i.length(), left);
        out.push_back({i.lo, i.lo + len});
        left -= len;
    }
    if (left.sign() > 0) throw Error("MEASURE_MISMATCH", "set has measure below " + m.str());
    return IntervalSet::of_list(out);
}

PMap restrict_invariant(const PMap& T, const IntervalSet& X) {
    std::vector<Piece> ps = restrict(T, X).pieces();
    for (auto& p : complement(X).progressions()) ps.push_back({p.I, p.step, Scalar(0), Scalar(0)});
    return validate_bijection(PMap::from_pieces(ps));
}

}  // namespace ergokit
