#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "ergokit/intervalset.hpp"
#include "ergokit/map.hpp"
#include "ergokit/scalar.hpp"

namespace th {

using namespace ergokit;

// Switches the session field for one test scope.
struct Field {
    explicit Field(long d) { Scalar::set_field(d); }
    ~Field() { Scalar::set_field(0); }
};

inline Scalar q(const std::string& s) { return Scalar::parse(s); }
inline Scalar q(long p, long d = 1) { return Scalar(p, d); }

inline IntervalSet iv(long a, long b) { return IntervalSet::interval(Scalar(a), Scalar(b)); }
inline IntervalSet ivq(const std::string& a, const std::string& b) { return IntervalSet::interval(q(a), q(b)); }

// Builds a map from (lo, hi, shift) triples on the core plus identity elsewhere.
inline PMap core_map(std::initializer_list<std::tuple<Scalar, Scalar, Scalar>> pcs) {
    std::vector<Piece> ps;
    IntervalSet covered;
    for (auto& [a, b, s] : pcs) {
        ps.push_back({{a, b}, Scalar(0), s, Scalar(0)});
        covered = set_union(covered, IntervalSet::interval(a, b));
    }
    for (auto& p : complement(covered).progressions()) ps.push_back({p.I, p.step, Scalar(0), Scalar(0)});
    return validate_bijection(PMap::from_pieces(ps));
}

inline PMap swap01() { return core_map({{q(0), q(1), q(1)}, {q(1), q(2), q(-1)}}); }

// rotation of [a, a+1) by r in (0,1)
inline PMap rotation(const Scalar& r, const Scalar& a = Scalar(0)) {
    return core_map({{a, a + Scalar(1) - r, r}, {a + Scalar(1) - r, a + Scalar(1), r - Scalar(1)}});
}

// x -> x + c on the whole line
inline PMap shift(const Scalar& c) { return PMap::translation(c); }

// golden rotation number (sqrt 5 - 1)/2, needs field 5
inline Scalar golden() { return q("-1/2+1/2*rt(5)"); }

// rotation by r on every block [n, n+1)
inline PMap blockwise_rotation(const Scalar& r) {
    Scalar one(1);
    std::vector<Piece> ps{{{q(0), one - r}, one, r, q(0)},
                          {{one - r, one}, one, r - one, q(0)},
                          {{q(-1), -r}, -one, r, q(0)},
                          {{-r, q(0)}, -one, r - one, q(0)}};
    return validate_bijection(PMap::from_pieces(ps));
}

// Random permutation of the quarter cells of [-2,2), identity elsewhere.
inline PMap random_perm_map(std::mt19937& rng, int cells = 16) {
    std::vector<int> perm(cells);
    for (int i = 0; i < cells; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Piece> ps;
    for (int i = 0; i < cells; ++i) ps.push_back({{Scalar(i - 8, 4), Scalar(i - 7, 4)}, q(0), Scalar(perm[i] - i, 4), q(0)});
    IntervalSet cov = IntervalSet::interval(q(-2), Scalar(cells - 8, 4));
    for (auto& p : complement(cov).progressions()) ps.push_back({p.I, p.step, q(0), q(0)});
    return validate_bijection(PMap::from_pieces(ps));
}

// Sample points of odd numerators over 2*den in [-lim, lim).
inline std::vector<Scalar> samples(long lim, long den) {
    std::vector<Scalar> v;
    for (long k = -lim * den; k < lim * den; ++k) v.push_back(Scalar(2 * k + 1, 2 * den));
    return v;
}

// Random rearrangement of quarter cells in [-2,2), identity on [-3,-2) and [2,3) tails,
// optionally followed by a translation by a multiple of 1/2.
inline PMap random_map(std::mt19937& rng) {
    std::vector<int> perm(16);
    for (int i = 0; i < 16; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Piece> ps;
    for (int i = 0; i < 16; ++i) ps.push_back({{Scalar(i - 8, 4), Scalar(i - 7, 4)}, q(0), Scalar(perm[i] - i, 4), q(0)});
    ps.push_back({{q(2), q(3)}, q(1), q(0), q(0)});
    ps.push_back({{q(-3), q(-2)}, q(-1), q(0), q(0)});
    PMap m = validate_bijection(PMap::from_pieces(ps));
    if (rng() % 2) m = compose(m, PMap::translation(Scalar(static_cast<long>(rng() % 5) - 2, 2)));
    return m;
}

// k distinct quarter cells in [lo, lo + 4), or a random subset of them when k < 0
inline IntervalSet random_cells(std::mt19937& rng, long lo, int k = -1) {
    std::vector<int> idx(16);
    for (int i = 0; i < 16; ++i) idx[i] = i;
    IntervalList l;
    if (k < 0) {
        for (int i = 0; i < 16; ++i)
            if (rng() % 2) l.push_back({Scalar(lo) + Scalar(i, 4), Scalar(lo) + Scalar(i + 1, 4)});
        return IntervalSet::of_list(l);
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int i = 0; i < k; ++i) l.push_back({Scalar(lo) + Scalar(idx[i], 4), Scalar(lo) + Scalar(idx[i] + 1, 4)});
    return IntervalSet::of_list(l);
}

// a random eventually periodic set built on quarter cells
inline IntervalSet random_set(std::mt19937& rng, bool tails) {
    IntervalList core;
    for (int i = -8; i < 8; ++i)
        if (rng() % 2) core.push_back({Scalar(i, 4), Scalar(i + 1, 4)});
    IntervalSet s = IntervalSet::of_list(core);
    if (tails && rng() % 3) {
        long p = static_cast<long>(rng() % 2) + 1;
        IntervalSet t;
        t.right = Tail{q(2), q(p), {{q(0), Scalar(static_cast<long>(rng() % 3) + 1, 4)}}};
        s = set_union(s, t);
    }
    if (tails && rng() % 3) {
        long p = static_cast<long>(rng() % 2) + 1;
        IntervalSet t;
        t.left = Tail{q(-2), q(p), {{q(1, 4), q(1, 2)}}};
        s = set_union(s, t);
    }
    return s.canonical();
}

// [0,1) -> [1,2) -> [2,3) -> [0,1)
inline PMap three_cycle() { return core_map({{q(0), q(2), q(1)}, {q(2), q(3), q(-2)}}); }

}  // namespace th
