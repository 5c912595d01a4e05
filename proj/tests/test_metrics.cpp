#include <random>

#include "doctest.h"
#include "ergokit/error.hpp"
#include "ergokit/metrics.hpp"
#include "helpers.hpp"

using namespace th;

namespace {

// mu of [a, b) by summing the density over unit cells one at a time
Scalar mu_oracle(const Scalar& a, const Scalar& b) {
    Scalar total;
    for (long n = -40; n < 40; ++n) {
        Scalar lo = max(a, Scalar(n)), hi = min(b, Scalar(n + 1));
        if (lo < hi) total += (hi - lo) * Scalar(4, 3) / Scalar(mpz_class(mpz_class(1) << static_cast<unsigned>(std::abs(n) + 2)));
    }
    return total;
}

// Outside [-4, 4) both random maps are translations; inside they are constant on quarter cells.
Scalar cm_oracle(const PMap& S, const PMap& T) {
    Scalar total;
    for (long i = -16; i < 16; ++i) {
        Scalar mid(2 * i + 1, 8);
        Scalar d = (apply(S, mid) - apply(T, mid)).abs();
        total += min(d, Scalar(1)) * mu_oracle(Scalar(i, 4), Scalar(i + 1, 4));
    }
    Scalar dr = min((apply(S, q(100)) - apply(T, q(100))).abs(), Scalar(1));
    Scalar dl = min((apply(S, q(-100)) - apply(T, q(-100))).abs(), Scalar(1));
    // mu([4, inf)) = 1/24, mu((-inf, -4)) = 1/48
    return total + dr * Scalar(1, 24) + dl * Scalar(1, 48);
}

}  // namespace

TEST_CASE("reference measure") {
    CHECK(mu(IntervalSet::line()) == q(1));
    CHECK(mu(iv(0, 1)) == q(1, 3));
    CHECK(mu(iv(0, 2)) == q(1, 2));
    CHECK(mu(IntervalSet::ray_right(q(0))) == q(2, 3));
    CHECK(mu(IntervalSet::ray_left(q(0))) == q(1, 3));
    CHECK(mu(IntervalSet::empty()) == q(0));
    // mu of the staircase [2n, 2n+1): (4/3)(sum over even n of 2^-(|n|+2))
    IntervalSet ev;
    ev.right = Tail{q(0), q(2), {{q(0), q(1)}}};
    ev.left = Tail{q(0), q(2), {{q(0), q(1)}}};
    // right: 1/3 (1 + 1/4 + ...) = 4/9; left n = -2, -4, ...: (1/3)(1/4)(4/3) = 1/9
    CHECK(mu(ev) == q(5, 9));
    CHECK(mu(ev) + mu(complement(ev)) == q(1));
    CHECK(mu(staircase_set(q(1, 2))) + mu(complement(staircase_set(q(1, 2)))) == q(1));
    std::mt19937 rng(7);
    for (int it = 0; it < 200; ++it) {
        long a = static_cast<long>(rng() % 400) - 200, b = a + static_cast<long>(rng() % 100) + 1;
        Scalar lo(a, 13), hi(b, 13);
        CHECK(mu(IntervalSet::interval(lo, hi)) == mu_oracle(lo, hi));
    }
}

TEST_CASE("reference measure on irrational sets") {
    Scalar::set_field(2);
    Scalar r = Scalar::root();
    Scalar h = r / Scalar(2);
    // additivity across the irrational cut point
    CHECK(mu(IntervalSet::interval(q(0), h)) + mu(IntervalSet::interval(h, q(1))) == q(1, 3));
    CHECK(mu(IntervalSet::interval(q(0), h)) == h / Scalar(3));
    IntervalSet odd;
    odd.right = Tail{h, q(1), {{q(0), q(1, 2)}}};
    CHECK(mu(odd) + mu(complement(odd)) == q(1));
    IntervalSet bad;
    bad.right = Tail{q(0), r, {{q(0), q(1)}}};
    CHECK_THROWS_AS(mu(bad), Error);
    Scalar::set_field(0);
}

TEST_CASE("uniform metrics") {
    PMap id = PMap::identity(), s = swap01(), t = PMap::translation(q(1));
    CHECK(d_mu(id, id) == q(0));
    CHECK(d_mu(s, id) == q(1, 2));
    CHECK(d_uf(t, id) == ExtMeasure::inf());
    CHECK(d_mu(t, id) == q(1));
    CHECK(d_uf(s, id) == ExtMeasure::fin(q(2)));
    CHECK(d_uC(s, id, iv(1, 5)) == ExtMeasure::fin(q(1)));
    try {
        d_uC(s, id, IntervalSet::ray_right(q(0)));
        FAIL("expected C_INFINITE");
    } catch (const Error& e) {
        CHECK(e.code() == "C_INFINITE");
    }
}

TEST_CASE("weak metric") {
    PMap id = PMap::identity(), s = swap01();
    auto w = weak_metric(id, id, 8);
    CHECK(w.value == q(0));
    CHECK(w.truncation_error == q(1, 256));
    CHECK(weak_term(s, id, iv(0, 1)) == q(1));
    auto sets = dyadic_sets(12);
    REQUIRE(sets.size() == 12);
    CHECK(sets[0] == Interval{q(-1), q(0)});
    CHECK(sets[1] == Interval{q(0), q(1)});
    CHECK(sets[2] == Interval{q(-1), q(-1, 2)});
    // level 1 has four halves of [-1, 1), level 2 sixteen quarters of [-2, 2)
    CHECK(dyadic_level(2).size() == 16);
    CHECK(weak_metric(s, id, 12).value > q(0));
}

TEST_CASE("convergence in measure metric") {
    PMap id = PMap::identity();
    CHECK(cm_metric(id, id) == q(0));
    CHECK(cm_metric(swap01(), id) == q(1, 2));
    CHECK(cm_metric(rotation(q(1, 4)), id) == q(1, 8));
    CHECK(cm_metric(PMap::translation(q(1, 2)), id) == q(1, 2));
    CHECK(cm_metric(PMap::translation(q(3)), id) == q(1));
    // slope families: [n, n+1) -> [2n, 2n+1) on n >= 0, compared with the identity on [0, inf)
    std::vector<Piece> ps = {{{q(0), q(1)}, q(1), q(0), q(1)}};
    PMap f = PMap::from_pieces(ps);
    // on [n, n+1) displacement n; only n = 0 is below 1, so the value is mu([1, inf))
    CHECK(cm_metric(f, restrict(id, IntervalSet::ray_right(q(0)))) == q(1, 3));
}

TEST_CASE("hierarchy of metrics along shrinking rotations") {
    PMap id = PMap::identity();
    for (long n = 2; n <= 64; ++n) {
        PMap T = rotation(q(1, n));
        CHECK(cm_metric(T, id) == q(2, 3) * q(1, n) * (q(1) - q(1, n)));
        CHECK(d_mu(T, id) == q(1, 3));
        for (long m = 0; m <= 4; ++m)
            for (auto& C : dyadic_level(m)) CHECK(weak_term(T, id, IntervalSet::interval(C.lo, C.hi)) <= q(2, n));
    }
}

TEST_CASE("partial metric") {
    auto phi = partial_restrict(PMap::identity(), iv(0, 1));
    auto psi = partial_restrict(PMap::identity(), iv(0, 2));
    CHECK(partial_metric(phi, phi) == q(0));
    CHECK(partial_metric(phi, psi) == q(1, 6));
    CHECK(partial_metric(partial_restrict(PMap::translation(q(2)), iv(0, 1)), partial_restrict(PMap::translation(q(3)), iv(0, 1))) ==
          q(1, 3));
}

TEST_CASE("metric axioms and comparisons on random maps") {
    std::mt19937 rng(3);
    for (int it = 0; it < 40; ++it) {
        PMap a = random_map(rng), b = random_map(rng), c = random_map(rng);
        CHECK(cm_metric(a, b) == cm_oracle(a, b));
        CHECK(cm_metric(a, b) == cm_metric(b, a));
        CHECK(cm_metric(a, c) <= cm_metric(a, b) + cm_metric(b, c));
        CHECK(d_mu(a, b) == d_mu(b, a));
        CHECK(d_mu(a, c) <= d_mu(a, b) + d_mu(b, c));
        CHECK(d_mu(a, a) == q(0));
        CHECK((d_mu(a, b) == q(0)) == eq_ae(a, b));
        CHECK(d_uf(compose(c, a), compose(c, b)) == d_uf(a, b));
        auto pa = partial_restrict(a, iv(-1, 2)), pb = partial_restrict(b, ivq("-3/4", "5/2")), pc = partial_restrict(c, iv(0, 3));
        CHECK(partial_metric(pa, pb) == partial_metric(pb, pa));
        CHECK(partial_metric(pa, pc) <= partial_metric(pa, pb) + partial_metric(pb, pc));
        for (int k = 0; k < 5; ++k) {
            long lo = static_cast<long>(rng() % 24) - 12, len = static_cast<long>(rng() % 12) + 1;
            IntervalSet C = IntervalSet::interval(Scalar(lo, 4), Scalar(lo + len, 4));
            auto sd = set_symdiff(image(a, C), image(b, C)).measure();
            auto du = d_uC(a, b, C);
            CHECK(!sd.infinite);
            CHECK(sd.value <= Scalar(2) * du.value);
        }
    }
}
