#include <functional>
#include <random>

#include "doctest.h"
#include "ergokit/error.hpp"
#include "helpers.hpp"

using namespace th;

namespace {

std::string code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("validation") {
    CHECK(validate_bijection(PMap::identity()).validated);
    CHECK(swap01().validated);
    std::vector<Piece> bad = {{{q(0), q(1)}, q(1), q(0), q(0)}, {{q(-1), q(0)}, q(-1), q(1), q(0)}};
    try {
        validate_bijection(PMap::from_pieces(bad));
        FAIL("expected IMAGE_OVERLAP");
    } catch (const Error& e) {
        CHECK(e.code() == "IMAGE_OVERLAP");
        REQUIRE(e.witness());
        Scalar lo = q(e.witness()->first), hi = q(e.witness()->second);
        CHECK(q(0) <= lo);
        CHECK(hi <= q(1));
    }
    std::vector<Piece> gap = {{{q(0), q(1)}, q(1), q(0), q(0)}, {{q(-1), q("-1/2")}, q(-1), q(0), q(0)}};
    CHECK(code_of([&] { validate_bijection(PMap::from_pieces(gap)); }) == "DOMAIN_GAP");
}

TEST_CASE("group operations") {
    PMap s = swap01();
    CHECK(eq_ae(compose(s, s), PMap::identity()));
    CHECK(eq_ae(inverse(PMap::translation(q(1))), PMap::translation(q(-1))));
    CHECK(eq_ae(compose(PMap::translation(q(1)), PMap::translation(q(1))), PMap::translation(q(2))));
    PMap split = core_map({{q(0), q("1/2"), q(1)}, {q("1/2"), q(1), q(1)}, {q(1), q(2), q(-1)}});
    CHECK(eq_ae(split, s));
    CHECK(!eq_ae(s, PMap::identity()));
    CHECK(apply(compose(PMap::translation(q(1)), s), q("1/2")) == q("5/2"));
}

TEST_CASE("support and transport") {
    CHECK(support(PMap::identity()).is_null());
    CHECK(support(swap01()) == iv(0, 2));
    CHECK(set_equal(support(PMap::translation(q(1))), IntervalSet::line()));
    CHECK(set_equal(image(swap01(), iv(0, 1)), iv(1, 2)));
    auto st = staircase_set(q("1/2"));
    CHECK(set_equal(image(PMap::translation(q(1)), st), st.translate(q(1))));
    CHECK(set_equal(preimage(PMap::identity(), st), st));
}

TEST_CASE("cut and paste") {
    CHECK(eq_ae(cut_and_paste({{PMap::identity(), IntervalSet::ray_right(q(0))}, {PMap::identity(), IntervalSet::ray_left(q(0))}}),
                PMap::identity()));
    CHECK(eq_ae(cut_and_paste({{swap01(), iv(0, 2)}, {PMap::identity(), complement(iv(0, 2))}}), swap01()));
    CHECK(code_of([] {
              cut_and_paste({{PMap::identity(), IntervalSet::ray_right(q(0))}, {PMap::translation(q(1)), IntervalSet::ray_left(q(0))}});
          }) == "IMAGE_OVERLAP");
}

TEST_CASE("partial isomorphisms") {
    auto phi = partial_restrict(PMap::translation(q(1)), IntervalSet::ray_right(q(0)));
    CHECK(set_equal(phi.dom, IntervalSet::ray_right(q(0))));
    CHECK(set_equal(phi.rng, IntervalSet::ray_right(q(1))));
    CHECK(!set_equal(phi.dom, phi.rng));
    auto a = partial_restrict(PMap::translation(q(2)), iv(0, 1));
    auto b = partial_restrict(PMap::translation(q(2)), iv(1, 2));
    auto p = partial_paste({a, b});
    CHECK(p.dom == iv(0, 2));
    CHECK(p.rng == iv(2, 4));
    CHECK(p.map.nf.core.size() == 1);
    CHECK_THROWS_AS(partial_paste({a, a}), Error);
}

TEST_CASE("affine tail families compose") {
    // x -> x + n on [n, n+1), n >= 0, as a partial map onto even blocks
    std::vector<Piece> ps = {{{q(0), q(1)}, q(1), q(0), q(1)}};
    PMap f = PMap::from_pieces(ps);
    IntervalSet evens;
    evens.right = Tail{q(0), q(2), {{q(0), q(1)}}};
    CHECK(set_equal(range(f), evens));
    PMap g = compose(inverse(f), f);
    CHECK(support(g).is_null());
    CHECK(set_equal(domain(g), IntervalSet::ray_right(q(0))));
    CHECK(apply(f, q("7/2")) == q("13/2"));
    PMap ff = compose(f, f);  // [n,n+1) -> [4n, 4n+1)
    CHECK(apply(ff, q("5/2")) == q("17/2"));
}

TEST_CASE("group axioms on random maps") {
    std::mt19937 rng(1);
    for (int it = 0; it < 60; ++it) {
        PMap a = random_map(rng), b = random_map(rng), c = random_map(rng);
        CHECK(eq_ae(compose(a, inverse(a)), PMap::identity()));
        CHECK(eq_ae(compose(compose(a, b), c), compose(a, compose(b, c))));
        CHECK(subset(support(compose(a, b)), set_union(support(a), support(b))));
        CHECK(set_equal(support(compose(a, compose(b, inverse(a)))), image(a, support(b))));
        auto A = ivq("-1/3", "5/3");
        CHECK(image(a, A).measure() == A.measure());
        for (int k = -20; k < 20; ++k) {
            Scalar x(2 * k + 1, 7);
            CHECK(apply(compose(a, b), x) == apply(a, apply(b, x)));
            CHECK(apply(inverse(a), apply(a, x)) == x);
        }
        validate_bijection(compose(a, b));
    }
}
