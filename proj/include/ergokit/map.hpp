#pragma once

#include <optional>
#include <vector>

#include "ergokit/intervalset.hpp"

namespace ergokit {

// Progression piece: block m is dom + m*step, translated by alpha + m*beta.
// step == 0 denotes a single interval (beta is then ignored).
struct Piece {
    Interval dom;
    Scalar step, alpha, beta;
};

struct CorePiece {
    Interval dom;
    Scalar shift;
};

// Block n of a right family is start + n*period + [u, v); of a left family,
// start - (n+1)*period + [u, v). Either translates by c + n*slope.
struct Family {
    Scalar u, v, c, slope;
};

struct SideForm {
    Scalar start, period;
    std::vector<Family> fam;
};

struct NormalForm {
    std::vector<CorePiece> core;
    std::optional<SideForm> right, left;
};

// A finitely described piecewise translation, possibly partial.
class PMap {
public:
    NormalForm nf;
    bool validated = false;  // set once checked to be a bijection of the line

    static PMap from_pieces(std::vector<Piece> pieces);
    static PMap identity();
    static PMap translation(const Scalar& c);
    static PMap translation_on(const IntervalSet& A, const Scalar& c);
    std::vector<Piece> pieces() const;
    bool empty() const { return nf.core.empty() && !nf.right && !nf.left; }
};

// Composition S o T (apply T first), defined where T lands in the domain of S.
PMap compose(const PMap& S, const PMap& T);
PMap inverse(const PMap& T);
PMap power(const PMap& T, long n);
PMap restrict(const PMap& T, const IntervalSet& A);
PMap restrict_image(const PMap& T, const IntervalSet& B);
PMap paste_pieces(const std::vector<PMap>& parts);

IntervalSet domain(const PMap& T);
IntervalSet range(const PMap& T);
IntervalSet image(const PMap& T, const IntervalSet& A);
IntervalSet preimage(const PMap& T, const IntervalSet& A);
IntervalSet support(const PMap& T);
// T(x); throws NOT_IN_DOMAIN when x is not covered.
Scalar apply(const PMap& T, const Scalar& x);

// Bijection checks; throw DOMAIN_GAP/DOMAIN_OVERLAP/IMAGE_GAP/IMAGE_OVERLAP with a witness.
PMap validate_bijection(PMap T);
void check_partial(const PMap& T, const IntervalSet& dom, const IntervalSet& rng);
bool eq_ae(const PMap& S, const PMap& T);
PMap cut_and_paste(const std::vector<std::pair<PMap, IntervalSet>>& pairs);

struct PartialIso {
    PMap map;
    IntervalSet dom, rng;
};

PartialIso partial_restrict(const PMap& T, const IntervalSet& A);
PartialIso partial_compose(const PartialIso& phi, const PartialIso& psi);
PartialIso partial_paste(const std::vector<PartialIso>& parts);
PartialIso partial_inverse(const PartialIso& phi);

// Intersection of two progressions {I + m D} and {J + n E}: for w >= 0 the block
// (I + (m0 + ms w) D) meets (J + (n0 + ns w) E) in res.I + w res.step.
struct ProgHit {
    Prog res;
    mpz_class m0, ms, n0, ns;
};
std::vector<ProgHit> intersect_progs(const Prog& a, const Prog& b);

}  // namespace ergokit
