#pragma once

#include <vector>

#include "ergokit/map.hpp"

namespace ergokit {

// A progression on which map j translates block w by c[j] + e[j] w.
struct Atom {
    Prog prog;
    std::vector<Scalar> c, e;
};

// Common refinement of `region` by the pieces of every map.
std::vector<Atom> refine(const IntervalSet& region, const std::vector<PMap>& maps);

// Sets covering `region` (up to points some map fixes) with M(F) disjoint from F for every map M.
// Throws OUT_OF_CLASS when no residue split up to `max_modulus` separates an affine family.
std::vector<IntervalSet> disjoint_colors(const IntervalSet& region, const std::vector<PMap>& maps, long max_modulus = 12);

// Bounded c-periodic set generated by E: the union of E + k c over all integers k.
IntervalSet periodize(const IntervalSet& E, const Scalar& c);

}  // namespace ergokit
