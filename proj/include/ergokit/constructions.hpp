#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergokit/map.hpp"

namespace ergokit {

// One factor conj * g^exp * conj^-1 of a word.
struct Letter {
    std::string tag;
    int exp = 1;
    std::optional<PMap> conj;
};

struct GroupWord {
    std::vector<Letter> letters;

    PMap evaluate(const std::map<std::string, PMap>& gens) const;
    GroupWord inverse() const;
    GroupWord conjugated(const PMap& V) const;  // V w V^-1
    std::string str() const;
};

struct WordResult {
    PMap map;
    GroupWord word;
};

// A subset of C with C ∩ supp T = A ⊔ (T(A) ∪ T^-1(A)) on C ∩ supp T.
IntervalSet separator(const PMap& T, const IntervalSet& C);
bool separator_holds(const PMap& T, const IntervalSet& C, const IntervalSet& A);

WordResult commutator_involution(const PMap& T, const IntervalSet& B);
PMap conjugate_involutions(const PMap& U, const PMap& V, const IntervalSet& C);
// Involutions U1, U2, U3 with U1 U2 U3 = T.
std::vector<PMap> three_involutions(const PMap& T, long budget);
PMap multiply_support(const PMap& T, long k);
WordResult normal_involution_with_measure(const PMap& U, const Scalar& t);

}  // namespace ergokit
