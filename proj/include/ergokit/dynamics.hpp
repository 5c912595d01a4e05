#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ergokit/map.hpp"

namespace ergokit {

enum class Kind { Periodic, Dissipative, Aperiodic, Unknown };
std::string kind_name(Kind k);

struct Component {
    IntervalSet set;
    Kind kind = Kind::Unknown;
    long period = 0;         // Periodic
    IntervalSet wandering;   // Dissipative: T^k(W) = W + c
    long k = 0;
    Scalar c;
    std::vector<Prog> blocks;     // Aperiodic: blocks carrying one interval exchange
    std::vector<Scalar> lengths;  // its interval lengths, two (a rotation) or three (order reversed)
    Scalar rotation;              // rotation number it is induced from
    std::string certificate;
};

struct Classification {
    std::vector<Component> comps;
    IntervalSet of_kind(Kind k) const;
    bool complete() const;
};

Classification classify(const PMap& T, long budget);
// Re-checks one certificate exactly.
bool verify_component(const PMap& T, const Component& comp);

// A set meeting every orbit of the period-n component X exactly once.
IntervalSet fundamental_domain(const PMap& T, const IntervalSet& X, long n);

struct HopfParts {
    PMap dissipative, finite, infinite;
};
HopfParts hopf(const PMap& T, long budget);

struct Induced {
    PMap map;
    std::vector<std::pair<IntervalSet, long>> parts;  // (A_n, n)
};
Induced induce(const PMap& T, const IntervalSet& A, long budget);

struct Marker {
    IntervalSet set;
    std::string certificate;
};
Marker rokhlin_marker(const PMap& T, const Scalar& eps, long budget);

struct Factorization {
    PMap t1, t2, teps;
};
Factorization factor_split(const PMap& T, const IntervalSet& D, const Scalar& eps, long budget);
// Named checks of the factorization postconditions.
std::vector<std::pair<std::string, bool>> verify_factorization(const PMap& T, const IntervalSet& D, const Scalar& eps,
                                                               const Factorization& f);

PMap skyscraper_approx(const PMap& T, long levels, long budget);
PMap truncate_support(const PMap& T, const IntervalSet& X);

bool is_involution(const PMap& T);

}  // namespace ergokit
