#pragma once

#include <vector>

#include "ergokit/map.hpp"

namespace ergokit {

// The reference probability measure: density (4/3) 2^-(|n|+2) on [n, n+1).
Scalar mu(const IntervalSet& A);
Scalar mu_density(const mpz_class& n);

ExtMeasure d_uC(const PMap& S, const PMap& T, const IntervalSet& C);
Scalar d_mu(const PMap& S, const PMap& T);
ExtMeasure d_uf(const PMap& S, const PMap& T);
IntervalSet disagreement(const PMap& S, const PMap& T);

// Dyadic test sets: level m >= 0 lists [k/2^m, (k+1)/2^m) inside [-r, r), r = max(m, 1), k increasing.
std::vector<Interval> dyadic_sets(long count);
std::vector<Interval> dyadic_level(long m);
Scalar weak_term(const PMap& S, const PMap& T, const IntervalSet& C);
struct WeakValue {
    Scalar value;
    Scalar truncation_error;
};
WeakValue weak_metric(const PMap& S, const PMap& T, long trunc);

Scalar cm_metric(const PMap& S, const PMap& T);
Scalar partial_metric(const PartialIso& phi, const PartialIso& psi);

}  // namespace ergokit
