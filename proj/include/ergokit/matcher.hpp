#pragma once

#include "ergokit/map.hpp"

namespace ergokit {

// Greedy leftmost-first matcher: a measure-preserving piecewise translation from A onto B.
// Infinite sets are consumed as streams from their core outward; blocks pair up periodically.
PartialIso partial_iso_between(const IntervalSet& A, const IntervalSet& B);

// Involution mapping A onto B, supported in the symmetric difference.
PMap exchange_involution(const IntervalSet& A, const IntervalSet& B);

// Element supported in C carrying A onto B and C \ A onto C \ B.
PMap send_within(const IntervalSet& C, const IntervalSet& A, const IntervalSet& B);

// Leftmost part of a bounded set with the given measure.
IntervalSet take_measure(const IntervalSet& A, const Scalar& m);

// T on the T-invariant set X, identity elsewhere.
PMap restrict_invariant(const PMap& T, const IntervalSet& X);

}  // namespace ergokit
