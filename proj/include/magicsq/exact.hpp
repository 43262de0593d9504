#ifndef MAGICSQ_EXACT_HPP
#define MAGICSQ_EXACT_HPP

#include <gmpxx.h>

#include <cstdint>

#include "magicsq/types.hpp"

namespace magicsq {

using BigCount = mpz_class;

// Exact |Sigma(R, C)| by row-by-row dynamic programming over residual column
// sums, exact integer arithmetic throughout. When all remaining row sums are
// equal the residual vector is canonicalized by sorting, which collapses the
// state space for magic margins. Throws size_error when the number of distinct
// DP states exceeds `state_budget`.
BigCount exact_count(const Margins& margins, std::uint64_t state_budget = 100000000ULL);

// Brute-force oracle: exhaustive recursive enumeration of tables.
// Restricted to N <= 12 and dimensions <= 4 x 4.
BigCount enumerate_count(const Margins& margins);

// ln of a BigCount (for comparison against log-space estimates).
double log_big(const BigCount& c);

}  // namespace magicsq

#endif
