#pragma once

// N(P, L): the number of ordered pairs (v, w), v != w, at tree distance
// exactly L inside a P-generation subtree of a rate-A tree.
//
// Three independent routes are provided. `count_pairs_enum` walks all pairs
// and is the oracle; `count_pairs_sum` evaluates the double sum over the
// generation h of the pair's top node and the depth i of v below it;
// `count_pairs_closed` evaluates the five-term closed form. All three agree
// exactly; see tests/test_paircount.cpp.

#include <cstdint>
#include <map>

#include <gmpxx.h>

namespace treemix {

using PairCount = mpz_class;

inline constexpr std::uint64_t kEnumNodeCap = 10'000;

/// Brute force over all ordered pairs. CapacityError above kEnumNodeCap nodes.
PairCount count_pairs_enum(int rate, std::int64_t gens, std::int64_t dist);

/// Distance histogram of the same enumeration, keyed by L >= 1.
std::map<std::int64_t, PairCount> pair_distance_histogram(int rate, std::int64_t gens);

PairCount count_pairs_sum(int rate, std::int64_t gens, std::int64_t dist);

PairCount count_pairs_closed(int rate, std::int64_t gens, std::int64_t dist);

/// N(P, L) / (P * A^(P + L/2)).
double growth_ratio(int rate, std::int64_t gens, std::int64_t dist);

/// Natural log of a positive big integer without overflow; -inf for zero.
double log_of(const mpz_class& x);

}  // namespace treemix
