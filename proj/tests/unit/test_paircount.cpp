#include <doctest.h>

#include <cmath>

#include "treemix/error.hpp"
#include "treemix/paircount.hpp"
#include "treemix/tree.hpp"

using namespace treemix;

TEST_CASE("small counts by enumeration") {
  CHECK(count_pairs_enum(2, 2, 1) == 4);
  CHECK(count_pairs_enum(2, 2, 2) == 2);
  for (std::int64_t L = 1; L <= 4; ++L) CHECK(count_pairs_enum(3, 1, L) == 0);
}

TEST_CASE("sum and closed form examples") {
  CHECK(count_pairs_sum(2, 2, 1) == 4);
  CHECK(count_pairs_closed(2, 2, 1) == 4);
  CHECK(count_pairs_closed(2, 2, 2) == 2);
  CHECK(count_pairs_sum(3, 4, 3) == count_pairs_enum(3, 4, 3));
  CHECK(count_pairs_closed(3, 4, 3) == count_pairs_enum(3, 4, 3));
  CHECK(count_pairs_sum(2, 5, 9) == 0);
  CHECK(count_pairs_closed(2, 5, 9) == 0);
}

TEST_CASE("three routes agree on small trees") {
  for (int A : {2, 3, 4}) {
    for (std::int64_t P = 1; P <= 5; ++P) {
      const auto hist = pair_distance_histogram(A, P);
      for (std::int64_t L = 1; L <= 2 * (P - 1) + 1; ++L) {
        const PairCount expected = hist.count(L) ? hist.at(L) : PairCount(0);
        CHECK(count_pairs_enum(A, P, L) == expected);
        CHECK(count_pairs_sum(A, P, L) == expected);
        CHECK(count_pairs_closed(A, P, L) == expected);
      }
    }
  }
}

TEST_CASE("counts sum to all ordered pairs") {
  for (int A = 2; A <= 6; ++A) {
    for (std::int64_t P = 1; P <= 15; ++P) {
      const PairCount n = geometric_count(A, P);
      PairCount total = 0;
      for (std::int64_t L = 1; L <= 2 * (P - 1); ++L) total += count_pairs_closed(A, P, L);
      CHECK(total == n * (n - 1));
    }
  }
}

TEST_CASE("large arguments stay exact") {
  // Far beyond 64-bit range; the two routes must still agree.
  CHECK(count_pairs_sum(5, 40, 41) == count_pairs_closed(5, 40, 41));
  CHECK(count_pairs_closed(5, 40, 41) > PairCount("1000000000000000000000000000000"));
}

TEST_CASE("growth ratio") {
  CHECK(growth_ratio(2, 1, 1) == 0.0);
  CHECK(growth_ratio(2, 2, 1) == doctest::Approx(4.0 / (2.0 * std::pow(2.0, 2.5))));
}

TEST_CASE("enumeration refuses oversized trees") {
  CHECK_THROWS_AS(count_pairs_enum(2, 20, 3), CapacityError);
  CHECK_THROWS_AS(count_pairs_closed(1, 3, 1), InputError);
  CHECK_THROWS_AS(count_pairs_closed(2, 0, 1), InputError);
}

TEST_CASE("log of big integers") {
  CHECK(log_of(PairCount(1)) == 0.0);
  PairCount big = 1;
  big <<= 3000;
  CHECK(log_of(big) == doctest::Approx(3000 * std::log(2.0)));
}
