#include "treemix/paircount.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "treemix/error.hpp"
#include "treemix/tree.hpp"

namespace treemix {

namespace {

void check_args(int rate, std::int64_t gens) {
  check_rate(rate);
  if (gens < 1) throw InputError("P must be >= 1, got " + std::to_string(gens));
}

mpz_class power(int rate, std::int64_t e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(rate),
                static_cast<unsigned long>(e));
  return out;
}

// floor(x / 2) and ceil(x / 2) for x >= 0 in integers.
std::int64_t half_floor(std::int64_t x) { return x / 2; }
std::int64_t half_ceil(std::int64_t x) { return (x + 1) / 2; }

}  // namespace

std::map<std::int64_t, PairCount> pair_distance_histogram(int rate, std::int64_t gens) {
  check_args(rate, gens);
  const auto nodes = region_nodes(Subtree{{0, 1}, gens}, rate, kEnumNodeCap);
  std::map<std::int64_t, std::uint64_t> counts;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      counts[tree_distance(nodes[a], nodes[b], rate)] += 2;
    }
  }
  std::map<std::int64_t, PairCount> out;
  for (const auto& [d, c] : counts) out[d] = PairCount(static_cast<unsigned long>(c));
  return out;
}

PairCount count_pairs_enum(int rate, std::int64_t gens, std::int64_t dist) {
  const auto hist = pair_distance_histogram(rate, gens);
  auto it = hist.find(dist);
  return it == hist.end() ? PairCount(0) : it->second;
}

PairCount count_pairs_sum(int rate, std::int64_t gens, std::int64_t dist) {
  check_args(rate, gens);
  if (dist < 1 || dist > 2 * (gens - 1)) return 0;
  const std::int64_t top_max = gens - 1 - half_ceil(dist);  // floor(P - 1 - L/2)
  PairCount total = 0;
  for (std::int64_t h = 0; h <= top_max; ++h) {
    const std::int64_t room = gens - 1 - h;
    PairCount inner = 0;
    for (std::int64_t i = std::max<std::int64_t>(1, dist - room); i <= std::min(dist, room); ++i) {
      PairCount partners = 0;
      if (dist == i) partners += 2;
      if (dist > i) partners += (rate - 1) * power(rate, dist - i - 1);
      inner += power(rate, i) * partners;
    }
    total += power(rate, h) * inner;
  }
  return total;
}

PairCount count_pairs_closed(int rate, std::int64_t gens, std::int64_t dist) {
  check_args(rate, gens);
  if (dist < 1 || dist > 2 * (gens - 1)) return 0;
  const std::int64_t P = gens;
  const std::int64_t L = dist;
  const mpz_class A = rate;
  const mpz_class AP = power(rate, P);
  const mpz_class AL = power(rate, L);
  const mpz_class top = power(rate, P - 1 + half_floor(L));

  // Every quotient below is exact: A - 1 divides each numerator.
  mpz_class n = 0;
  if (L <= P - 1) n += 2 * (AP - AL) / (A - 1);
  if (L <= P) n += (L - 1) * (AP - power(rate, L - 1));
  if (L >= 4) {
    n += (2 * (P - 1) - L + 1) * (top - power(rate, std::max(L - 1, P)));
    n -= 2 * (((A - 1) * (P - 1 - half_ceil(L)) - 1) * top + AL) / (A - 1);
  }
  if (4 <= L && L < P) n += 2 * (((A - 1) * (P - L) - 1) * AP + AL) / (A - 1);
  return n;
}

double log_of(const mpz_class& x) {
  if (sgn(x) <= 0) return -std::numeric_limits<double>::infinity();
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

double growth_ratio(int rate, std::int64_t gens, std::int64_t dist) {
  const auto n = count_pairs_closed(rate, gens, dist);
  if (sgn(n) == 0) return 0.0;
  const double log_scale = std::log(static_cast<double>(gens)) +
                           (static_cast<double>(gens) + 0.5 * static_cast<double>(dist)) *
                               std::log(static_cast<double>(rate));
  return std::exp(log_of(n) - log_scale);
}

}  // namespace treemix
