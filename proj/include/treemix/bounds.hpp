#pragma once

// Bernstein tail bound for sums over a strip of a rate-A tree, the
// concentration bound for the first L generations built on top of it, and
// the supporting pieces: beta cap, summability ratio, asymptotic fit and a
// grid optimizer for the blocking parameters.
//
// The strip bound is
//
//   P(|sum_{v in V'} Z_v| > eps)
//     <= 2 exp(-beta eps)
//        * exp{10 sqrt(e) alpha(f)^((P2+Q2)/(2P2+2Q2+A^L)) A^L/(P2+Q2)}
//        * exp{4 beta^2 e P2^2 K' (A^L/(P2+Q2) + 1)}
//
// with K' = (A^P-1)/(A-1) sigma^2 + 4 C^2 sum_{k=1}^{2(P-1)} alpha(k) N(P,k)
// and f = 2 ceil(log Q2 / log A). Everything is carried in log space.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treemix/envelope.hpp"

namespace treemix {

// Everything except the blocking parameters; the optimizer's input.
struct StripProblem {
  int A = 2;
  std::int64_t L = 0;  // strip level
  std::int64_t P = 1;  // strip depth
  double epsilon = 1.0;
  double C = 1.0;       // sup bound of |Z_v|
  double sigma2 = 1.0;  // variance bound
  MixingEnvelope envelope = MixingEnvelope::zero();
};

struct BernsteinInput {
  int A = 2;
  std::int64_t L = 0;
  std::int64_t P = 1;
  std::int64_t P2 = 2;
  std::int64_t Q2 = 2;
  double beta = 0.0;
  double epsilon = 1.0;
  double C = 1.0;
  double sigma2 = 1.0;
  MixingEnvelope envelope = MixingEnvelope::zero();

  static BernsteinInput from(const StripProblem& p, std::int64_t P2, std::int64_t Q2,
                             double beta);
};

// Derived quantities of a concentration evaluation.
struct ConcentrationDetail {
  std::int64_t generations = 0;  // L of V_L
  std::int64_t P1 = 0;
  double eta = 0.5;
  double D = 1.0;
  double epsilon_strip = 0.0;  // (eps / 2) |V_L|
  double strip_log_total = 0.0;
};

struct BoundBreakdown {
  double log_factor_markov = 0.0;    // log 2 - beta eps
  double log_factor_mixing = 0.0;    // exponent of the mixing factor
  double log_factor_variance = 0.0;  // exponent of the variance factor
  double variance_proxy = 0.0;       // K'
  double block_count = 0.0;          // T = ceil(A^L / (P2 + Q2)), exact below 2^53
  double log_total = 0.0;
  double log_total_clamped = 0.0;  // min(0, log_total)
  int indicator_wedge = 0;

  // Parameters the strip bound was evaluated at.
  int A = 2;
  std::int64_t L = 0;
  std::int64_t P = 1;
  std::int64_t P2 = 0;
  std::int64_t Q2 = 0;
  std::int64_t f = 0;
  double beta = 0.0;
  double epsilon = 0.0;
  Provenance provenance = Provenance::exact;

  std::optional<ConcentrationDetail> concentration;
};

/// (A - 1) / (4 e C P2 (A^P - 1)).
double beta_cap(int A, std::int64_t P, std::int64_t P2, double C);

/// 2 ceil(log Q / log A), computed in integers.
std::int64_t separation_f(int A, std::int64_t Q);

/// K' of the variance factor.
double variance_proxy(int A, std::int64_t P, double C, double sigma2,
                      const MixingEnvelope& envelope);

/// Every violated admissibility constraint, human readable; empty if admissible.
std::vector<std::string> admissibility_violations(const BernsteinInput& in);

/// InputError listing every violated constraint when inadmissible.
BoundBreakdown bernstein_bound(const BernsteinInput& in);

/// (sum_{k=1}^{2(P-1)} alpha(k) N(P,k)) / (P A^P).
double summability_ratio(const MixingEnvelope& envelope, int A, std::int64_t P);

struct ConcentrationInput {
  int A = 2;
  std::int64_t L = 2;
  double epsilon = 1.0;
  double C = 1.0;
  double sigma2 = 1.0;
  MixingEnvelope envelope = MixingEnvelope::zero();
  double eta = 0.5;
  double D = 1.0;
};

/// The strip schedule used by concentration_bound: P1 = floor(L^eta) and
/// P2 = Q2 = floor(D A^(L-P1) / (L-P1) log L), beta at its cap.
/// InputError naming the offending derived value when inadmissible.
BernsteinInput concentration_strip_input(const ConcentrationInput& in);

/// Bound on P(|V_L|^-1 |sum_{v in V_L} Z_v| > eps): the wedge indicator plus
/// the strip bound at threshold (eps / 2) |V_L|, combined in log space.
BoundBreakdown concentration_bound(const ConcentrationInput& in);

struct AsymptoticFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log_bound against -eps L / log L. Empirical constants.
AsymptoticFit asymptotic_fit(const std::vector<std::pair<std::int64_t, double>>& series,
                             double epsilon);

struct ParamGrid {
  std::vector<std::int64_t> p2_values;
  std::vector<std::int64_t> q2_values;
  int beta_points_per_decade = 32;
  int beta_decades = 3;

  /// Every P2, Q2 in [2, A^L) (up to `max_values` each).
  static ParamGrid exhaustive(int A, std::int64_t L, std::int64_t max_values = 512);
};

/// Admissible grid point minimizing log_total. Ties go to the smallest P2,
/// then the smallest Q2, then the largest beta. InputError("infeasible grid")
/// when no grid point is admissible.
BernsteinInput optimize_params(const StripProblem& problem, const ParamGrid& grid);

}  // namespace treemix
