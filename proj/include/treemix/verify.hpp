#pragma once

// Numerical checks of the inequalities: exact alpha-mixing coefficients and
// Davydov's covariance inequality on finite probability spaces, Monte Carlo
// tail probabilities against the Bernstein / concentration bounds, and
// sampled lower bounds on alpha for simulated fields.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "treemix/bounds.hpp"
#include "treemix/fields.hpp"
#include "treemix/tree.hpp"

namespace treemix {

inline constexpr int kMaxAtoms = 12;
inline constexpr double kDavydovTolerance = 1e-12;

// A finite probability space with two partitions G, H given as atom labels
// per outcome, and random variables xi (G-measurable) and eta (H-measurable).
struct FiniteSpace {
  std::vector<double> prob;
  std::vector<int> g_atom;
  std::vector<int> h_atom;
  std::vector<double> xi;
  std::vector<double> eta;

  /// Sizes, probabilities and atom caps. Measurability is checked separately.
  void validate() const;
  int g_count() const;
  int h_count() const;
};

/// sup |P(A n B) - P(A) P(B)| over A in sigma(G), B in sigma(H); in [0, 1/4].
double exact_alpha(const FiniteSpace& space);

struct DavydovResult {
  double alpha = 0.0;
  double lhs = 0.0;  // |Cov(xi, eta)|
  double rhs = 0.0;  // 10 alpha^(1/r) |xi|_p |eta|_q
  bool holds = true;
};

/// p, q, r may be +infinity. InputError for non-conjugate exponents or
/// non-measurable variables.
DavydovResult davydov_check(const FiniteSpace& space, double p, double q, double r);

/// Random space with 1..max_outcomes outcomes and 1..max_atoms atoms per
/// partition; about half the spaces tie H to G to make alpha large.
FiniteSpace random_finite_space(std::mt19937_64& gen, int max_outcomes = 64, int max_atoms = 8);

/// Exact binomial (Clopper-Pearson) one-sided 99% upper limit on p.
double binomial_upper_99(std::int64_t trials, std::int64_t successes);

struct TailEstimate {
  double epsilon = 0.0;
  std::int64_t n_replicates = 0;
  std::int64_t n_exceed = 0;
  double p_hat = 0.0;
  double ci_upper_99 = 0.0;
  double log_bound = 0.0;
  bool certified = true;  // false: the envelope is heuristic, no verdict
  bool violated = false;  // certified && bound < 1 && ci_upper_99 > bound
  BoundBreakdown bound;
};

struct McTailOptions {
  unsigned workers = 1;
  double eta = 0.5;  // concentration schedule, Generations regions
  double D = 1.0;
  std::optional<ParamGrid> grid;  // strip optimizer grid; exhaustive by default
  std::uint64_t cap = kDefaultNodeCap;
};

/// Exceedance frequencies of |sum Z| (strips) or |sum Z| / |V_L|
/// (Generations) over replicates 0 .. n_replicates - 1, each paired with
/// the bound computed from the field's certificate.
std::vector<TailEstimate> mc_tail(const FieldSpec& field, const Region& region, int A,
                                  const std::vector<double>& eps_grid,
                                  std::int64_t n_replicates, const McTailOptions& options = {});

// Event {sum_{v in nodes} Z_v > threshold}.
struct EventSpec {
  std::vector<NodeId> nodes;
  double threshold = 0.0;
};

struct EventPair {
  EventSpec left;
  EventSpec right;
};

struct AlphaSamplePlan {
  std::vector<EventPair> pairs;
  std::int64_t replicates = 10000;
  std::uint64_t replicate_offset = 0;
  unsigned workers = 1;
};

struct AlphaEstimate {
  double value = 0.0;      // max over pairs of |P(AB) - P(A)P(B)|, empirical
  double std_error = 0.0;  // of the maximizing pair (influence-function estimate)
  std::size_t argmax = 0;
};

/// Statistical lower bound on alpha_T(n): every event pair must be at tree
/// distance >= n. InputError for an empty plan or a pair closer than n.
AlphaEstimate empirical_alpha_lower(const FieldSpec& field, int A, std::int64_t n,
                                    const AlphaSamplePlan& plan);

/// Minimum tree distance between two node sets.
std::int64_t set_distance(const std::vector<NodeId>& a, const std::vector<NodeId>& b, int A);

}  // namespace treemix
