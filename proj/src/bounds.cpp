#include "treemix/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "treemix/error.hpp"
#include "treemix/paircount.hpp"
#include "treemix/tree.hpp"

namespace treemix {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kBetaSlack = 1e-12;

double pow_d(int A, std::int64_t e) {
  return std::pow(static_cast<double>(A), static_cast<double>(e));
}

// (A^P - 1)/(A - 1) as a double.
double subtree_size(int A, std::int64_t P) {
  return std::expm1(static_cast<double>(P) * std::log(static_cast<double>(A))) /
         static_cast<double>(A - 1);
}

// Whether n < A^e, exactly.
bool less_than_power(std::int64_t n, int A, std::int64_t e) {
  const auto p = checked_pow(A, e);
  return !p || n < *p;
}

double log_add_indicator(int indicator, double log_x) {
  if (indicator == 0) return log_x;
  // log(1 + exp(x))
  return log_x > 0.0 ? log_x + std::log1p(std::exp(-log_x)) : std::log1p(std::exp(log_x));
}

BoundBreakdown evaluate(const BernsteinInput& in, double proxy) {
  BoundBreakdown out;
  out.A = in.A;
  out.L = in.L;
  out.P = in.P;
  out.P2 = in.P2;
  out.Q2 = in.Q2;
  out.f = separation_f(in.A, in.Q2);
  out.beta = in.beta;
  out.epsilon = in.epsilon;
  out.provenance = in.envelope.provenance();
  out.variance_proxy = proxy;

  const double width = pow_d(in.A, in.L);  // A^L
  const double block = static_cast<double>(in.P2 + in.Q2);
  out.block_count = std::ceil(width / block);

  out.log_factor_markov = std::log(2.0) - in.beta * in.epsilon;

  // 0^x = 0 for x > 0: independent fields get mixing factor 1.
  const double alpha_f = in.envelope(out.f);
  if (alpha_f > 0.0) {
    const double exponent = block / (2.0 * block + width);
    out.log_factor_mixing =
        10.0 * std::sqrt(kE) * std::exp(exponent * std::log(alpha_f)) * (width / block);
  }

  const double p2 = static_cast<double>(in.P2);
  out.log_factor_variance =
      4.0 * in.beta * in.beta * kE * p2 * p2 * proxy * (width / block + 1.0);

  out.log_total = out.log_factor_markov + out.log_factor_mixing + out.log_factor_variance;
  out.log_total_clamped = std::min(0.0, out.log_total);
  return out;
}

}  // namespace

BernsteinInput BernsteinInput::from(const StripProblem& p, std::int64_t P2, std::int64_t Q2,
                                    double beta) {
  BernsteinInput in;
  in.A = p.A;
  in.L = p.L;
  in.P = p.P;
  in.P2 = P2;
  in.Q2 = Q2;
  in.beta = beta;
  in.epsilon = p.epsilon;
  in.C = p.C;
  in.sigma2 = p.sigma2;
  in.envelope = p.envelope;
  return in;
}

double beta_cap(int A, std::int64_t P, std::int64_t P2, double C) {
  check_rate(A);
  if (P < 1 || P2 < 1 || !(C > 0.0)) {
    throw InputError("beta_cap: P, P2 and C must be positive");
  }
  return static_cast<double>(A - 1) /
         (4.0 * kE * C * static_cast<double>(P2) * std::expm1(static_cast<double>(P) *
                                                               std::log(static_cast<double>(A))));
}

std::int64_t separation_f(int A, std::int64_t Q) {
  check_rate(A);
  if (Q < 1) throw InputError("separation_f: Q must be >= 1");
  std::int64_t c = 0;
  std::int64_t reach = 1;
  while (reach < Q) {
    ++c;
    if (__builtin_mul_overflow(reach, static_cast<std::int64_t>(A), &reach)) break;
  }
  return 2 * c;
}

double variance_proxy(int A, std::int64_t P, double C, double sigma2,
                      const MixingEnvelope& envelope) {
  check_rate(A);
  double mixed = 0.0;
  for (std::int64_t k = 1; k <= 2 * (P - 1); ++k) {
    const double a = envelope(k);
    if (a == 0.0) continue;
    mixed += a * std::exp(log_of(count_pairs_closed(A, P, k)));
  }
  return subtree_size(A, P) * sigma2 + 4.0 * C * C * mixed;
}

std::vector<std::string> admissibility_violations(const BernsteinInput& in) {
  std::vector<std::string> v;
  if (in.A < 2) {
    v.push_back("A must be >= 2");
    return v;
  }
  if (in.L < 0) v.push_back("L must be >= 0");
  if (in.P < 1) v.push_back("P must be >= 1");
  if (!(in.epsilon > 0.0) || !std::isfinite(in.epsilon)) v.push_back("epsilon must be positive");
  if (!(in.C > 0.0) || !std::isfinite(in.C)) v.push_back("C must be positive");
  if (!(in.sigma2 > 0.0) || !std::isfinite(in.sigma2)) v.push_back("sigma2 must be positive");
  if (!(in.beta > 0.0) || !std::isfinite(in.beta)) v.push_back("beta must be positive");
  if (in.Q2 < 2) v.push_back("Q2 must be >= 2 (got " + std::to_string(in.Q2) + ")");
  if (in.Q2 > in.P2) {
    v.push_back("Q2 must be <= P2 (got Q2=" + std::to_string(in.Q2) +
                ", P2=" + std::to_string(in.P2) + ")");
  }
  if (in.L >= 0 && in.P2 >= 1 && in.Q2 >= 1 && !less_than_power(in.P2 + in.Q2, in.A, in.L)) {
    v.push_back("P2 + Q2 must be < A^L (got " + std::to_string(in.P2 + in.Q2) + ")");
  }
  if (v.empty()) {
    const double cap = beta_cap(in.A, in.P, in.P2, in.C);
    if (in.beta > cap * (1.0 + kBetaSlack)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "beta must be <= " << cap << " (got " << in.beta << ")";
      v.push_back(msg.str());
    }
  }
  return v;
}

BoundBreakdown bernstein_bound(const BernsteinInput& in) {
  const auto problems = admissibility_violations(in);
  if (!problems.empty()) {
    std::string msg = "inadmissible Bernstein input:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw InputError(msg);
  }
  return evaluate(in, variance_proxy(in.A, in.P, in.C, in.sigma2, in.envelope));
}

double summability_ratio(const MixingEnvelope& envelope, int A, std::int64_t P) {
  check_rate(A);
  if (P < 1) throw InputError("summability_ratio: P must be >= 1");
  const double log_scale =
      std::log(static_cast<double>(P)) + static_cast<double>(P) * std::log(static_cast<double>(A));
  double ratio = 0.0;
  for (std::int64_t k = 1; k <= 2 * (P - 1); ++k) {
    const double a = envelope(k);
    if (a == 0.0) continue;
    ratio += a * std::exp(log_of(count_pairs_closed(A, P, k)) - log_scale);
  }
  return ratio;
}

BernsteinInput concentration_strip_input(const ConcentrationInput& in) {
  check_rate(in.A);
  if (in.L < 2) throw InputError("concentration: L must be >= 2");
  if (!(in.eta > 0.0 && in.eta < 1.0)) throw InputError("concentration: eta must be in (0, 1)");
  if (!(in.D > 0.0) || !std::isfinite(in.D)) throw InputError("concentration: D must be positive");
  if (!(in.C > 0.0)) throw InputError("concentration: C must be positive");

  const auto P1 = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(in.L), in.eta)));
  if (P1 < 1) throw InputError("concentration: derived P1 = " + std::to_string(P1) + " < 1");
  const std::int64_t level = in.L - P1;
  if (level < 1) {
    throw InputError("concentration: derived strip level L - P1 = " + std::to_string(level) +
                     " < 1");
  }
  const double raw = in.D * pow_d(in.A, level) / static_cast<double>(level) *
                     std::log(static_cast<double>(in.L));
  if (!(raw < 9.0e18)) throw InputError("concentration: derived P2 overflows");
  const auto P2 = static_cast<std::int64_t>(std::floor(raw));
  if (P2 < 2) throw InputError("concentration: derived P2 = " + std::to_string(P2) + " < 2");
  if (!less_than_power(2 * P2, in.A, level)) {
    throw InputError("concentration: derived P2 + Q2 = " + std::to_string(2 * P2) +
                     " is not < A^(L-P1)");
  }

  BernsteinInput strip;
  strip.A = in.A;
  strip.L = level;
  strip.P = P1;
  strip.P2 = P2;
  strip.Q2 = P2;
  strip.beta = beta_cap(in.A, P1, P2, in.C);
  strip.epsilon = 0.5 * in.epsilon * subtree_size(in.A, in.L);
  strip.C = in.C;
  strip.sigma2 = in.sigma2;
  strip.envelope = in.envelope;
  return strip;
}

BoundBreakdown concentration_bound(const ConcentrationInput& in) {
  if (!(in.epsilon > 0.0)) throw InputError("concentration: epsilon must be positive");
  const auto strip = concentration_strip_input(in);
  auto out = bernstein_bound(strip);

  // The wedge sum is at most C |W_L|; its tail probability is an indicator.
  const double wedge = 2.0 * in.C * subtree_size(in.A, strip.L);
  const double threshold = strip.epsilon;
  out.indicator_wedge = wedge > threshold ? 1 : 0;

  ConcentrationDetail detail;
  detail.generations = in.L;
  detail.P1 = strip.P;
  detail.eta = in.eta;
  detail.D = in.D;
  detail.epsilon_strip = strip.epsilon;
  detail.strip_log_total = out.log_total;
  out.concentration = detail;

  out.log_total = log_add_indicator(out.indicator_wedge, out.log_total);
  out.log_total_clamped = std::min(0.0, out.log_total);
  return out;
}

AsymptoticFit asymptotic_fit(const std::vector<std::pair<std::int64_t, double>>& series,
                             double epsilon) {
  if (series.size() < 4) throw InputError("asymptotic_fit: need at least 4 points");
  if (!(epsilon > 0.0)) throw InputError("asymptotic_fit: epsilon must be positive");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [L, lb] : series) {
    if (L < 2) throw InputError("asymptotic_fit: L must be >= 2");
    if (!std::isfinite(lb)) throw InputError("asymptotic_fit: non-finite log bound");
    const double l = static_cast<double>(L);
    x.push_back(-epsilon * l / std::log(l));
    y.push_back(lb);
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 1e-300)) throw InputError("asymptotic_fit: degenerate design (all L equal)");
  AsymptoticFit fit;
  fit.c2 = sxy / sxx;
  fit.c1 = std::exp(my - fit.c2 * mx);
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + fit.c2 * (x[i] - mx));
    sse += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

ParamGrid ParamGrid::exhaustive(int A, std::int64_t L, std::int64_t max_values) {
  check_rate(A);
  ParamGrid g;
  for (std::int64_t v = 2; v < 2 + max_values && less_than_power(v + 2, A, L); ++v) {
    g.p2_values.push_back(v);
    g.q2_values.push_back(v);
  }
  return g;
}

BernsteinInput optimize_params(const StripProblem& problem, const ParamGrid& grid) {
  if (grid.p2_values.empty() || grid.q2_values.empty() || grid.beta_points_per_decade < 1 ||
      grid.beta_decades < 0) {
    throw InputError("optimize_params: empty grid");
  }
  auto p2s = grid.p2_values;
  auto q2s = grid.q2_values;
  std::sort(p2s.begin(), p2s.end());
  p2s.erase(std::unique(p2s.begin(), p2s.end()), p2s.end());
  std::sort(q2s.begin(), q2s.end());
  q2s.erase(std::unique(q2s.begin(), q2s.end()), q2s.end());

  const double proxy =
      variance_proxy(problem.A, problem.P, problem.C, problem.sigma2, problem.envelope);
  const int n_beta = grid.beta_points_per_decade * grid.beta_decades;

  std::optional<BernsteinInput> best;
  double best_value = 0.0;
  for (const auto p2 : p2s) {
    for (const auto q2 : q2s) {
      auto candidate = BernsteinInput::from(problem, p2, q2, 1.0);
      candidate.beta = (p2 >= 1 && problem.C > 0.0 && problem.P >= 1)
                           ? beta_cap(problem.A, problem.P, p2, problem.C)
                           : 1.0;
      if (!admissibility_violations(candidate).empty()) continue;
      const double cap = candidate.beta;
      // Descending beta so that ties keep the largest.
      for (int i = 0; i <= n_beta; ++i) {
        candidate.beta =
            cap * std::pow(10.0, -static_cast<double>(i) / grid.beta_points_per_decade);
        const double value = evaluate(candidate, proxy).log_total;
        if (!best || value < best_value) {
          best = candidate;
          best_value = value;
        }
      }
    }
  }
  if (!best) throw InputError("optimize_params: infeasible grid (no admissible point)");
  return *best;
}

}  // namespace treemix
