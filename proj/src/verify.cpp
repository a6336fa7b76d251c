#include "treemix/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <thread>

#include <boost/math/distributions/binomial.hpp>

#include "treemix/error.hpp"

namespace treemix {

namespace {

std::vector<int> dense_labels(const std::vector<int>& labels, int& count) {
  std::map<int, int> remap;
  for (const int l : labels) remap.emplace(l, 0);
  int next = 0;
  for (auto& [_, v] : remap) v = next++;
  count = next;
  std::vector<int> out;
  out.reserve(labels.size());
  for (const int l : labels) out.push_back(remap[l]);
  return out;
}

// Runs body(lo, hi) over [0, n) split into `workers` contiguous chunks.
template <class Body>
void parallel_chunks(std::size_t n, unsigned workers, Body body) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(n, w * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

double lp_norm(const std::vector<double>& prob, const std::vector<double>& x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (prob[i] > 0.0) m = std::max(m, std::abs(x[i]));
    }
    return m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += prob[i] * std::pow(std::abs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

double reciprocal(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

}  // namespace

int FiniteSpace::g_count() const {
  int c = 0;
  dense_labels(g_atom, c);
  return c;
}

int FiniteSpace::h_count() const {
  int c = 0;
  dense_labels(h_atom, c);
  return c;
}

void FiniteSpace::validate() const {
  const auto n = prob.size();
  if (n == 0) throw InputError("finite space: no outcomes");
  if (g_atom.size() != n || h_atom.size() != n || xi.size() != n || eta.size() != n) {
    throw InputError("finite space: g, h, xi and eta must have one entry per outcome");
  }
  double total = 0.0;
  for (const double p : prob) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("finite space: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("finite space: probabilities must sum to 1");
  if (g_count() > kMaxAtoms) throw CapacityError("finite space: G has more than 12 atoms");
  if (h_count() > kMaxAtoms) throw CapacityError("finite space: H has more than 12 atoms");
}

double exact_alpha(const FiniteSpace& space) {
  space.validate();
  int ng = 0;
  int nh = 0;
  const auto g = dense_labels(space.g_atom, ng);
  const auto h = dense_labels(space.h_atom, nh);

  std::vector<double> pg(ng, 0.0);
  std::vector<double> ph(nh, 0.0);
  std::vector<std::vector<double>> joint(ng, std::vector<double>(nh, 0.0));
  for (std::size_t i = 0; i < space.prob.size(); ++i) {
    pg[g[i]] += space.prob[i];
    ph[h[i]] += space.prob[i];
    joint[g[i]][h[i]] += space.prob[i];
  }
  // P(AnB) - P(A)P(B) = sum_{a in A, b in B} d[a][b]. For a fixed A the best
  // B collects all positive (or all negative) column sums.
  std::vector<std::vector<double>> d(ng, std::vector<double>(nh));
  for (int a = 0; a < ng; ++a) {
    for (int b = 0; b < nh; ++b) d[a][b] = joint[a][b] - pg[a] * ph[b];
  }
  double best = 0.0;
  std::vector<double> col(nh);
  for (std::uint32_t mask = 1; mask < (1u << ng); ++mask) {
    std::fill(col.begin(), col.end(), 0.0);
    for (int a = 0; a < ng; ++a) {
      if (mask & (1u << a)) {
        for (int b = 0; b < nh; ++b) col[b] += d[a][b];
      }
    }
    double pos = 0.0;
    double neg = 0.0;
    for (const double c : col) (c > 0.0 ? pos : neg) += c;
    best = std::max({best, pos, -neg});
  }
  return std::min(best, 0.25);
}

DavydovResult davydov_check(const FiniteSpace& space, double p, double q, double r) {
  space.validate();
  for (const double e : {p, q, r}) {
    if (!(e >= 1.0)) throw InputError("davydov: exponents p, q, r must be >= 1");
  }
  const double conj = reciprocal(p) + reciprocal(q) + reciprocal(r);
  if (std::abs(conj - 1.0) > 1e-9) {
    throw InputError("davydov: exponents are not Hoelder conjugate (1/p + 1/q + 1/r = " +
                     std::to_string(conj) + ")");
  }
  std::map<int, double> xi_on;
  std::map<int, double> eta_on;
  for (std::size_t i = 0; i < space.prob.size(); ++i) {
    if (auto [it, fresh] = xi_on.emplace(space.g_atom[i], space.xi[i]);
        !fresh && it->second != space.xi[i]) {
      throw InputError("davydov: xi is not constant on G-atom " + std::to_string(space.g_atom[i]));
    }
    if (auto [it, fresh] = eta_on.emplace(space.h_atom[i], space.eta[i]);
        !fresh && it->second != space.eta[i]) {
      throw InputError("davydov: eta is not constant on H-atom " +
                       std::to_string(space.h_atom[i]));
    }
  }

  DavydovResult res;
  res.alpha = exact_alpha(space);
  double exi = 0.0;
  double eeta = 0.0;
  double exieta = 0.0;
  for (std::size_t i = 0; i < space.prob.size(); ++i) {
    exi += space.prob[i] * space.xi[i];
    eeta += space.prob[i] * space.eta[i];
  }
  for (std::size_t i = 0; i < space.prob.size(); ++i) {
    exieta += space.prob[i] * (space.xi[i] - exi) * (space.eta[i] - eeta);
  }
  res.lhs = std::abs(exieta);
  const double alpha_pow = res.alpha == 0.0 ? 0.0 : std::pow(res.alpha, reciprocal(r));
  res.rhs = 10.0 * alpha_pow * lp_norm(space.prob, space.xi, p) * lp_norm(space.prob, space.eta, q);
  res.holds = res.lhs <= res.rhs + kDavydovTolerance;
  return res;
}

FiniteSpace random_finite_space(std::mt19937_64& gen, int max_outcomes, int max_atoms) {
  std::uniform_int_distribution<int> outcomes(1, max_outcomes);
  const int n = outcomes(gen);
  std::uniform_int_distribution<int> atoms(1, std::min(max_atoms, n));
  const int ng = atoms(gen);
  const int nh = atoms(gen);
  std::uniform_int_distribution<int> pick_g(0, ng - 1);
  std::uniform_int_distribution<int> pick_h(0, nh - 1);
  std::bernoulli_distribution tied(0.5);
  std::bernoulli_distribution sparse(0.1);
  std::exponential_distribution<double> weight(1.0);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);

  FiniteSpace s;
  const bool tie = tied(gen);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const int g = pick_g(gen);
    s.g_atom.push_back(g);
    s.h_atom.push_back(tie ? g % nh : pick_h(gen));
    const double w = sparse(gen) ? 0.0 : weight(gen);
    s.prob.push_back(w);
    total += w;
  }
  if (total == 0.0) {
    s.prob[0] = 1.0;
    total = 1.0;
  }
  for (auto& p : s.prob) p /= total;

  const double xi_scale = std::exp(log_scale(gen));
  const double eta_scale = std::exp(log_scale(gen));
  std::vector<double> xi_atom(ng);
  std::vector<double> eta_atom(nh);
  for (auto& x : xi_atom) x = xi_scale * value(gen);
  for (auto& x : eta_atom) x = eta_scale * value(gen);
  for (int i = 0; i < n; ++i) {
    s.xi.push_back(xi_atom[s.g_atom[i]]);
    s.eta.push_back(eta_atom[s.h_atom[i]]);
  }
  return s;
}

double binomial_upper_99(std::int64_t trials, std::int64_t successes) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw InputError("binomial_upper_99: need 0 <= successes <= trials, trials > 0");
  }
  if (successes == trials) return 1.0;
  return boost::math::binomial_distribution<double>::find_upper_bound_on_p(
      static_cast<double>(trials), static_cast<double>(successes), 0.01);
}

std::vector<TailEstimate> mc_tail(const FieldSpec& field, const Region& region, int A,
                                  const std::vector<double>& eps_grid,
                                  std::int64_t n_replicates, const McTailOptions& options) {
  if (n_replicates < 100) throw InputError("n_replicates: must be >= 100");
  if (eps_grid.empty()) throw InputError("epsilon: grid is empty");
  for (const double e : eps_grid) {
    if (!(e > 0.0) || !std::isfinite(e)) throw InputError("epsilon: must be positive");
  }
  if (std::holds_alternative<Subtree>(region)) {
    throw InputError("region: mc_tail supports strip and generations regions only");
  }
  const auto cert = field_certificate(field, A);

  // Bounds first: inadmissible inputs fail before any sampling.
  std::vector<BoundBreakdown> bounds;
  for (const double eps : eps_grid) {
    if (const auto* s = std::get_if<Strip>(&region)) {
      StripProblem problem;
      problem.A = A;
      problem.L = s->level;
      problem.P = s->gens;
      problem.epsilon = eps;
      problem.C = cert.C;
      problem.sigma2 = cert.sigma2;
      problem.envelope = cert.envelope;
      const auto grid = options.grid ? *options.grid : ParamGrid::exhaustive(A, s->level);
      bounds.push_back(bernstein_bound(optimize_params(problem, grid)));
    } else {
      const auto& g = std::get<Generations>(region);
      ConcentrationInput in;
      in.A = A;
      in.L = g.count;
      in.epsilon = eps;
      in.C = cert.C;
      in.sigma2 = cert.sigma2;
      in.envelope = cert.envelope;
      in.eta = options.eta;
      in.D = options.D;
      bounds.push_back(concentration_bound(in));
    }
  }

  const FieldSampler sampler(field, A, region_nodes(region, A, options.cap));
  const bool averaged = std::holds_alternative<Generations>(region);
  const double scale = averaged ? 1.0 / static_cast<double>(sampler.nodes().size()) : 1.0;

  std::vector<double> stat(static_cast<std::size_t>(n_replicates));
  std::vector<char> bounded(stat.size(), 1);
  parallel_chunks(stat.size(), options.workers, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> scratch;
    for (std::size_t r = lo; r < hi; ++r) {
      scratch.resize(sampler.nodes().size());
      sampler.sample(r, scratch);
      double s = 0.0;
      for (const double z : scratch) {
        if (!(std::abs(z) <= field.C)) bounded[r] = 0;
        s += z;
      }
      stat[r] = std::abs(s) * scale;
    }
  });
  if (std::find(bounded.begin(), bounded.end(), 0) != bounded.end()) {
    throw std::logic_error("sampled field value exceeds its bound C");
  }

  std::vector<TailEstimate> out;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    TailEstimate t;
    t.epsilon = eps_grid[i];
    t.n_replicates = n_replicates;
    t.n_exceed = std::count_if(stat.begin(), stat.end(), [&](double x) { return x > t.epsilon; });
    t.p_hat = static_cast<double>(t.n_exceed) / static_cast<double>(n_replicates);
    t.ci_upper_99 = binomial_upper_99(n_replicates, t.n_exceed);
    t.bound = bounds[i];
    t.log_bound = bounds[i].log_total;
    t.certified = cert.envelope.certified();
    const double b = std::exp(t.log_bound);
    t.violated = t.certified && b < 1.0 && t.ci_upper_99 > b;
    out.push_back(t);
  }
  return out;
}

std::int64_t set_distance(const std::vector<NodeId>& a, const std::vector<NodeId>& b, int A) {
  if (a.empty() || b.empty()) throw InputError("set_distance: empty node set");
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& v : a) {
    for (const auto& w : b) best = std::min(best, tree_distance(v, w, A));
  }
  return best;
}

AlphaEstimate empirical_alpha_lower(const FieldSpec& field, int A, std::int64_t n,
                                    const AlphaSamplePlan& plan) {
  if (plan.pairs.empty()) throw InputError("sample plan: no event pairs");
  if (plan.replicates < 2) throw InputError("sample plan: need at least 2 replicates");
  for (std::size_t i = 0; i < plan.pairs.size(); ++i) {
    const auto d = set_distance(plan.pairs[i].left.nodes, plan.pairs[i].right.nodes, A);
    if (d < n) {
      throw InputError("sample plan: pair " + std::to_string(i) + " is at tree distance " +
                       std::to_string(d) + " < " + std::to_string(n));
    }
  }

  std::set<NodeId> all;
  for (const auto& p : plan.pairs) {
    all.insert(p.left.nodes.begin(), p.left.nodes.end());
    all.insert(p.right.nodes.begin(), p.right.nodes.end());
  }
  const FieldSampler sampler(field, A, {all.begin(), all.end()});
  const auto& nodes = sampler.nodes();
  auto indices = [&](const std::vector<NodeId>& vs) {
    std::vector<std::size_t> out;
    for (const auto& v : vs) {
      out.push_back(static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), v) -
                                             nodes.begin()));
    }
    return out;
  };
  struct Indexed {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
  };
  std::vector<Indexed> idx;
  for (const auto& p : plan.pairs) idx.push_back({indices(p.left.nodes), indices(p.right.nodes)});

  // cells[w][pair][ab] with ab = 2 * 1_A + 1_B.
  const unsigned workers = std::max(1u, plan.workers);
  std::vector<std::vector<std::array<std::int64_t, 4>>> cells(
      workers, std::vector<std::array<std::int64_t, 4>>(plan.pairs.size(), {0, 0, 0, 0}));
  const auto reps = static_cast<std::size_t>(plan.replicates);
  const std::size_t chunk = (reps + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      std::vector<double> z(nodes.size());
      const std::size_t lo = std::min(reps, w * chunk);
      const std::size_t hi = std::min(reps, lo + chunk);
      for (std::size_t r = lo; r < hi; ++r) {
        sampler.sample(plan.replicate_offset + r, z);
        for (std::size_t i = 0; i < idx.size(); ++i) {
          double sa = 0.0;
          double sb = 0.0;
          for (const auto k : idx[i].left) sa += z[k];
          for (const auto k : idx[i].right) sb += z[k];
          const int a = sa > plan.pairs[i].left.threshold ? 1 : 0;
          const int b = sb > plan.pairs[i].right.threshold ? 1 : 0;
          ++cells[w][i][2 * a + b];
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  AlphaEstimate best;
  bool first = true;
  const double R = static_cast<double>(plan.replicates);
  for (std::size_t i = 0; i < plan.pairs.size(); ++i) {
    std::array<double, 4> c{0, 0, 0, 0};
    for (unsigned w = 0; w < workers; ++w) {
      for (int k = 0; k < 4; ++k) c[k] += static_cast<double>(cells[w][i][k]);
    }
    const double pab = c[3] / R;
    const double pa = (c[2] + c[3]) / R;
    const double pb = (c[1] + c[3]) / R;
    const double dev = pab - pa * pb;
    // Influence function of pab - pa pb, evaluated per cell.
    double var = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double ia = k >> 1;
      const double ib = k & 1;
      const double psi = (ia * ib - pab) - pb * (ia - pa) - pa * (ib - pb);
      var += c[k] * psi * psi;
    }
    const double se = std::sqrt(var / R / R);
    if (first || std::abs(dev) > best.value) {
      best.value = std::abs(dev);
      best.std_error = se;
      best.argmax = i;
      first = false;
    }
  }
  return best;
}

}  // namespace treemix
