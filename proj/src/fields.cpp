#include "treemix/fields.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "treemix/error.hpp"
#include "treemix/rng.hpp"

namespace treemix {

namespace {

enum Stream : std::uint64_t { kIndependent = 0, kBallInnovation = 1, kArInnovation = 2 };

constexpr std::size_t kArTableLength = 64;

}  // namespace

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::independent:
      return "independent";
    case FieldKind::m_dependent:
      return "m_dependent";
    case FieldKind::branching_ar:
      return "branching_ar";
  }
  return "unknown";
}

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "independent") return FieldKind::independent;
  if (s == "m_dependent") return FieldKind::m_dependent;
  if (s == "branching_ar") return FieldKind::branching_ar;
  throw InputError("kind: unknown field kind '" + s + "'");
}

void FieldSpec::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw InputError("C: field bound must be positive");
  if (kind == FieldKind::m_dependent && m < 1) throw InputError("m: must be >= 1");
  if (kind == FieldKind::branching_ar && !(std::abs(a) < 1.0)) {
    throw InputError("a: branching_ar coefficient must satisfy |a| < 1");
  }
}

FieldCertificate field_certificate(const FieldSpec& spec, int A) {
  spec.validate();
  check_rate(A);
  FieldCertificate cert;
  cert.C = spec.C;
  const double uniform_var = spec.C * spec.C / 3.0;
  switch (spec.kind) {
    case FieldKind::independent:
      cert.sigma2 = uniform_var;
      cert.envelope = MixingEnvelope::zero(Provenance::exact);
      break;
    case FieldKind::m_dependent: {
      // The root has the smallest ball, hence the largest variance.
      const double smallest_ball = static_cast<double>(geometric_count(A, spec.m + 1));
      cert.sigma2 = uniform_var / smallest_ball;
      cert.envelope = MixingEnvelope::m_dependent(spec.m, Provenance::exact);
      break;
    }
    case FieldKind::branching_ar: {
      // a^2 + (1 - |a|)^2 <= 1 keeps every generation's variance below C^2/3.
      cert.sigma2 = uniform_var;
      std::vector<double> values(kArTableLength);
      for (std::size_t n = 1; n <= kArTableLength; ++n) {
        values[n - 1] = std::min(0.25, std::pow(std::abs(spec.a), static_cast<double>(n)));
      }
      cert.envelope = MixingEnvelope::table(std::move(values), Provenance::heuristic);
      break;
    }
  }
  return cert;
}

std::vector<NodeId> tree_ball(const NodeId& v, std::int64_t radius, int A) {
  validate(v, A);
  std::set<NodeId> seen{v};
  std::vector<NodeId> frontier{v};
  for (std::int64_t r = 0; r < radius; ++r) {
    std::vector<NodeId> next;
    for (const auto& u : frontier) {
      if (auto p = parent(u, A); p && seen.insert(*p).second) next.push_back(*p);
      for (const auto& c : children(u, A)) {
        if (seen.insert(c).second) next.push_back(c);
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

FieldSampler::FieldSampler(FieldSpec spec, int A, std::vector<NodeId> nodes)
    : spec_(spec), A_(A), nodes_(std::move(nodes)) {
  spec_.validate();
  check_rate(A_);
  for (const auto& v : nodes_) validate(v, A_);

  if (spec_.kind == FieldKind::m_dependent) {
    ball_start_.reserve(nodes_.size() + 1);
    ball_start_.push_back(0);
    for (const auto& v : nodes_) {
      const auto ball = tree_ball(v, spec_.m, A_);
      ball_nodes_.insert(ball_nodes_.end(), ball.begin(), ball.end());
      ball_start_.push_back(ball_nodes_.size());
    }
  } else if (spec_.kind == FieldKind::branching_ar) {
    std::set<NodeId> closure;
    for (const auto& v : nodes_) {
      NodeId cur = v;
      while (closure.insert(cur).second && cur.j > 0) cur = *parent(cur, A_);
    }
    closure_.assign(closure.begin(), closure.end());
    std::map<NodeId, std::int64_t> index;
    for (std::size_t i = 0; i < closure_.size(); ++i) {
      index[closure_[i]] = static_cast<std::int64_t>(i);
    }
    closure_parent_.resize(closure_.size(), -1);
    for (std::size_t i = 0; i < closure_.size(); ++i) {
      if (closure_[i].j > 0) closure_parent_[i] = index.at(*parent(closure_[i], A_));
    }
    closure_index_.reserve(nodes_.size());
    for (const auto& v : nodes_) closure_index_.push_back(static_cast<std::size_t>(index.at(v)));
  }
}

double FieldSampler::innovation(std::uint64_t replicate, const NodeId& v) const {
  return rng::uniform_pm1(spec_.master_seed, replicate, v, kArInnovation);
}

double FieldSampler::value_at(std::size_t i, std::uint64_t replicate) const {
  const NodeId& v = nodes_.at(i);
  switch (spec_.kind) {
    case FieldKind::independent:
      return spec_.C * rng::uniform_pm1(spec_.master_seed, replicate, v, kIndependent);
    case FieldKind::m_dependent: {
      double acc = 0.0;
      for (std::size_t b = ball_start_[i]; b < ball_start_[i + 1]; ++b) {
        acc += rng::uniform_pm1(spec_.master_seed, replicate, ball_nodes_[b], kBallInnovation);
      }
      return spec_.C * (acc / static_cast<double>(ball_start_[i + 1] - ball_start_[i]));
    }
    case FieldKind::branching_ar: {
      std::vector<NodeId> chain;
      for (NodeId cur = v;; cur = *parent(cur, A_)) {
        chain.push_back(cur);
        if (cur.j == 0) break;
      }
      const double damp = 1.0 - std::abs(spec_.a);
      double z = spec_.C * innovation(replicate, chain.back());
      for (auto it = chain.rbegin() + 1; it != chain.rend(); ++it) {
        z = spec_.a * z + damp * (spec_.C * innovation(replicate, *it));
      }
      return z;
    }
  }
  return 0.0;
}

void FieldSampler::sample(std::uint64_t replicate, std::span<double> out) const {
  if (out.size() != nodes_.size()) throw InputError("sample: output size mismatch");
  if (spec_.kind != FieldKind::branching_ar) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = value_at(i, replicate);
    return;
  }
  // Parents precede children in closure_, so one forward pass suffices.
  const double damp = 1.0 - std::abs(spec_.a);
  std::vector<double> z(closure_.size());
  for (std::size_t i = 0; i < closure_.size(); ++i) {
    const double u = spec_.C * innovation(replicate, closure_[i]);
    z[i] = closure_parent_[i] < 0
               ? u
               : spec_.a * z[static_cast<std::size_t>(closure_parent_[i])] + damp * u;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = z[closure_index_[i]];
}

double FieldSampler::sample_sum(std::uint64_t replicate, std::vector<double>& scratch) const {
  scratch.resize(nodes_.size());
  sample(replicate, scratch);
  double s = 0.0;
  for (const double x : scratch) s += x;
  return s;
}

std::string SampledField::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "j,k,value\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    os << nodes[i].j << ',' << nodes[i].k << ',' << values[i] << '\n';
  }
  return os.str();
}

SampledField sample_field(const FieldSpec& spec, const Region& region, int A,
                          std::uint64_t replicate, unsigned workers, std::uint64_t cap) {
  FieldSampler sampler(spec, A, region_nodes(region, A, cap));
  SampledField out;
  out.nodes = sampler.nodes();
  out.values.resize(out.nodes.size());
  const std::size_t n = out.nodes.size();
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    sampler.sample(replicate, out.values);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(n, w * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out.values[i] = sampler.value_at(i, replicate);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace treemix
