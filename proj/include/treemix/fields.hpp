#pragma once

// Bounded, centered random fields on a rate-A tree with controlled dependence.
//
//   independent     Z_v iid uniform on [-C, C]
//   m_dependent     Z_v = C * mean of iid uniform[-1, 1] innovations over the
//                   tree ball of radius m around v; exactly independent beyond
//                   distance 2m
//   branching_ar    Z_root uniform on [-C, C],
//                   Z_child = a Z_parent + (1 - |a|) U,  U uniform on [-C, C]
//
// Values are a pure function of (master_seed, replicate, node).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "treemix/envelope.hpp"
#include "treemix/tree.hpp"

namespace treemix {

enum class FieldKind { independent, m_dependent, branching_ar };

std::string to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

struct FieldSpec {
  FieldKind kind = FieldKind::independent;
  double C = 1.0;
  std::int64_t m = 1;  // m_dependent radius
  double a = 0.5;      // branching_ar coefficient, |a| < 1
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct FieldCertificate {
  double C = 1.0;
  double sigma2 = 1.0;
  MixingEnvelope envelope = MixingEnvelope::zero();
};

/// Bound, variance bound and mixing envelope the field provably satisfies;
/// branching_ar gets a heuristic-flagged table (alpha(n) ~ |a|^n).
FieldCertificate field_certificate(const FieldSpec& spec, int A);

// Precomputed per-node structure for repeated sampling of one node set.
class FieldSampler {
 public:
  FieldSampler(FieldSpec spec, int A, std::vector<NodeId> nodes);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const FieldSpec& spec() const { return spec_; }

  /// Fills out[i] with Z at nodes()[i]. out.size() must equal nodes().size().
  void sample(std::uint64_t replicate, std::span<double> out) const;

  /// Z at nodes()[i], computed on its own; bit-identical to sample().
  double value_at(std::size_t i, std::uint64_t replicate) const;

  /// Sum of the field over all nodes.
  double sample_sum(std::uint64_t replicate, std::vector<double>& scratch) const;

 private:
  double innovation(std::uint64_t replicate, const NodeId& v) const;

  FieldSpec spec_;
  int A_;
  std::vector<NodeId> nodes_;
  // m_dependent: CSR lists of ball members per node.
  std::vector<std::size_t> ball_start_;
  std::vector<NodeId> ball_nodes_;
  // branching_ar: ancestor closure in generation-major order.
  std::vector<NodeId> closure_;
  std::vector<std::int64_t> closure_parent_;
  std::vector<std::size_t> closure_index_;  // nodes_[i] == closure_[closure_index_[i]]
};

struct SampledField {
  std::vector<NodeId> nodes;
  std::vector<double> values;

  /// CSV "j,k,value" with a header row.
  std::string to_csv() const;
};

/// One replicate of the field on a region. `workers` partitions the nodes;
/// the result does not depend on it.
SampledField sample_field(const FieldSpec& spec, const Region& region, int A,
                          std::uint64_t replicate, unsigned workers = 1,
                          std::uint64_t cap = kDefaultNodeCap);

/// Nodes within tree distance `radius` of v, in generation-major order.
std::vector<NodeId> tree_ball(const NodeId& v, std::int64_t radius, int A);

}  // namespace treemix
