#pragma once

// Embeddings of (finite truncations of) rate-A graphs into Z^N under the
// Chebyshev metric: distortion constants, the Lipschitz criterion, and
// pigeonhole witnesses showing a given map with a given constant cannot be
// a mixing embedding.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "treemix/envelope.hpp"
#include "treemix/tree.hpp"

namespace treemix {

using LatticePoint = std::vector<std::int64_t>;

std::int64_t chebyshev(const LatticePoint& a, const LatticePoint& b);

// Injective assignment of every node in generations 0..depth to Z^N.
class LatticeMap {
 public:
  LatticeMap(int rate, int dimension, std::map<NodeId, LatticePoint> points);

  /// Lines "j k x1 ... xN"; '#' starts a comment.
  static LatticeMap parse(std::istream& in, int rate);

  /// Generation j at height j, index k at column k (N >= 2, extra
  /// coordinates zero). For N = 1 nodes are laid out in breadth-first order.
  static LatticeMap row_layout(int rate, std::int64_t depth, int dimension);

  int rate() const { return rate_; }
  int dimension() const { return dimension_; }
  std::int64_t depth() const { return depth_; }
  const LatticePoint* find(const NodeId& v) const;
  const std::map<NodeId, LatticePoint>& points() const { return points_; }

 private:
  int rate_;
  int dimension_;
  std::int64_t depth_ = 0;
  std::map<NodeId, LatticePoint> points_;
};

/// Max Chebyshev length of an image edge: tree edges within the map's depth
/// plus the extra edges. +infinity when an extra edge leaves the map.
double distortion_constant(const GraphSpec& g, const LatticeMap& m);

/// First pair (in lexicographic order) with |m(v) - m(w)|_inf > C d_G(v, w),
/// or nullopt when the inequality holds on every pair.
std::optional<std::pair<NodeId, NodeId>> lipschitz_check(
    const GraphSpec& g, const LatticeMap& m, double C,
    std::vector<std::pair<NodeId, NodeId>> pairs);

struct RefutationWitness {
  std::int64_t generation = 0;
  NodeId v;
  NodeId w;
  std::int64_t image_distance = 0;
  std::int64_t tree_distance = 0;
};

/// Scans generations k <= k_max with A^k > (2 ceil(C) k + 1)^N for a
/// same-generation pair whose image distance exceeds C d_T(v, w).
std::optional<RefutationWitness> refutation_witness(int A, const LatticeMap& m, double C,
                                                    std::int64_t k_max,
                                                    std::uint64_t cap = kDefaultNodeCap);

/// Whether generation k passes the pigeonhole gate A^k > (2 ceil(C) k + 1)^N.
bool pigeonhole_gate(int A, std::int64_t k, double C, int dimension);

}  // namespace treemix
