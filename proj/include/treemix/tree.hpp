#pragma once

// Geometry of rooted trees in which every node has exactly A children, and
// of such trees extended by a finite set of bounded-span extra edges.
//
// Nodes are addressed as (j, k): generation j >= 0 and index 1 <= k <= A^j.
// The root is (0, 1); the children of (j, k) are
// (j + 1, A(k - 1) + 1), ..., (j + 1, Ak).

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace treemix {

inline constexpr std::uint64_t kDefaultNodeCap = std::uint64_t{1} << 26;

struct NodeId {
  std::int64_t j = 0;
  std::int64_t k = 1;

  friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

std::ostream& operator<<(std::ostream& os, const NodeId& v);

struct NodeIdHash {
  std::size_t operator()(const NodeId& v) const noexcept {
    auto h = static_cast<std::uint64_t>(v.j) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(v.k) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// Throws InputError unless rate >= 2.
void check_rate(int rate);

/// A^e, or nullopt when it does not fit in a signed 64-bit integer.
std::optional<std::int64_t> checked_pow(std::int64_t base, std::int64_t exponent);

/// Number of nodes in generations [0, gens): (A^gens - 1)/(A - 1).
/// Throws RangeError on overflow.
std::uint64_t geometric_count(int rate, std::int64_t gens);

bool is_valid(const NodeId& v, int rate);

/// Throws InputError naming the violated constraint.
void validate(const NodeId& v, int rate);

/// (j - 1, ceil(k / A)); nullopt at the root.
std::optional<NodeId> parent(const NodeId& v, int rate);

/// The A children in increasing index order. RangeError on index overflow.
std::vector<NodeId> children(const NodeId& v, int rate);

/// Ancestor of v in generation `generation` (<= v.j).
NodeId ancestor_at(const NodeId& v, std::int64_t generation, int rate);

NodeId lowest_common_ancestor(const NodeId& v, const NodeId& w, int rate);

/// Number of tree edges between v and w. Computed by lifting to the LCA,
/// so nodes deep in the tree are handled without materializing anything.
std::int64_t tree_distance(const NodeId& v, const NodeId& w, int rate);

struct Edge {
  NodeId a;
  NodeId b;
};

// A rate-A tree plus a finite set of extra edges of bounded tree span.
class GraphSpec {
 public:
  explicit GraphSpec(int rate, std::vector<Edge> extra_edges = {});

  int rate() const { return rate_; }
  const std::vector<Edge>& extra_edges() const { return extra_; }
  /// Max tree distance spanned by an extra edge; 0 when there are none.
  std::int64_t span() const { return span_; }

  /// Extra-edge neighbours of v (tree neighbours not included).
  std::vector<NodeId> extra_neighbors(const NodeId& v) const;

 private:
  int rate_;
  std::vector<Edge> extra_;
  std::int64_t span_ = 0;
};

/// Parses "j k j' k'" lines; '#' starts a comment. Line numbers appear in errors.
GraphSpec parse_edge_list(std::istream& in, int rate);

/// Shortest path length using tree edges and the extra edges.
///
/// Any shortest path alternates tree segments with extra-edge hops, and a
/// tree segment between two nodes costs exactly their tree distance. The
/// search therefore runs Dijkstra on the small complete graph over
/// {v, w} and the extra-edge endpoints, with tree distances as weights.
std::int64_t graph_distance(const GraphSpec& g, const NodeId& v, const NodeId& w);

struct Subtree {
  NodeId root;
  std::int64_t gens = 1;  // P
};

// Union of the depth-`gens` subtrees rooted at every generation-`level` node.
struct Strip {
  std::int64_t level = 0;  // L
  std::int64_t gens = 1;   // P
};

// Generations 0 .. count - 1.
struct Generations {
  std::int64_t count = 0;  // L
};

using Region = std::variant<Subtree, Strip, Generations>;

std::string describe(const Region& r);

/// Closed-form node count. RangeError on overflow.
std::uint64_t region_size(const Region& r, int rate);

/// Nodes of r, generation-major and index-ascending within a generation.
/// CapacityError when the count exceeds `cap`.
std::vector<NodeId> region_nodes(const Region& r, int rate,
                                 std::uint64_t cap = kDefaultNodeCap);

/// Generation-closed node list of the first `depth + 1` generations.
inline std::vector<NodeId> nodes_to_depth(int rate, std::int64_t depth,
                                          std::uint64_t cap = kDefaultNodeCap) {
  return region_nodes(Generations{depth + 1}, rate, cap);
}

}  // namespace treemix
