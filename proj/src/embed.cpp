#include "treemix/embed.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "treemix/error.hpp"

namespace treemix {

std::int64_t chebyshev(const LatticePoint& a, const LatticePoint& b) {
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

LatticeMap::LatticeMap(int rate, int dimension, std::map<NodeId, LatticePoint> points)
    : rate_(rate), dimension_(dimension), points_(std::move(points)) {
  check_rate(rate_);
  if (dimension_ < 1) throw InputError("lattice map: dimension must be >= 1");
  if (points_.empty()) throw InputError("lattice map: empty");
  std::set<LatticePoint> images;
  for (const auto& [v, x] : points_) {
    validate(v, rate_);
    if (static_cast<int>(x.size()) != dimension_) {
      std::ostringstream msg;
      msg << "lattice map: node " << v << " has " << x.size() << " coordinates, expected "
          << dimension_;
      throw InputError(msg.str());
    }
    if (!images.insert(x).second) {
      std::ostringstream msg;
      msg << "lattice map: not injective (node " << v << " reuses an image point)";
      throw InputError(msg.str());
    }
    depth_ = std::max(depth_, v.j);
  }
  if (points_.size() != geometric_count(rate_, depth_ + 1)) {
    throw InputError("lattice map: domain is not generation-closed up to depth " +
                     std::to_string(depth_));
  }
}

LatticeMap LatticeMap::parse(std::istream& in, int rate) {
  std::map<NodeId, LatticePoint> points;
  int dimension = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::int64_t> vals;
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      std::int64_t x = 0;
      try {
        x = std::stoll(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        throw InputError("lattice map line " + std::to_string(lineno) + ": bad integer '" + tok +
                         "'");
      }
      vals.push_back(x);
    }
    if (vals.empty()) continue;
    const int n = static_cast<int>(vals.size()) - 2;
    if (n < 1 || (dimension >= 0 && n != dimension)) {
      throw InputError("lattice map line " + std::to_string(lineno) +
                       ": expected \"j k x1 ... xN\" with a consistent N");
    }
    dimension = n;
    const NodeId v{vals[0], vals[1]};
    if (!points.emplace(v, LatticePoint(vals.begin() + 2, vals.end())).second) {
      throw InputError("lattice map line " + std::to_string(lineno) + ": node listed twice");
    }
  }
  return LatticeMap(rate, dimension, std::move(points));
}

LatticeMap LatticeMap::row_layout(int rate, std::int64_t depth, int dimension) {
  if (dimension < 1) throw InputError("row layout: dimension must be >= 1");
  std::map<NodeId, LatticePoint> points;
  std::int64_t order = 0;
  for (const auto& v : nodes_to_depth(rate, depth)) {
    LatticePoint x(static_cast<std::size_t>(dimension), 0);
    if (dimension == 1) {
      x[0] = order;
    } else {
      x[0] = v.k;
      x[1] = v.j;
    }
    ++order;
    points.emplace(v, std::move(x));
  }
  return LatticeMap(rate, dimension, std::move(points));
}

const LatticePoint* LatticeMap::find(const NodeId& v) const {
  auto it = points_.find(v);
  return it == points_.end() ? nullptr : &it->second;
}

double distortion_constant(const GraphSpec& g, const LatticeMap& m) {
  if (g.rate() != m.rate()) throw InputError("distortion: graph and map rates differ");
  std::int64_t worst = 0;
  for (const auto& [v, x] : m.points()) {
    if (v.j == 0) continue;
    worst = std::max(worst, chebyshev(x, *m.find(*parent(v, g.rate()))));
  }
  for (const auto& e : g.extra_edges()) {
    const auto* a = m.find(e.a);
    const auto* b = m.find(e.b);
    if (!a || !b) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, chebyshev(*a, *b));
  }
  return static_cast<double>(worst);
}

std::optional<std::pair<NodeId, NodeId>> lipschitz_check(
    const GraphSpec& g, const LatticeMap& m, double C,
    std::vector<std::pair<NodeId, NodeId>> pairs) {
  if (!(C >= 0.0)) throw InputError("lipschitz: constant must be >= 0");
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [v, w] : pairs) {
    const auto* a = m.find(v);
    const auto* b = m.find(w);
    if (!a || !b) {
      std::ostringstream msg;
      msg << "lipschitz: pair " << v << "," << w << " is outside the mapped depth";
      throw InputError(msg.str());
    }
    if (static_cast<double>(chebyshev(*a, *b)) >
        C * static_cast<double>(graph_distance(g, v, w))) {
      return std::make_pair(v, w);
    }
  }
  return std::nullopt;
}

bool pigeonhole_gate(int A, std::int64_t k, double C, int dimension) {
  const double lhs = static_cast<double>(k) * std::log(static_cast<double>(A));
  const double rhs =
      static_cast<double>(dimension) * std::log(2.0 * std::ceil(C) * static_cast<double>(k) + 1.0);
  return lhs > rhs;
}

std::optional<RefutationWitness> refutation_witness(int A, const LatticeMap& m, double C,
                                                    std::int64_t k_max, std::uint64_t cap) {
  check_rate(A);
  if (A != m.rate()) throw InputError("refutation: map rate differs from A");
  if (!(C >= 0.0) || !std::isfinite(C)) throw InputError("refutation: C must be finite, >= 0");
  if (k_max < 0) throw InputError("refutation: k_max must be >= 0");
  if (k_max > m.depth()) {
    throw InputError("refutation: map covers depth " + std::to_string(m.depth()) +
                     " < k_max = " + std::to_string(k_max));
  }
  for (std::int64_t k = 1; k <= k_max; ++k) {
    if (!pigeonhole_gate(A, k, C, m.dimension())) continue;
    const auto width = checked_pow(A, k);
    if (!width || static_cast<std::uint64_t>(*width) > cap) {
      throw CapacityError("refutation: generation " + std::to_string(k) + " exceeds the node cap");
    }
    std::vector<const LatticePoint*> images;
    images.reserve(static_cast<std::size_t>(*width));
    for (std::int64_t i = 1; i <= *width; ++i) images.push_back(m.find({k, i}));
    for (std::int64_t a = 0; a < *width; ++a) {
      for (std::int64_t b = a + 1; b < *width; ++b) {
        const auto gap = chebyshev(*images[a], *images[b]);
        // Distinct nodes of one generation are at d_T >= 2, so narrow gaps never qualify.
        if (static_cast<double>(gap) <= C * 2.0) continue;
        const NodeId v{k, a + 1};
        const NodeId w{k, b + 1};
        const auto d = tree_distance(v, w, A);
        if (static_cast<double>(gap) > C * static_cast<double>(d)) {
          return RefutationWitness{k, v, w, gap, d};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace treemix
