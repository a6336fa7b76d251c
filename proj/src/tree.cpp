#include "treemix/tree.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "treemix/error.hpp"

namespace treemix {

std::ostream& operator<<(std::ostream& os, const NodeId& v) {
  return os << '(' << v.j << ',' << v.k << ')';
}

void check_rate(int rate) {
  if (rate < 2) {
    throw InputError("rate A must be >= 2, got " + std::to_string(rate));
  }
}

std::optional<std::int64_t> checked_pow(std::int64_t base, std::int64_t exponent) {
  std::int64_t result = 1;
  for (std::int64_t i = 0; i < exponent; ++i) {
    if (__builtin_mul_overflow(result, base, &result)) return std::nullopt;
  }
  return result;
}

std::uint64_t geometric_count(int rate, std::int64_t gens) {
  check_rate(rate);
  std::uint64_t total = 0;
  std::uint64_t layer = 1;
  for (std::int64_t j = 0; j < gens; ++j) {
    if (__builtin_add_overflow(total, layer, &total)) {
      throw RangeError("node count overflows 64 bits");
    }
    if (j + 1 < gens && __builtin_mul_overflow(layer, static_cast<std::uint64_t>(rate), &layer)) {
      throw RangeError("node count overflows 64 bits");
    }
  }
  return total;
}

bool is_valid(const NodeId& v, int rate) {
  if (rate < 2 || v.j < 0 || v.k < 1) return false;
  auto width = checked_pow(rate, v.j);
  // A^j beyond int64 admits every representable k.
  return !width || v.k <= *width;
}

void validate(const NodeId& v, int rate) {
  check_rate(rate);
  std::ostringstream msg;
  if (v.j < 0) {
    msg << "node " << v << ": generation must be >= 0";
  } else if (v.k < 1) {
    msg << "node " << v << ": index must be >= 1";
  } else if (!is_valid(v, rate)) {
    msg << "node " << v << ": index exceeds A^j for A=" << rate;
  } else {
    return;
  }
  throw InputError(msg.str());
}

std::optional<NodeId> parent(const NodeId& v, int rate) {
  validate(v, rate);
  if (v.j == 0) return std::nullopt;
  return NodeId{v.j - 1, (v.k - 1) / rate + 1};
}

std::vector<NodeId> children(const NodeId& v, int rate) {
  validate(v, rate);
  std::int64_t first = 0;
  std::int64_t last = 0;
  if (v.j == std::numeric_limits<std::int64_t>::max() ||
      __builtin_mul_overflow(v.k - 1, static_cast<std::int64_t>(rate), &first) ||
      __builtin_mul_overflow(v.k, static_cast<std::int64_t>(rate), &last)) {
    throw RangeError("children of node overflow 64-bit indices");
  }
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(rate));
  for (std::int64_t k = first + 1; k <= last; ++k) out.push_back({v.j + 1, k});
  return out;
}

namespace {

// Unchecked parent step; callers have validated.
NodeId up(const NodeId& v, int rate) { return {v.j - 1, (v.k - 1) / rate + 1}; }

}  // namespace

NodeId ancestor_at(const NodeId& v, std::int64_t generation, int rate) {
  validate(v, rate);
  if (generation < 0 || generation > v.j) {
    throw InputError("ancestor generation out of range");
  }
  NodeId cur = v;
  while (cur.j > generation) cur = up(cur, rate);
  return cur;
}

NodeId lowest_common_ancestor(const NodeId& v, const NodeId& w, int rate) {
  validate(v, rate);
  validate(w, rate);
  NodeId a = v;
  NodeId b = w;
  while (a.j > b.j) a = up(a, rate);
  while (b.j > a.j) b = up(b, rate);
  while (a.k != b.k) {
    a = up(a, rate);
    b = up(b, rate);
  }
  return a;
}

std::int64_t tree_distance(const NodeId& v, const NodeId& w, int rate) {
  const NodeId lca = lowest_common_ancestor(v, w, rate);
  return (v.j - lca.j) + (w.j - lca.j);
}

GraphSpec::GraphSpec(int rate, std::vector<Edge> extra_edges)
    : rate_(rate), extra_(std::move(extra_edges)) {
  check_rate(rate_);
  for (std::size_t i = 0; i < extra_.size(); ++i) {
    const auto& e = extra_[i];
    validate(e.a, rate_);
    validate(e.b, rate_);
    std::ostringstream msg;
    msg << "extra edge " << i << " " << e.a << "-" << e.b;
    if (e.a == e.b) throw InputError(msg.str() + ": self-loop");
    const auto d = tree_distance(e.a, e.b, rate_);
    if (d == 1) throw InputError(msg.str() + ": duplicates a tree edge");
    span_ = std::max(span_, d);
  }
}

std::vector<NodeId> GraphSpec::extra_neighbors(const NodeId& v) const {
  std::vector<NodeId> out;
  for (const auto& e : extra_) {
    if (e.a == v) out.push_back(e.b);
    if (e.b == v) out.push_back(e.a);
  }
  return out;
}

GraphSpec parse_edge_list(std::istream& in, int rate) {
  std::vector<Edge> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    std::int64_t vals[4];
    bool ok = tokens.size() == 4;
    for (std::size_t i = 0; ok && i < 4; ++i) {
      std::size_t used = 0;
      try {
        vals[i] = std::stoll(tokens[i], &used);
      } catch (const std::exception&) {
        ok = false;
      }
      ok = ok && used == tokens[i].size();
    }
    if (!ok) {
      throw InputError("edge list line " + std::to_string(lineno) +
                       ": expected four integers \"j k j' k'\"");
    }
    edges.push_back({{vals[0], vals[1]}, {vals[2], vals[3]}});
  }
  return GraphSpec(rate, std::move(edges));
}

std::int64_t graph_distance(const GraphSpec& g, const NodeId& v, const NodeId& w) {
  const int rate = g.rate();
  validate(v, rate);
  validate(w, rate);
  if (v == w) return 0;

  std::vector<NodeId> keys{v, w};
  for (const auto& e : g.extra_edges()) {
    keys.push_back(e.a);
    keys.push_back(e.b);
  }
  std::sort(keys.begin() + 2, keys.end());
  keys.erase(std::unique(keys.begin() + 2, keys.end()), keys.end());
  keys.erase(std::remove_if(keys.begin() + 2, keys.end(),
                            [&](const NodeId& x) { return x == v || x == w; }),
             keys.end());

  const std::size_t n = keys.size();
  auto index_of = [&](const NodeId& x) {
    return static_cast<std::size_t>(std::find(keys.begin(), keys.end(), x) - keys.begin());
  };
  std::vector<std::vector<std::int64_t>> weight(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      weight[a][b] = weight[b][a] = tree_distance(keys[a], keys[b], rate);
    }
  }
  for (const auto& e : g.extra_edges()) {
    const auto a = index_of(e.a);
    const auto b = index_of(e.b);
    weight[a][b] = weight[b][a] = 1;
  }

  // Dense Dijkstra; n is at most 2 + 2|extra edges|.
  constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(n, kInf);
  std::vector<bool> done(n, false);
  dist[0] = 0;
  for (std::size_t iter = 0; iter < n; ++iter) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && (best == n || dist[i] < dist[best])) best = i;
    }
    if (best == 1) break;
    done[best] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i]) dist[i] = std::min(dist[i], dist[best] + weight[best][i]);
    }
  }
  return dist[1];
}

std::string describe(const Region& r) {
  std::ostringstream os;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Subtree>) {
          os << "subtree(" << x.root.j << "," << x.root.k << "," << x.gens << ")";
        } else if constexpr (std::is_same_v<T, Strip>) {
          os << "strip(" << x.level << "," << x.gens << ")";
        } else {
          os << "generations(" << x.count << ")";
        }
      },
      r);
  return os.str();
}

namespace {

void check_region(const Region& r, int rate) {
  check_rate(rate);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Subtree>) {
          validate(x.root, rate);
          if (x.gens < 1) throw InputError("subtree: P must be >= 1");
        } else if constexpr (std::is_same_v<T, Strip>) {
          if (x.level < 0) throw InputError("strip: L must be >= 0");
          if (x.gens < 1) throw InputError("strip: P must be >= 1");
        } else {
          if (x.count < 0) throw InputError("generations: L must be >= 0");
        }
      },
      r);
}

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw RangeError("node count overflows 64 bits");
  return out;
}

}  // namespace

std::uint64_t region_size(const Region& r, int rate) {
  check_region(r, rate);
  return std::visit(
      [&](const auto& x) -> std::uint64_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Subtree>) {
          return geometric_count(rate, x.gens);
        } else if constexpr (std::is_same_v<T, Strip>) {
          auto width = checked_pow(rate, x.level);
          if (!width) throw RangeError("node count overflows 64 bits");
          return mul_checked(static_cast<std::uint64_t>(*width), geometric_count(rate, x.gens));
        } else {
          return geometric_count(rate, x.count);
        }
      },
      r);
}

std::vector<NodeId> region_nodes(const Region& r, int rate, std::uint64_t cap) {
  std::uint64_t count = 0;
  try {
    count = region_size(r, rate);
  } catch (const RangeError&) {
    throw CapacityError("region " + describe(r) + " exceeds the node cap");
  }
  if (count > cap) {
    throw CapacityError("region " + describe(r) + " has " + std::to_string(count) +
                        " nodes, cap is " + std::to_string(cap));
  }

  // Every region is a run of generations, each contributing one contiguous
  // index range [lo, hi].
  std::int64_t first_gen = 0;
  std::int64_t gens = 0;
  std::int64_t root_lo = 1;  // index range at the first generation
  std::int64_t root_hi = 1;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Subtree>) {
          first_gen = x.root.j;
          gens = x.gens;
          root_lo = root_hi = x.root.k;
        } else if constexpr (std::is_same_v<T, Strip>) {
          first_gen = x.level;
          gens = x.gens;
          root_hi = *checked_pow(rate, x.level);
        } else {
          gens = x.count;
        }
      },
      r);

  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(count));
  std::int64_t lo = root_lo;
  std::int64_t hi = root_hi;
  for (std::int64_t g = 0; g < gens; ++g) {
    for (std::int64_t k = lo; k <= hi; ++k) out.push_back({first_gen + g, k});
    if (g + 1 == gens) break;
    lo = (lo - 1) * rate + 1;
    hi = hi * rate;
  }
  return out;
}

}  // namespace treemix
