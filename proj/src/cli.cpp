#include "treemix/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "treemix/config.hpp"
#include "treemix/embed.hpp"
#include "treemix/error.hpp"
#include "treemix/paircount.hpp"
#include "treemix/report.hpp"

namespace treemix::cli {

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string out_path;
  std::string format;
};

void add_common(CLI::App* sub, CommonFlags& flags, const std::string& default_format) {
  flags.format = default_format;
  sub->add_option("--config", flags.config_path, "key = value configuration file");
  sub->add_option("--seed", flags.seed, "master seed");
  sub->add_option("--workers", flags.workers, "Monte Carlo worker threads")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", flags.out_path, "write results to PATH instead of stdout");
  sub->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

// Config file (if any) plus "--key value" overrides left over by CLI11.
KeyValues load_config(const CommonFlags& flags, const std::vector<std::string>& extras,
                      const std::set<std::string>& allowed) {
  KeyValues kv;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw InputError("cannot open config file '" + flags.config_path + "'");
    kv = KeyValues::parse(in, flags.config_path);
  }
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const auto& flag = extras[i];
    if (flag.rfind("--", 0) != 0) throw InputError("unexpected argument '" + flag + "'");
    auto key = flag.substr(2);
    std::string value;
    if (auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.erase(eq);
    } else {
      if (i + 1 >= extras.size()) throw InputError("flag '" + flag + "' needs a value");
      value = extras[++i];
    }
    if (!allowed.count(key)) throw InputError("unknown flag '--" + key + "'");
    kv.set(key, value);
  }
  kv.require_known(allowed);
  return kv;
}

void require_json(const CommonFlags& flags, const std::string& command) {
  if (flags.format != "json") {
    throw InputError("--format: " + command + " only emits json");
  }
}

double parse_exponent(const std::string& s, const char* name) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError(std::string("--") + name + ": expected a number or 'inf', got '" + s + "'");
}

int count_pairs_cmd(int rate, std::int64_t gens, std::optional<std::int64_t> dist,
                    const CommonFlags& flags, std::ostream& out) {
  check_rate(rate);
  if (gens < 1) throw InputError("--gens: P must be >= 1");
  std::int64_t lo = 1;
  std::int64_t hi = 2 * (gens - 1);
  if (dist) {
    if (*dist < 1) throw InputError("--dist: L must be >= 1");
    lo = hi = *dist;
  }
  if (flags.format == "csv") out << "A,P,L,N\n";
  for (std::int64_t L = lo; L <= hi; ++L) {
    const auto n = count_pairs_closed(rate, gens, L);
    if (flags.format == "csv") {
      out << rate << ',' << gens << ',' << L << ',' << n.get_str() << '\n';
    } else {
      Json j;
      j["A"] = rate;
      j["P"] = gens;
      j["L"] = L;
      j["N"] = n.get_str();
      out << json_line(j);
    }
  }
  return kOk;
}

int mc_tail_cmd(const KeyValues& kv, const CommonFlags& flags,
                std::optional<std::int64_t> replicates, std::ostream& out) {
  auto field = field_spec_from(kv);
  if (flags.seed) field.master_seed = *flags.seed;
  const auto region = region_from(kv);
  const int A = static_cast<int>(kv.integer("A"));
  McTailOptions options;
  options.workers = flags.workers;
  options.eta = kv.real_or("eta", 0.5);
  options.D = kv.real_or("D", 1.0);
  const auto n = replicates ? *replicates : kv.integer_or("n_replicates", 10000);
  const auto results = mc_tail(field, region, A, kv.real_list("epsilon"), n, options);
  bool violated = false;
  for (const auto& t : results) {
    out << json_line(to_json(t));
    violated = violated || t.violated;
  }
  return violated ? kBoundViolation : kOk;
}

int davydov_cmd(const std::string& input, std::int64_t random_count, const CommonFlags& flags,
                double p, double q, double r, std::ostream& out) {
  std::vector<FiniteSpace> spaces;
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw InputError("cannot open '" + input + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      Json j;
      try {
        j = Json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + input + "': " + e.what());
      }
      spaces.push_back(finite_space_from_json(j));
    }
  }
  if (random_count > 0) {
    std::mt19937_64 gen(flags.seed.value_or(0));
    for (std::int64_t i = 0; i < random_count; ++i) spaces.push_back(random_finite_space(gen));
  }
  if (spaces.empty()) throw InputError("verify-davydov: give --input PATH or --random N");
  bool violated = false;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const auto res = davydov_check(spaces[i], p, q, r);
    Json j;
    j["index"] = i;
    const Json fields = to_json(res);
    for (const auto& [k, v] : fields.items()) j[k] = v;
    out << json_line(j);
    violated = violated || !res.holds;
  }
  return violated ? kBoundViolation : kOk;
}

struct EmbeddingFlags {
  int rate = 2;
  std::string map_path;
  std::string edges_path;
  std::int64_t depth = -1;
  int dimension = 2;
  std::optional<double> constant;
  std::optional<std::int64_t> k_max;
  std::int64_t pairs = 1000;
};

int embedding_cmd(const EmbeddingFlags& e, const CommonFlags& flags, std::ostream& out) {
  GraphSpec graph(e.rate);
  if (!e.edges_path.empty()) {
    std::ifstream in(e.edges_path);
    if (!in) throw InputError("cannot open '" + e.edges_path + "'");
    graph = parse_edge_list(in, e.rate);
  }
  std::optional<LatticeMap> map;
  if (!e.map_path.empty()) {
    std::ifstream in(e.map_path);
    if (!in) throw InputError("cannot open '" + e.map_path + "'");
    map = LatticeMap::parse(in, e.rate);
  } else if (e.depth >= 0) {
    map = LatticeMap::row_layout(e.rate, e.depth, e.dimension);
  } else {
    throw InputError("embedding-check: give --map PATH or --depth D for the row layout");
  }

  const double distortion = distortion_constant(graph, *map);
  const double C = e.constant.value_or(distortion);
  const std::int64_t k_max = e.k_max.value_or(map->depth());

  std::vector<NodeId> nodes;
  for (const auto& [v, _] : map->points()) nodes.push_back(v);
  std::mt19937_64 gen(flags.seed.value_or(0));
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (std::int64_t i = 0; i < e.pairs; ++i) pairs.emplace_back(nodes[pick(gen)], nodes[pick(gen)]);
  const auto counter = lipschitz_check(graph, *map, C, pairs);
  const auto witness = refutation_witness(e.rate, *map, C, k_max);

  Json j;
  j["A"] = e.rate;
  j["dimension"] = map->dimension();
  j["depth"] = map->depth();
  j["span"] = graph.span();
  if (std::isinf(distortion)) {
    j["distortion_constant"] = "inf";
  } else {
    j["distortion_constant"] = distortion;
  }
  j["constant"] = C;
  j["k_max"] = k_max;
  j["lipschitz_pairs"] = e.pairs;
  j["lipschitz_holds"] = !counter.has_value();
  j["lipschitz_counterexample"] =
      counter ? Json::array({to_json(counter->first), to_json(counter->second)}) : Json();
  if (witness) {
    j["witness"] = {{"generation", witness->generation},
                    {"v", to_json(witness->v)},
                    {"w", to_json(witness->w)},
                    {"image_distance", witness->image_distance},
                    {"tree_distance", witness->tree_distance}};
  } else {
    j["witness"] = nullptr;
  }
  out << json_line(j);
  return kOk;
}

int simulate_cmd(const KeyValues& kv, const CommonFlags& flags, std::ostream& out) {
  auto field = field_spec_from(kv);
  if (flags.seed) field.master_seed = *flags.seed;
  const auto sample = sample_field(field, region_from(kv), static_cast<int>(kv.integer("A")),
                                   kv.has("replicate") ? kv.unsigned_integer("replicate") : 0,
                                   flags.workers);
  if (flags.format == "csv") {
    out << sample.to_csv();
  } else {
    for (std::size_t i = 0; i < sample.nodes.size(); ++i) {
      Json j;
      j["j"] = sample.nodes[i].j;
      j["k"] = sample.nodes[i].k;
      j["value"] = sample.values[i];
      out << json_line(j);
    }
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"treemix: Bernstein and concentration bounds for random fields on "
               "exponentially growing trees"};
  app.require_subcommand(1);

  // count-pairs
  CommonFlags cp_flags;
  int cp_rate = 2;
  std::int64_t cp_gens = 1;
  std::optional<std::int64_t> cp_dist;
  auto* cp = app.add_subcommand("count-pairs", "ordered node pairs at distance L in a subtree");
  add_common(cp, cp_flags, "csv");
  cp->add_option("--rate", cp_rate, "branching rate A")->required();
  cp->add_option("--gens", cp_gens, "subtree generations P")->required();
  cp->add_option("--dist", cp_dist, "distance L (all L when omitted)");

  CommonFlags bb_flags;
  auto* bb = app.add_subcommand("bernstein-bound", "evaluate the strip Bernstein bound");
  add_common(bb, bb_flags, "json");
  bb->allow_extras();

  CommonFlags cb_flags;
  auto* cb = app.add_subcommand("concentration-bound", "evaluate the concentration bound");
  add_common(cb, cb_flags, "json");
  cb->allow_extras();

  CommonFlags mc_flags;
  std::optional<std::int64_t> mc_replicates;
  auto* mc = app.add_subcommand("mc-tail", "Monte Carlo tail probabilities against the bounds");
  add_common(mc, mc_flags, "json");
  mc->add_option("--replicates", mc_replicates, "number of replicates");
  mc->allow_extras();

  CommonFlags dv_flags;
  std::string dv_input;
  std::int64_t dv_random = 0;
  std::string dv_p = "4";
  std::string dv_q = "4";
  std::string dv_r = "2";
  auto* dv = app.add_subcommand("verify-davydov", "Davydov inequality on finite spaces");
  add_common(dv, dv_flags, "json");
  dv->add_option("--input", dv_input, "JSON lines of finite spaces");
  dv->add_option("--random", dv_random, "number of random spaces");
  dv->add_option("--p", dv_p, "exponent for xi");
  dv->add_option("--q", dv_q, "exponent for eta");
  dv->add_option("--r", dv_r, "exponent for alpha");

  CommonFlags ec_flags;
  EmbeddingFlags ec;
  auto* emb = app.add_subcommand("embedding-check", "distortion, Lipschitz and refutation checks");
  add_common(emb, ec_flags, "json");
  emb->add_option("--rate", ec.rate, "branching rate A");
  emb->add_option("--map", ec.map_path, "lattice map file (\"j k x1 ... xN\" lines)");
  emb->add_option("--edges", ec.edges_path, "extra edge list (\"j k j' k'\" lines)");
  emb->add_option("--depth", ec.depth, "use the row layout to this depth instead of --map");
  emb->add_option("--dimension", ec.dimension, "row layout dimension N");
  emb->add_option("--constant", ec.constant, "Lipschitz constant C (default: distortion)");
  emb->add_option("--kmax", ec.k_max, "largest generation searched (default: map depth)");
  emb->add_option("--pairs", ec.pairs, "random pairs for the Lipschitz scan");

  CommonFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "sample one field replicate on a region");
  add_common(sim, sim_flags, "csv");
  sim->allow_extras();

  std::ostringstream buffer;
  int code = kOk;
  const CommonFlags* active = nullptr;
  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out << app.help();
        return kOk;
      }
      err << "error: " << e.what() << "\n";
      return kValidationError;
    }

    if (cp->parsed()) {
      active = &cp_flags;
      code = count_pairs_cmd(cp_rate, cp_gens, cp_dist, cp_flags, buffer);
    } else if (bb->parsed()) {
      active = &bb_flags;
      require_json(bb_flags, "bernstein-bound");
      const auto kv = load_config(bb_flags, bb->remaining(), config_keys::bernstein());
      for (const auto& in : bernstein_inputs_from(kv)) buffer << json_line(to_json(bernstein_bound(in)));
    } else if (cb->parsed()) {
      active = &cb_flags;
      require_json(cb_flags, "concentration-bound");
      const auto kv = load_config(cb_flags, cb->remaining(), config_keys::concentration());
      for (const auto& in : concentration_inputs_from(kv)) {
        buffer << json_line(to_json(concentration_bound(in)));
      }
    } else if (mc->parsed()) {
      active = &mc_flags;
      require_json(mc_flags, "mc-tail");
      const auto kv = load_config(mc_flags, mc->remaining(), config_keys::mc_tail());
      code = mc_tail_cmd(kv, mc_flags, mc_replicates, buffer);
    } else if (dv->parsed()) {
      active = &dv_flags;
      require_json(dv_flags, "verify-davydov");
      code = davydov_cmd(dv_input, dv_random, dv_flags, parse_exponent(dv_p, "p"),
                         parse_exponent(dv_q, "q"), parse_exponent(dv_r, "r"), buffer);
    } else if (emb->parsed()) {
      active = &ec_flags;
      require_json(ec_flags, "embedding-check");
      code = embedding_cmd(ec, ec_flags, buffer);
    } else if (sim->parsed()) {
      active = &sim_flags;
      const auto kv = load_config(sim_flags, sim->remaining(), config_keys::simulate());
      code = simulate_cmd(kv, sim_flags, buffer);
    }
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kCapacityError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }

  if (active && !active->out_path.empty()) {
    std::ofstream file(active->out_path);
    if (!file) {
      err << "error: cannot write '" << active->out_path << "'\n";
      return kValidationError;
    }
    file << buffer.str();
  } else {
    out << buffer.str();
  }
  if (code == kBoundViolation) err << "certified bound violation detected\n";
  return code;
}

}  // namespace treemix::cli
