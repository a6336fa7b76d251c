#include "treemix/config.hpp"

#include <cmath>
#include <istream>
#include <sstream>

#include "treemix/error.hpp"

namespace treemix {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::set<std::string> merge(std::initializer_list<const std::set<std::string>*> parts,
                            std::initializer_list<const char*> extra) {
  std::set<std::string> out;
  for (const auto* p : parts) out.insert(p->begin(), p->end());
  for (const char* e : extra) out.insert(e);
  return out;
}

}  // namespace

KeyValues KeyValues::parse(std::istream& in, const std::string& source) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw InputError(where + ": expected \"key = value\"");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw InputError(where + ": empty key");
    if (value.empty()) throw InputError(where + ": key '" + key + "' has no value");
    if (kv.has(key)) throw InputError(where + ": key '" + key + "' given twice");
    kv.set(key, value);
  }
  return kv;
}

std::string KeyValues::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InputError("missing required key '" + key + "'");
  return it->second;
}

std::int64_t KeyValues::integer(const std::string& key) const {
  const auto s = text(key);
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw InputError("key '" + key + "': expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t KeyValues::unsigned_integer(const std::string& key) const {
  const auto s = text(key);
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (!s.empty() && s[0] != '-') v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw InputError("key '" + key + "': expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

double KeyValues::real(const std::string& key) const {
  const auto s = text(key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(v)) {
    throw InputError("key '" + key + "': expected a finite number, got '" + s + "'");
  }
  return v;
}

std::vector<double> KeyValues::real_list(const std::string& key) const {
  std::vector<double> out;
  std::istringstream items(text(key));
  std::string item;
  while (std::getline(items, item, ',')) {
    KeyValues one;
    one.set(key, trim(item));
    out.push_back(one.real(key));
  }
  if (out.empty()) throw InputError("key '" + key + "': empty list");
  return out;
}

std::string KeyValues::text_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

std::int64_t KeyValues::integer_or(const std::string& key, std::int64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

double KeyValues::real_or(const std::string& key, double fallback) const {
  return has(key) ? real(key) : fallback;
}

void KeyValues::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [k, _] : values_) {
    if (!allowed.count(k)) throw InputError("unknown key '" + k + "'");
  }
}

namespace config_keys {

const std::set<std::string>& envelope() {
  static const std::set<std::string> keys{"envelope",       "envelope_m",      "envelope_scale",
                                          "envelope_power", "envelope_values", "envelope_provenance"};
  return keys;
}

const std::set<std::string>& bernstein() {
  static const auto keys = merge({&envelope()}, {"A", "L", "P", "P2", "Q2", "beta", "epsilon", "C",
                                                 "sigma2"});
  return keys;
}

const std::set<std::string>& concentration() {
  static const auto keys =
      merge({&envelope()}, {"A", "L", "epsilon", "C", "sigma2", "eta", "D"});
  return keys;
}

const std::set<std::string>& field() {
  static const std::set<std::string> keys{"kind", "C", "m", "a", "master_seed"};
  return keys;
}

const std::set<std::string>& region() {
  static const std::set<std::string> keys{"region", "L", "P", "j", "k"};
  return keys;
}

const std::set<std::string>& mc_tail() {
  static const auto keys =
      merge({&field(), &region()}, {"A", "epsilon", "n_replicates", "eta", "D"});
  return keys;
}

const std::set<std::string>& simulate() {
  static const auto keys = merge({&field(), &region()}, {"A", "replicate"});
  return keys;
}

}  // namespace config_keys

MixingEnvelope envelope_from(const KeyValues& kv) {
  const auto kind = kv.text_or("envelope", "zero");
  const auto prov_default = kind == "zero" || kind == "m_dependent" ? "exact" : "assumed";
  const auto prov = provenance_from_string(kv.text_or("envelope_provenance", prov_default));
  if (kind == "zero") return MixingEnvelope::zero(prov);
  if (kind == "m_dependent") return MixingEnvelope::m_dependent(kv.integer("envelope_m"), prov);
  if (kind == "super_exponential") {
    return MixingEnvelope::super_exponential(kv.real_or("envelope_scale", 1.0),
                                             kv.real_or("envelope_power", 1.0), prov);
  }
  if (kind == "table") return MixingEnvelope::table(kv.real_list("envelope_values"), prov);
  throw InputError("key 'envelope': unknown kind '" + kind + "'");
}

FieldSpec field_spec_from(const KeyValues& kv) {
  FieldSpec spec;
  spec.kind = field_kind_from_string(kv.text("kind"));
  spec.C = kv.real("C");
  spec.m = kv.integer_or("m", 1);
  spec.a = kv.real_or("a", 0.5);
  spec.master_seed = kv.has("master_seed") ? kv.unsigned_integer("master_seed") : 0;
  spec.validate();
  return spec;
}

Region region_from(const KeyValues& kv) {
  const auto kind = kv.text("region");
  if (kind == "strip") return Strip{kv.integer("L"), kv.integer("P")};
  if (kind == "generations") return Generations{kv.integer("L")};
  if (kind == "subtree") return Subtree{{kv.integer("j"), kv.integer("k")}, kv.integer("P")};
  throw InputError("key 'region': unknown region '" + kind + "'");
}

std::vector<BernsteinInput> bernstein_inputs_from(const KeyValues& kv) {
  kv.require_known(config_keys::bernstein());
  BernsteinInput base;
  base.A = static_cast<int>(kv.integer("A"));
  base.L = kv.integer("L");
  base.P = kv.integer("P");
  base.P2 = kv.integer("P2");
  base.Q2 = kv.integer("Q2");
  base.C = kv.real("C");
  base.sigma2 = kv.real("sigma2");
  base.envelope = envelope_from(kv);
  base.beta = kv.text("beta") == "cap" ? beta_cap(base.A, base.P, base.P2, base.C) : kv.real("beta");
  std::vector<BernsteinInput> out;
  for (const double eps : kv.real_list("epsilon")) {
    auto in = base;
    in.epsilon = eps;
    out.push_back(in);
  }
  return out;
}

std::vector<ConcentrationInput> concentration_inputs_from(const KeyValues& kv) {
  kv.require_known(config_keys::concentration());
  ConcentrationInput base;
  base.A = static_cast<int>(kv.integer("A"));
  base.L = kv.integer("L");
  base.C = kv.real("C");
  base.sigma2 = kv.real("sigma2");
  base.envelope = envelope_from(kv);
  base.eta = kv.real_or("eta", 0.5);
  base.D = kv.real_or("D", 1.0);
  std::vector<ConcentrationInput> out;
  for (const double eps : kv.real_list("epsilon")) {
    auto in = base;
    in.epsilon = eps;
    out.push_back(in);
  }
  return out;
}

}  // namespace treemix
