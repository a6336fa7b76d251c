#pragma once

// "key = value" configuration dialect shared by the CLI subcommands.
// '#' starts a comment; keys are the field names of the target input type.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "treemix/bounds.hpp"
#include "treemix/fields.hpp"
#include "treemix/tree.hpp"

namespace treemix {

class KeyValues {
 public:
  static KeyValues parse(std::istream& in, const std::string& source = "config");

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  /// Throws InputError naming the missing key or the malformed value.
  std::string text(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  double real(const std::string& key) const;
  std::vector<double> real_list(const std::string& key) const;

  std::string text_or(const std::string& key, const std::string& fallback) const;
  std::int64_t integer_or(const std::string& key, std::int64_t fallback) const;
  double real_or(const std::string& key, double fallback) const;

  /// InputError naming the first key not in `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

namespace config_keys {
const std::set<std::string>& envelope();
const std::set<std::string>& bernstein();
const std::set<std::string>& concentration();
const std::set<std::string>& field();
const std::set<std::string>& region();
const std::set<std::string>& mc_tail();
const std::set<std::string>& simulate();
}  // namespace config_keys

MixingEnvelope envelope_from(const KeyValues& kv);
FieldSpec field_spec_from(const KeyValues& kv);
Region region_from(const KeyValues& kv);

/// One input per listed epsilon. beta may be the literal "cap".
std::vector<BernsteinInput> bernstein_inputs_from(const KeyValues& kv);
std::vector<ConcentrationInput> concentration_inputs_from(const KeyValues& kv);

}  // namespace treemix
