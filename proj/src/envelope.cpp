#include "treemix/envelope.hpp"

#include <algorithm>
#include <cmath>

#include "treemix/error.hpp"

namespace treemix {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::exact:
      return "exact";
    case Provenance::assumed:
      return "assumed";
    case Provenance::heuristic:
      return "heuristic";
  }
  return "unknown";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "exact") return Provenance::exact;
  if (s == "assumed") return Provenance::assumed;
  if (s == "heuristic") return Provenance::heuristic;
  throw InputError("unknown provenance '" + s + "'");
}

MixingEnvelope MixingEnvelope::zero(Provenance p) { return {Zero{}, p}; }

MixingEnvelope MixingEnvelope::m_dependent(std::int64_t m, Provenance p) {
  if (m < 1) throw InputError("m_dependent envelope: m must be >= 1");
  return {MDependent{m}, p};
}

MixingEnvelope MixingEnvelope::super_exponential(double scale, double power, Provenance p) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InputError("super_exponential envelope: scale must be positive");
  }
  if (!(power >= 0.0) || !std::isfinite(power)) {
    throw InputError("super_exponential envelope: power must be >= 0");
  }
  return {SuperExponential{scale, power}, p};
}

MixingEnvelope MixingEnvelope::table(std::vector<double> values, Provenance p) {
  if (values.empty()) throw InputError("table envelope: no values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      throw InputError("table envelope: value " + std::to_string(i + 1) + " outside [0, 1]");
    }
    if (i > 0 && values[i] > values[i - 1]) {
      throw InputError("table envelope: values must be non-increasing (entry " +
                       std::to_string(i + 1) + ")");
    }
  }
  return {Table{std::move(values)}, p};
}

double MixingEnvelope::operator()(std::int64_t n) const {
  if (n <= 0) return 1.0;
  return std::visit(
      [n](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, MDependent>) {
          return n <= 2 * k.m ? 0.25 : 0.0;
        } else if constexpr (std::is_same_v<T, SuperExponential>) {
          const double x = static_cast<double>(n);
          return std::exp(-x * k.scale * std::pow(x, k.power));
        } else if constexpr (std::is_same_v<T, Table>) {
          const auto i = std::min<std::size_t>(static_cast<std::size_t>(n - 1), k.values.size() - 1);
          return k.values[i];
        } else {
          const double x = static_cast<double>(n);
          if (x < k.constant) return 1.0;
          return (*k.base)(static_cast<std::int64_t>(std::floor(x / k.constant)));
        }
      },
      kind_);
}

std::string MixingEnvelope::kind_name() const {
  static const char* names[] = {"zero", "m_dependent", "super_exponential", "table",
                                "transferred"};
  return names[kind_.index()];
}

MixingEnvelope mixing_transfer(const MixingEnvelope& env, double constant) {
  if (!(constant >= 1.0) || !std::isfinite(constant)) {
    throw InputError("mixing_transfer: constant C must be >= 1");
  }
  const auto p = env.provenance() == Provenance::exact ? Provenance::assumed : env.provenance();
  return MixingEnvelope(
      MixingEnvelope::Transferred{std::make_shared<const MixingEnvelope>(env), constant}, p);
}

}  // namespace treemix
