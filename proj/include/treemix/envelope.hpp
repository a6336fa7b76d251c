#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace treemix {

// Where an envelope's values come from. Only exact and assumed envelopes
// may be used to certify a bound violation.
enum class Provenance { exact, assumed, heuristic };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

// Upper bound n -> alpha(n) on a field's alpha-mixing coefficients.
// Evaluates to a value in [0, 1], non-increasing in n. alpha(0) is reported
// as the vacuous 1: no separation means no claim.
class MixingEnvelope {
 public:
  struct Zero {};
  struct MDependent {
    std::int64_t m = 1;  // 1/4 up to separation 2m, 0 beyond
  };
  // alpha(n) = exp(-n g(n)) with g(n) = scale * n^power.
  struct SuperExponential {
    double scale = 1.0;
    double power = 1.0;
  };
  // values[i] bounds alpha(i + 1); the last entry extends to infinity.
  struct Table {
    std::vector<double> values;
  };
  // n -> base(floor(n / C)) for n >= C, 1 below.
  struct Transferred {
    std::shared_ptr<const MixingEnvelope> base;
    double constant = 1.0;
  };
  using Kind = std::variant<Zero, MDependent, SuperExponential, Table, Transferred>;

  static MixingEnvelope zero(Provenance p = Provenance::exact);
  static MixingEnvelope m_dependent(std::int64_t m, Provenance p = Provenance::exact);
  static MixingEnvelope super_exponential(double scale, double power,
                                          Provenance p = Provenance::assumed);
  static MixingEnvelope table(std::vector<double> values, Provenance p = Provenance::assumed);

  double operator()(std::int64_t n) const;

  const Kind& kind() const { return kind_; }
  Provenance provenance() const { return provenance_; }
  bool certified() const { return provenance_ != Provenance::heuristic; }
  std::string kind_name() const;

  /// Lipschitz transfer to a lattice with distortion constant C >= 1.
  /// Exact provenance is downgraded to assumed.
  friend MixingEnvelope mixing_transfer(const MixingEnvelope& env, double constant);

 private:
  MixingEnvelope(Kind kind, Provenance p) : kind_(std::move(kind)), provenance_(p) {}

  Kind kind_;
  Provenance provenance_;
};

MixingEnvelope mixing_transfer(const MixingEnvelope& env, double constant);

}  // namespace treemix
