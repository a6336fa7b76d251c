#include <doctest.h>

#include <random>

#include "treemix/envelope.hpp"
#include "treemix/error.hpp"

using namespace treemix;

TEST_CASE("envelope kinds") {
  const auto z = MixingEnvelope::zero();
  CHECK(z(0) == 1.0);
  CHECK(z(1) == 0.0);

  const auto m = MixingEnvelope::m_dependent(1);
  CHECK(m(1) == 0.25);
  CHECK(m(2) == 0.25);
  CHECK(m(3) == 0.0);

  const auto s = MixingEnvelope::super_exponential(1.0, 1.0);
  CHECK(s(2) == doctest::Approx(std::exp(-4.0)));

  const auto t = MixingEnvelope::table({0.2, 0.1, 0.05});
  CHECK(t(2) == 0.1);
  CHECK(t(10) == 0.05);
}

TEST_CASE("table validation") {
  CHECK_THROWS_AS(MixingEnvelope::table({}), InputError);
  CHECK_THROWS_AS(MixingEnvelope::table({0.1, 0.2}), InputError);
  CHECK_THROWS_AS(MixingEnvelope::table({1.5}), InputError);
  CHECK_THROWS_AS(MixingEnvelope::m_dependent(0), InputError);
  CHECK_THROWS_AS(provenance_from_string("maybe"), InputError);
}

TEST_CASE("provenance and certification") {
  CHECK(MixingEnvelope::zero().certified());
  CHECK(MixingEnvelope::table({0.1}, Provenance::assumed).certified());
  CHECK_FALSE(MixingEnvelope::table({0.1}, Provenance::heuristic).certified());
  CHECK(provenance_from_string(to_string(Provenance::heuristic)) == Provenance::heuristic);
}

TEST_CASE("transfer examples") {
  const auto t = MixingEnvelope::table({0.1, 0.01});
  const auto moved = mixing_transfer(t, 2.0);
  CHECK(moved(4) == 0.01);
  CHECK(moved(1) == 1.0);
  CHECK(moved(2) == 0.1);

  const auto same = mixing_transfer(t, 1.0);
  for (std::int64_t n = 1; n < 10; ++n) CHECK(same(n) == t(n));

  const auto z = mixing_transfer(MixingEnvelope::zero(), 3.0);
  for (std::int64_t n = 3; n < 20; ++n) CHECK(z(n) == 0.0);

  CHECK(mixing_transfer(MixingEnvelope::zero(Provenance::exact), 2.0).provenance() ==
        Provenance::assumed);
  CHECK(mixing_transfer(t, 2.0).provenance() == Provenance::assumed);
  CHECK(mixing_transfer(MixingEnvelope::zero(Provenance::heuristic), 2.0).provenance() ==
        Provenance::heuristic);
  CHECK_THROWS_AS(mixing_transfer(t, 0.5), InputError);
}

TEST_CASE("transfer preserves non-increase") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values(1 + gen() % 12);
    double cur = 0.25;
    for (auto& v : values) v = cur *= u(gen);
    const double C = 1.0 + 4.0 * u(gen);
    const auto moved = mixing_transfer(MixingEnvelope::table(values), C);
    for (std::int64_t n = 1; n < 60; ++n) CHECK(moved(n + 1) <= moved(n));
  }
}
