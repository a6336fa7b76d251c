#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "treemix/error.hpp"
#include "treemix/fields.hpp"
#include "treemix/rng.hpp"

using namespace treemix;

TEST_CASE("certificates") {
  FieldSpec spec;
  spec.C = 2.0;
  auto cert = field_certificate(spec, 2);
  CHECK(cert.C == 2.0);
  CHECK(cert.sigma2 == doctest::Approx(4.0 / 3.0));
  CHECK(cert.envelope(1) == 0.0);
  CHECK(cert.envelope.provenance() == Provenance::exact);

  spec = {};
  spec.kind = FieldKind::m_dependent;
  spec.m = 1;
  cert = field_certificate(spec, 2);
  CHECK(cert.envelope(2) == 0.25);
  CHECK(cert.envelope(3) == 0.0);
  CHECK(cert.sigma2 == doctest::Approx(1.0 / 9.0));

  spec = {};
  spec.kind = FieldKind::branching_ar;
  spec.a = 0.5;
  cert = field_certificate(spec, 2);
  CHECK(cert.envelope.provenance() == Provenance::heuristic);
  CHECK_FALSE(cert.envelope.certified());
}

TEST_CASE("spec validation") {
  FieldSpec spec;
  spec.C = 0.0;
  CHECK_THROWS_AS(spec.validate(), InputError);
  spec = {};
  spec.kind = FieldKind::branching_ar;
  spec.a = 1.0;
  CHECK_THROWS_AS(spec.validate(), InputError);
  CHECK_THROWS_AS(field_kind_from_string("gaussian"), InputError);
}

TEST_CASE("uniform draws are symmetric and strictly inside (-1, 1)") {
  CHECK(rng::symmetric_unit(0) == -rng::symmetric_unit(~std::uint64_t{0}));
  CHECK(rng::symmetric_unit(0) > -1.0);
  CHECK(rng::symmetric_unit(~std::uint64_t{0}) < 1.0);
}

TEST_CASE("tree ball") {
  CHECK(tree_ball({0, 1}, 1, 2).size() == 3);
  CHECK(tree_ball({2, 1}, 1, 2).size() == 4);
  CHECK(tree_ball({2, 1}, 2, 2).size() == 10);
}

TEST_CASE("independent moments at one node") {
  FieldSpec spec;
  spec.master_seed = 99;
  FieldSampler sampler(spec, 2, {{4, 3}});
  const int n = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (int r = 0; r < n; ++r) {
    const double z = sampler.value_at(0, static_cast<std::uint64_t>(r));
    CHECK(std::abs(z) <= 1.0);
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 * std::sqrt(1.0 / 3.0 / n));
  CHECK(std::abs(var - 1.0 / 3.0) < 0.05 / 3.0);
}

TEST_CASE("m-dependent values at distance 3 are uncorrelated") {
  FieldSpec spec;
  spec.kind = FieldKind::m_dependent;
  spec.m = 1;
  spec.master_seed = 5;
  const NodeId a{3, 1};
  const NodeId b{3, 3};
  REQUIRE(tree_distance(a, b, 2) == 4);
  const NodeId c{4, 3};
  REQUIRE(tree_distance(a, c, 2) == 3);
  FieldSampler sampler(spec, 2, {a, c});
  const int n = 10000;
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (int r = 0; r < n; ++r) {
    const double x = sampler.value_at(0, static_cast<std::uint64_t>(r));
    const double y = sampler.value_at(1, static_cast<std::uint64_t>(r));
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double cov = sxy / n - sx / n * sy / n;
  const double corr = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
  CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("branching AR neighbours are correlated and bounded") {
  FieldSpec spec;
  spec.kind = FieldKind::branching_ar;
  spec.a = 0.9;
  FieldSampler sampler(spec, 2, region_nodes(Generations{5}, 2));
  std::vector<double> z(sampler.nodes().size());
  double sxy = 0.0;
  for (std::uint64_t r = 0; r < 4000; ++r) {
    sampler.sample(r, z);
    for (const double x : z) CHECK(std::abs(x) <= 1.0);
    sxy += z[1] * z[0];  // (1,1) and its parent
  }
  CHECK(sxy / 4000 > 0.05);
}

TEST_CASE("sampling is deterministic and independent of worker count") {
  for (const auto kind : {FieldKind::independent, FieldKind::m_dependent, FieldKind::branching_ar}) {
    FieldSpec spec;
    spec.kind = kind;
    spec.master_seed = 1234;
    const Region region = Strip{4, 3};
    const auto a = sample_field(spec, region, 2, 7, 1);
    const auto b = sample_field(spec, region, 2, 7, 4);
    const auto c = sample_field(spec, region, 2, 7, 1);
    CHECK(a.values == b.values);
    CHECK(a.values == c.values);
    CHECK(a.to_csv() == b.to_csv());
    const auto other = sample_field(spec, region, 2, 8, 1);
    CHECK(a.values != other.values);
  }
}

TEST_CASE("values do not depend on which region contains the node") {
  FieldSpec spec;
  spec.kind = FieldKind::branching_ar;
  spec.master_seed = 77;
  const auto small = sample_field(spec, Strip{3, 1}, 2, 2);
  const auto large = sample_field(spec, Generations{5}, 2, 2);
  for (std::size_t i = 0; i < small.nodes.size(); ++i) {
    const auto it = std::find(large.nodes.begin(), large.nodes.end(), small.nodes[i]);
    REQUIRE(it != large.nodes.end());
    CHECK(small.values[i] == large.values[static_cast<std::size_t>(it - large.nodes.begin())]);
  }
}

TEST_CASE("csv layout") {
  FieldSpec spec;
  const auto s = sample_field(spec, Strip{1, 1}, 2, 0);
  const auto csv = s.to_csv();
  CHECK(csv.rfind("j,k,value\n1,1,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
