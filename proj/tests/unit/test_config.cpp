#include <doctest.h>

#include <functional>
#include <sstream>

#include "treemix/config.hpp"
#include "treemix/error.hpp"
#include "treemix/report.hpp"

using namespace treemix;

namespace {

KeyValues parse(const std::string& text) {
  std::istringstream in(text);
  return KeyValues::parse(in);
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("key value parsing") {
  const auto kv = parse("# comment\nA = 2\n  epsilon = 0.5, 1 ,2  # trailing\n\nkind=independent\n");
  CHECK(kv.integer("A") == 2);
  CHECK(kv.real_list("epsilon") == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(kv.text("kind") == "independent");
  CHECK(kv.real_or("eta", 0.5) == 0.5);
  CHECK_THROWS_AS(parse("A 2\n"), InputError);
  CHECK_THROWS_AS(parse("A = 2\nA = 3\n"), InputError);
  CHECK_THROWS_AS(parse("A =\n"), InputError);
  CHECK(error_of([&] { kv.integer("epsilon"); }).find("'epsilon'") != std::string::npos);
  CHECK(error_of([&] { kv.real("missing"); }).find("'missing'") != std::string::npos);
}

TEST_CASE("unknown keys are named") {
  const auto kv = parse("A = 2\nbogus = 1\n");
  const auto msg = error_of([&] { kv.require_known(config_keys::bernstein()); });
  CHECK(msg.find("'bogus'") != std::string::npos);
}

TEST_CASE("bernstein inputs") {
  const auto kv = parse(
      "A = 2\nL = 5\nP = 3\nP2 = 4\nQ2 = 4\nbeta = cap\nepsilon = 50, 100\nC = 1\nsigma2 = 0.25\n");
  const auto ins = bernstein_inputs_from(kv);
  REQUIRE(ins.size() == 2);
  CHECK(ins[1].epsilon == 100.0);
  CHECK(ins[0].beta == beta_cap(2, 3, 4, 1.0));
  CHECK(ins[0].envelope.kind_name() == "zero");
}

TEST_CASE("envelopes from config") {
  auto env = envelope_from(parse("envelope = table\nenvelope_values = 0.2, 0.1\n"));
  CHECK(env(2) == 0.1);
  CHECK(env.provenance() == Provenance::assumed);
  env = envelope_from(parse("envelope = m_dependent\nenvelope_m = 2\n"));
  CHECK(env(4) == 0.25);
  CHECK(env(5) == 0.0);
  env = envelope_from(parse("envelope = zero\nenvelope_provenance = heuristic\n"));
  CHECK_FALSE(env.certified());
  CHECK_THROWS_AS(envelope_from(parse("envelope = gaussian\n")), InputError);
}

TEST_CASE("regions and fields from config") {
  CHECK(std::holds_alternative<Strip>(region_from(parse("region = strip\nL = 5\nP = 3\n"))));
  CHECK(std::get<Generations>(region_from(parse("region = generations\nL = 7\n"))).count == 7);
  const auto sub = std::get<Subtree>(region_from(parse("region = subtree\nj = 1\nk = 2\nP = 3\n")));
  CHECK(sub.root == NodeId{1, 2});
  const auto f = field_spec_from(parse("kind = m_dependent\nC = 2\nm = 2\nmaster_seed = 9\n"));
  CHECK(f.kind == FieldKind::m_dependent);
  CHECK(f.m == 2);
  CHECK(f.master_seed == 9);
  CHECK_THROWS_AS(field_spec_from(parse("kind = independent\nC = -1\n")), InputError);
  CHECK_THROWS_AS(field_spec_from(parse("kind = independent\nC = 1\nmaster_seed = -4\n")),
                  InputError);
}

TEST_CASE("json schemas use the type field names") {
  BernsteinInput in;
  in.A = 2;
  in.L = 5;
  in.P = 3;
  in.P2 = 4;
  in.Q2 = 4;
  in.sigma2 = 1.0 / 3.0;
  in.beta = beta_cap(2, 3, 4, 1.0);
  in.epsilon = 50.0;
  const auto j = to_json(bernstein_bound(in));
  for (const char* key : {"log_factor_markov", "log_factor_mixing", "log_factor_variance",
                          "variance_proxy", "block_count", "log_total", "indicator_wedge"}) {
    CHECK(j.contains(key));
  }
  const auto line = json_line(j);
  CHECK(line.back() == '\n');
  CHECK(Json::parse(line) == j);
}

TEST_CASE("finite space json round trip") {
  FiniteSpace s{{0.5, 0.5}, {0, 1}, {0, 1}, {1.0, -1.0}, {2.0, 0.0}};
  const auto back = finite_space_from_json(to_json(s));
  CHECK(back.prob == s.prob);
  CHECK(back.h_atom == s.h_atom);
  CHECK_THROWS_AS(finite_space_from_json(Json{{"prob", {1.0}}}), InputError);
}
