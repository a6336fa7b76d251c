#include "treemix/report.hpp"

#include "treemix/error.hpp"

namespace treemix {

Json to_json(const NodeId& v) { return Json::array({v.j, v.k}); }

Json to_json(const BoundBreakdown& b) {
  Json j;
  j["log_factor_markov"] = b.log_factor_markov;
  j["log_factor_mixing"] = b.log_factor_mixing;
  j["log_factor_variance"] = b.log_factor_variance;
  j["variance_proxy"] = b.variance_proxy;
  j["block_count"] = b.block_count;
  j["log_total"] = b.log_total;
  j["log_total_clamped"] = b.log_total_clamped;
  j["indicator_wedge"] = b.indicator_wedge;
  j["A"] = b.A;
  j["L"] = b.L;
  j["P"] = b.P;
  j["P2"] = b.P2;
  j["Q2"] = b.Q2;
  j["f"] = b.f;
  j["beta"] = b.beta;
  j["epsilon"] = b.epsilon;
  j["provenance"] = to_string(b.provenance);
  if (b.concentration) {
    const auto& c = *b.concentration;
    j["concentration"] = {{"generations", c.generations}, {"P1", c.P1},
                          {"eta", c.eta},                 {"D", c.D},
                          {"epsilon_strip", c.epsilon_strip},
                          {"strip_log_total", c.strip_log_total}};
  }
  return j;
}

Json to_json(const TailEstimate& t) {
  Json j;
  j["epsilon"] = t.epsilon;
  j["n_replicates"] = t.n_replicates;
  j["n_exceed"] = t.n_exceed;
  j["p_hat"] = t.p_hat;
  j["ci_upper_99"] = t.ci_upper_99;
  j["log_bound"] = t.log_bound;
  j["certified"] = t.certified;
  j["violated"] = t.violated;
  j["bound"] = to_json(t.bound);
  return j;
}

Json to_json(const DavydovResult& d) {
  Json j;
  j["alpha"] = d.alpha;
  j["lhs"] = d.lhs;
  j["rhs"] = d.rhs;
  j["holds"] = d.holds;
  return j;
}

Json to_json(const FiniteSpace& s) {
  Json j;
  j["prob"] = s.prob;
  j["g_atom"] = s.g_atom;
  j["h_atom"] = s.h_atom;
  j["xi"] = s.xi;
  j["eta"] = s.eta;
  return j;
}

FiniteSpace finite_space_from_json(const Json& j) {
  FiniteSpace s;
  try {
    s.prob = j.at("prob").get<std::vector<double>>();
    s.g_atom = j.at("g_atom").get<std::vector<int>>();
    s.h_atom = j.at("h_atom").get<std::vector<int>>();
    s.xi = j.at("xi").get<std::vector<double>>();
    s.eta = j.at("eta").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("finite space JSON: ") + e.what());
  }
  s.validate();
  return s;
}

std::string json_line(const Json& j) { return j.dump() + "\n"; }

}  // namespace treemix
