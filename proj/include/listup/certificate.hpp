#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"
#include "listup/verifier.hpp"

namespace listup {

struct CertificateError : Error { using Error::Error; };

/// A verified potential assignment in portable form. Only OPT potentials
/// are stored; ALG potentials follow as the cheapest move.
struct Certificate {
  int n = 0;
  WfKind kind = WfKind::FullWf;
  std::string restriction = "all";
  CostModel model = CostModel::Partial;
  Rational rho;
  std::uint64_t graph_hash = 0;
  std::int64_t scale = 1;
  std::vector<std::int64_t> potentials;
  std::vector<std::uint32_t> policy;
};

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Certificate make_certificate(const GameGraph& g, const PotentialAssignment& a) {
  if (!a.verified()) throw CertificateError("only verified assignments can be certified");
  return {g.n, g.kind, g.restriction, g.model, a.rho, g.hash(), a.scale, a.opt, tight_policy(g, a)};
}

inline nlohmann::json to_json(const Certificate& c) {
  return {{"n", c.n},
          {"kind", to_string(c.kind)},
          {"restriction", c.restriction},
          {"model", to_string(c.model)},
          {"rho", c.rho.to_string()},
          {"graph_hash", hex64(c.graph_hash)},
          {"scale", c.scale},
          {"potentials", c.potentials},
          {"policy", c.policy}};
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
  try {
    Certificate c;
    c.n = j.at("n").get<int>();
    c.kind = parse_wf_kind(j.at("kind").get<std::string>());
    c.restriction = j.at("restriction").get<std::string>();
    c.model = parse_cost_model(j.at("model").get<std::string>());
    c.rho = Rational::parse(j.at("rho").get<std::string>());
    c.graph_hash = std::stoull(j.at("graph_hash").get<std::string>(), nullptr, 16);
    c.scale = j.at("scale").get<std::int64_t>();
    c.potentials = j.at("potentials").get<std::vector<std::int64_t>>();
    c.policy = j.at("policy").get<std::vector<std::uint32_t>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw CertificateError(std::string("malformed certificate: ") + e.what());
  }
}

inline void save_certificate(const Certificate& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CertificateError("cannot write " + path);
  out << to_json(c).dump(1) << '\n';
}

inline Certificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CertificateError("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CertificateError(std::string("malformed certificate: ") + e.what());
  }
  return certificate_from_json(j);
}

/// Rebuilds the graph the certificate names and audits it exactly. No
/// iteration is run.
inline AuditResult check_certificate(const Certificate& c, std::optional<std::size_t> max_vertices = std::nullopt) {
  Restriction r = parse_restriction(c.restriction);
  GameGraph g = build_graph(c.n, c.model, c.kind, r, max_vertices);
  if (g.hash() != c.graph_hash) return {false, "graph hash mismatch"};
  if (c.potentials.size() != g.opt_count()) return {false, "potential count differs from graph"};
  if (c.policy.size() != g.alg_count()) return {false, "policy length differs from graph"};
  PotentialAssignment a;
  a.status = PotentialAssignment::Status::Verified;
  a.rho = c.rho;
  a.scale = c.scale;
  a.opt = c.potentials;
  a.alg.resize(g.alg_count());
  for (std::uint32_t u = 0; u < g.alg_count(); ++u) {
    auto es = g.edges(u);
    if (c.policy[u] >= es.size()) return {false, "policy index out of range at ALG vertex " + std::to_string(u)};
    const auto& e = es[c.policy[u]];
    a.alg[u] = c.scale * e.cost + c.potentials[e.next];
  }
  return audit(g, a);
}

}  // namespace listup
