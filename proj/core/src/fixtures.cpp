#include "iic/fixtures.hpp"

#include <map>

namespace iic {

namespace {

Fixture make_fig1b() {
  // Z -> T -> Y <- W with T <-> Y
  std::map<NodeId, std::string> lab{{0, "Z"}, {1, "T"}, {2, "Y"}, {3, "W"}};
  Fixture f;
  f.name = "fig1b";
  f.graph = MixedGraph::build(4, {{0, 1}, {1, 2}, {3, 2}}, {{1, 2}}, lab);
  f.seeds.iv_triples = {{0, 1, 2}};
  f.note = "instrumented chain with one confounded edge";
  return f;
}

Fixture make_fig2() {
  // five nodes: Z instruments T and U; Y has three parents, two confounded
  std::map<NodeId, std::string> lab{{0, "Z"}, {1, "T"}, {2, "Y"}, {3, "W"}, {4, "U"}};
  Fixture f;
  f.name = "fig2";
  f.graph = MixedGraph::build(5, {{0, 1}, {0, 4}, {1, 2}, {3, 2}, {4, 2}}, {{1, 2}, {3, 2}}, lab);
  f.seeds.iv_triples = {{0, 1, 2}, {0, 4, 2}};
  f.note = "propagation showcase; seeds identify the two instrumented edges";
  return f;
}

Fixture make_ce1() {
  std::map<NodeId, std::string> lab{{0, "Z"}, {1, "T"}, {2, "Y"}, {3, "W"}};
  Fixture f;
  f.name = "ce1";
  f.graph = MixedGraph::build(4, {{0, 1}, {1, 2}, {3, 2}}, {{1, 2}, {3, 2}}, lab);
  f.seeds.iv_triples = {{0, 1, 2}};
  f.note = "both parents of Y are confounded siblings; W has no instrument";
  return f;
}

Fixture make_ce2() {
  // U -> Z, U -> Y, Z -> T -> Y: Z fails exogeneity, the naive ratio is biased
  std::map<NodeId, std::string> lab{{0, "Z"}, {1, "T"}, {2, "Y"}, {3, "U"}};
  Fixture f;
  f.name = "ce2";
  f.graph = MixedGraph::build(4, {{3, 0}, {3, 2}, {0, 1}, {1, 2}}, {}, lab);
  f.seeds.iv_triples = {{0, 1, 2}};
  f.note = "exogeneity violation: Cov(Z,Y)/Cov(Z,T) != B_TY";
  return f;
}

Fixture make_mr() {
  // 9-node cardiovascular network: three genetic instruments, four
  // exposure-outcome confounders.
  std::map<NodeId, std::string> lab{{0, "G_bmi"}, {1, "G_ldl"}, {2, "G_bp"},
                                    {3, "BMI"},   {4, "LDL"},   {5, "SBP"},
                                    {6, "CRP"},   {7, "SMK"},   {8, "CHD"}};
  std::vector<DirectedEdge> d{{0, 3}, {1, 4}, {2, 5}, {2, 6}, {3, 8}, {4, 8}, {4, 5},
                              {5, 8}, {6, 8}, {7, 3}, {7, 4}, {7, 6}, {7, 8}};
  std::vector<BidirectedEdge> b{{3, 8}, {4, 8}, {5, 8}, {6, 8}};
  Fixture f;
  f.name = "mr";
  f.graph = MixedGraph::build(9, d, b, lab);
  f.seeds.iv_triples = {{0, 3, 8}, {1, 4, 8}, {2, 5, 8}};
  f.note = "Mendelian-randomization style network, 13 directed + 4 bidirected";
  return f;
}

Fixture make_sachs() {
  // protein signalling consensus network (11 nodes, 17 directed edges) with
  // six added confounders between pathway-unrelated, non-parent-child pairs,
  // keeping pa(i) and sib(i) disjoint at every node
  std::vector<std::string> names{"Raf", "Mek", "Plcg", "PIP2", "PIP3", "Erk",
                                 "Akt", "PKA", "PKC",  "P38",  "Jnk"};
  std::map<std::string, NodeId> id;
  std::map<NodeId, std::string> lab;
  for (size_t k = 0; k < names.size(); ++k) {
    id[names[k]] = static_cast<NodeId>(k);
    lab[static_cast<NodeId>(k)] = names[k];
  }
  auto E = [&](const std::string& a, const std::string& b) {
    return DirectedEdge{id[a], id[b]};
  };
  std::vector<DirectedEdge> d{E("Plcg", "PIP3"), E("Plcg", "PIP2"), E("PIP3", "PIP2"),
                              E("PKC", "PKA"),   E("PKC", "Raf"),   E("PKA", "Raf"),
                              E("PKC", "Mek"),   E("PKA", "Mek"),   E("Raf", "Mek"),
                              E("Mek", "Erk"),   E("PKA", "Erk"),   E("Erk", "Akt"),
                              E("PKA", "Akt"),   E("PKC", "P38"),   E("PKA", "P38"),
                              E("PKC", "Jnk"),   E("PKA", "Jnk")};
  auto B = [&](const std::string& a, const std::string& b) {
    return BidirectedEdge{std::min(id[a], id[b]), std::max(id[a], id[b])};
  };
  std::vector<BidirectedEdge> bi{B("Plcg", "PKC"), B("Raf", "Jnk"), B("Mek", "P38"),
                                 B("Erk", "Jnk"),  B("Akt", "P38"), B("PIP2", "Akt")};
  Fixture f;
  f.name = "sachs";
  f.graph = MixedGraph::build(11, d, bi, lab);
  f.note = "signalling network; hub nodes provide abundant half-trek sources";
  return f;
}

Fixture make_education() {
  // returns-to-education model: quarter of birth instruments schooling;
  // ability confounds schooling and earnings (E <-> Y)
  std::map<NodeId, std::string> lab{{0, "Q"}, {1, "E"}, {2, "Y"},
                                    {3, "A"}, {4, "R"}, {5, "X"}};
  std::vector<DirectedEdge> d{{0, 1}, {3, 1}, {5, 1}, {1, 2}, {3, 2}, {4, 2}, {5, 2}};
  Fixture f;
  f.name = "education";
  f.graph = MixedGraph::build(6, d, {{1, 2}}, lab);
  f.seeds.iv_triples = {{0, 1, 2}};
  f.note = "quarter-of-birth instrument for schooling -> earnings";
  return f;
}

}  // namespace

Fixture fixture(const std::string& name) {
  if (name == "fig1b") return make_fig1b();
  if (name == "fig2") return make_fig2();
  if (name == "ce1") return make_ce1();
  if (name == "ce2") return make_ce2();
  if (name == "mr") return make_mr();
  if (name == "sachs") return make_sachs();
  if (name == "education") return make_education();
  throw Error(Err::UnknownExperiment, "unknown fixture: " + name);
}

std::vector<std::string> fixture_names() {
  return {"fig1b", "fig2", "ce1", "ce2", "mr", "sachs", "education"};
}

}  // namespace iic
