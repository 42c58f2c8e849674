#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "iic/graph.hpp"
#include "iic/io.hpp"

using namespace iic;

TEST_CASE("build validates and rejects bad graphs") {
  auto g = MixedGraph::build(4, {{0, 1}, {1, 2}, {3, 2}}, {{1, 2}, {3, 2}});
  CHECK(g.n() == 4);
  CHECK(g.directed().size() == 3);

  CHECK(MixedGraph::build(1, {}, {}).n() == 1);

  CHECK_THROWS_AS(MixedGraph::build(2, {{0, 1}, {1, 0}}, {}), Error);
  try {
    MixedGraph::build(2, {{0, 1}, {1, 0}}, {});
  } catch (const Error& e) {
    CHECK(e.code == Err::CycleDetected);
  }
  CHECK_THROWS_AS(MixedGraph::build(2, {{0, 0}}, {}), Error);
  CHECK_THROWS_AS(MixedGraph::build(2, {{0, 3}}, {}), Error);
  CHECK_THROWS_AS(MixedGraph::build(3, {}, {{1, 1}}), Error);
  // duplicates collapse
  auto d = MixedGraph::build(3, {{0, 1}, {0, 1}}, {{0, 2}, {2, 0}});
  CHECK(d.directed().size() == 1);
  CHECK(d.bidirected().size() == 1);
}

TEST_CASE("neighborhood sets") {
  auto g = MixedGraph::build(4, {{0, 1}, {1, 2}, {3, 2}}, {{1, 2}, {3, 2}});
  auto nb = g.neighborhood(2);
  CHECK(nb.pa == std::vector<NodeId>{1, 3});
  CHECK(nb.sib == std::vector<NodeId>{1, 3});
  CHECK(nb.ch.empty());
  CHECK(nb.anc == std::vector<NodeId>{0, 1, 3});

  auto iso = MixedGraph::build(3, {}, {});
  auto nb1 = iso.neighborhood(1);
  CHECK(nb1.pa.empty());
  CHECK(nb1.ch.empty());
  CHECK(nb1.sib.empty());
  CHECK(nb1.desc.empty());
  CHECK(nb1.anc.empty());

  auto chain = MixedGraph::build(3, {{0, 1}, {1, 2}}, {});
  CHECK(chain.neighborhood(0).desc == std::vector<NodeId>{1, 2});
  CHECK(chain.neighborhood(0).anc.empty());

  CHECK_THROWS_AS(g.neighborhood(9), Error);
}

TEST_CASE("topological order is deterministic with min-index tie break") {
  auto chain = MixedGraph::build(3, {{0, 1}, {1, 2}}, {});
  CHECK(chain.topological_order() == std::vector<NodeId>{0, 1, 2});

  auto empty = MixedGraph::build(3, {}, {});
  CHECK(empty.topological_order() == std::vector<NodeId>{0, 1, 2});

  auto ce1 = MixedGraph::build(4, {{0, 1}, {1, 2}, {3, 2}}, {{1, 2}, {3, 2}});
  CHECK(ce1.topological_order() == std::vector<NodeId>{0, 1, 3, 2});
}

TEST_CASE("structural invariants on random graphs") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    auto g = testutil::random_mixed(6, 0.35, 0.3, rng);
    for (NodeId i = 0; i < g.n(); ++i) {
      for (NodeId p : g.pa(i)) {
        bool in_desc = std::find(g.desc(i).begin(), g.desc(i).end(), p) != g.desc(i).end();
        CHECK(!in_desc);  // pa(i) and desc(i) disjoint in a DAG
      }
      for (NodeId s : g.sib(i)) {
        bool sym = std::find(g.sib(s).begin(), g.sib(s).end(), i) != g.sib(s).end();
        CHECK(sym);
      }
    }
    auto order = g.topological_order();
    std::vector<int> pos(g.n());
    for (int k = 0; k < g.n(); ++k) pos[order[k]] = k;
    for (const auto& [j, i] : g.directed()) CHECK(pos[j] < pos[i]);
  }
}

TEST_CASE("json round trip reproduces the edge sets") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    auto g = testutil::random_mixed(5, 0.4, 0.3, rng);
    auto back = graph_from_json(graph_to_json(g));
    CHECK(back.same_edges(g));
  }
  std::map<NodeId, std::string> lab{{0, "Z"}, {1, "T"}};
  auto g = MixedGraph::build(2, {{0, 1}}, {}, lab);
  auto back = graph_from_json(graph_to_json(g));
  CHECK(back.label(0) == "Z");
  CHECK(back.node_by_label("T") == NodeId{1});
}
