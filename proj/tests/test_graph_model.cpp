#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "obsnet/graph_model.hpp"

using namespace obsnet;
using namespace obsnet::testhelp;

namespace {

const char* kChainDoc = R"({
  "sensors": ["x1"],
  "backbone": ["q1"],
  "fusion": "z",
  "edges": [
    {"from": "x1", "to": "q1", "cost": 2.0},
    {"from": "q1", "to": "z", "cost": 1.0}
  ]
})";

}  // namespace

TEST_CASE("parse reads a plain document") {
  PhysicalGraph g = parse_physical_graph(kChainDoc);
  REQUIRE(g.n_sensors() == 1);
  REQUIRE(g.n_backbone() == 1);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].cost.micro == 2'000'000);
  CHECK(g.edges[1].cost.micro == 1'000'000);
  CHECK(g.edges[0].tail.role == Role::Sensor);
  CHECK(g.edges[0].head.role == Role::Backbone);
  CHECK(g.fusion_name == "z");
}

TEST_CASE("parse rejects a backbone-to-sensor edge") {
  const char* doc = R"({"sensors":["x1"],"backbone":["q1"],"fusion":"z",
    "edges":[{"from":"q1","to":"x1","cost":1}]})";
  CHECK_THROWS_WITH_AS(parse_physical_graph(doc), "disallowed edge role pair", error);
}

TEST_CASE("parse rejects other malformed documents") {
  CHECK_THROWS_AS(parse_physical_graph("not json"), error);
  CHECK_THROWS_AS(parse_physical_graph("[]"), error);
  // zero sensors
  CHECK_THROWS_AS(
      parse_physical_graph(R"({"sensors":[],"backbone":["q1"],"fusion":"z","edges":[]})"),
      error);
  // duplicate node names
  CHECK_THROWS_AS(parse_physical_graph(
                      R"({"sensors":["a","a"],"backbone":[],"fusion":"z","edges":[]})"),
                  error);
  // negative cost
  CHECK_THROWS_AS(
      parse_physical_graph(
          R"({"sensors":["x1"],"backbone":["q1"],"fusion":"z",
              "edges":[{"from":"x1","to":"q1","cost":-2}]})"),
      error);
  // unknown node
  CHECK_THROWS_AS(
      parse_physical_graph(
          R"({"sensors":["x1"],"backbone":["q1"],"fusion":"z",
              "edges":[{"from":"x1","to":"q9","cost":1}]})"),
      error);
}

TEST_CASE("tiny costs round half-up at the sixth digit") {
  const char* doc = R"({"sensors":["x1"],"backbone":["q1"],"fusion":"z",
    "edges":[{"from":"x1","to":"q1","cost":"0.0000004"},
             {"from":"q1","to":"z","cost":"0.0000005"}]})";
  PhysicalGraph g = parse_physical_graph(doc);
  CHECK(g.edges[0].cost.micro == 0);
  CHECK(g.edges[1].cost.micro == 1);
}

TEST_CASE("json serialization round trips") {
  for (const PhysicalGraph& g : {chain_graph(), twin_route_graph(), relay_graph()}) {
    PhysicalGraph back = parse_physical_graph(serialize(g, TextFormat::Json));
    CHECK(back.sensor_names == g.sensor_names);
    CHECK(back.backbone_names == g.backbone_names);
    CHECK(back.fusion_name == g.fusion_name);
    REQUIRE(back.edges.size() == g.edges.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      CHECK(back.edges[i].tail == g.edges[i].tail);
      CHECK(back.edges[i].head == g.edges[i].head);
      CHECK(back.edges[i].cost == g.edges[i].cost);
      CHECK(back.edges[i].edge_id == g.edges[i].edge_id);
    }
  }
}

TEST_CASE("dot export names nodes and labels costs") {
  std::string dot = serialize(chain_graph(), TextFormat::Dot);
  CHECK(dot.find("x1") != std::string::npos);
  CHECK(dot.find("q1") != std::string::npos);
  CHECK(dot.find("->") != std::string::npos);
  CHECK(dot.find("2") != std::string::npos);
}

TEST_CASE("explicit sensor self-loops are rejected") {
  PhysicalGraph g = chain_graph();
  g.edges.push_back({{Role::Sensor, 0}, {Role::Sensor, 0}, Cost{0}, 2});
  CHECK_THROWS_AS(validate_physical_graph(g), error);
}

TEST_CASE("random_geometric is deterministic and role-admissible") {
  PhysicalGraph a = random_geometric(12, 3, 0.5, CostModel::DistanceSquared, 99);
  PhysicalGraph b = random_geometric(12, 3, 0.5, CostModel::DistanceSquared, 99);
  PhysicalGraph c = random_geometric(12, 3, 0.5, CostModel::DistanceSquared, 100);
  CHECK(serialize(a, TextFormat::Json) == serialize(b, TextFormat::Json));
  CHECK(serialize(a, TextFormat::Json) != serialize(c, TextFormat::Json));
  CHECK_NOTHROW(validate_physical_graph(a));
  CHECK(a.n_sensors() == 12);
  CHECK(a.n_backbone() == 3);
}

TEST_CASE("random_geometric at full radius wires every admissible pair") {
  PhysicalGraph g = random_geometric(1, 1, std::sqrt(2.0), CostModel::DistanceSquared, 5);
  bool has_xq = false, has_qz = false;
  for (const Edge& e : g.edges) {
    if (g.edge_kind(e) == EdgeKind::SensorBackbone) has_xq = true;
    if (g.edge_kind(e) == EdgeKind::BackboneFusion) has_qz = true;
  }
  CHECK(has_xq);
  CHECK(has_qz);
}

TEST_CASE("random_geometric records generator metadata") {
  PhysicalGraph g = random_geometric(2, 1, 0.7, CostModel::DistanceSquared, 11);
  CHECK(g.meta_json.find("seed") != std::string::npos);
  CHECK(g.meta_json.find("radius") != std::string::npos);
}

TEST_CASE("edge ids from the test builders stay dense") {
  PhysicalGraph g = twin_route_graph();
  std::set<int> ids;
  for (const Edge& e : g.edges) ids.insert(e.edge_id);
  CHECK(ids == std::set<int>{0, 1, 2, 3});
}
