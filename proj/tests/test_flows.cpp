#include "doctest.h"
#include "helpers.hpp"
#include "obsnet/flows.hpp"
#include "obsnet/pipeline.hpp"
#include "oracles.hpp"

using namespace obsnet;
using namespace obsnet::testhelp;

TEST_CASE("max_flow on a single arc") {
  FlowNetwork net;
  net.n_nodes = 2;
  net.arcs.push_back({0, 1, 3});
  net.source = 0;
  net.sinks = {1};
  CHECK(max_flow(net) == 3);
}

TEST_CASE("max_flow on a unit diamond") {
  FlowNetwork net;
  net.n_nodes = 4;  // s=0, a=1, b=2, t=3
  net.arcs = {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}};
  net.source = 0;
  net.sinks = {3};
  CHECK(max_flow(net) == 2);
}

TEST_CASE("max_flow with no outgoing arcs is zero") {
  FlowNetwork net;
  net.n_nodes = 2;
  net.source = 0;
  net.sinks = {1};
  CHECK(max_flow(net) == 0);
}

TEST_CASE("max_flow rejects source equal to sink") {
  FlowNetwork net;
  net.n_nodes = 1;
  net.source = 0;
  net.sinks = {0};
  CHECK_THROWS_AS(max_flow(net), error);
}

TEST_CASE("sensor_disjoint_paths on the worked examples") {
  CHECK(sensor_disjoint_paths(twin_route_graph(), {Role::Sensor, 0}) == 2);
  CHECK(sensor_disjoint_paths(chain_graph(), {Role::Sensor, 0}) == 1);

  // chain x1 -> x2 -> q1: x2 is a unit-capacity cut node
  PhysicalGraph chain2 = make_graph(2, 1,
                                    {{Role::Sensor, 0, Role::Sensor, 1, "1"},
                                     {Role::Sensor, 1, Role::Backbone, 0, "1"},
                                     {Role::Backbone, 0, Role::Fusion, 0, "1"}});
  CHECK(sensor_disjoint_paths(chain2, {Role::Sensor, 0}) == 1);
  CHECK(sensor_disjoint_paths(chain2, {Role::Sensor, 1}) == 1);
}

TEST_CASE("sensor_disjoint_paths of an isolated sensor is zero") {
  PhysicalGraph g = make_graph(2, 1,
                               {{Role::Sensor, 0, Role::Backbone, 0, "1"},
                                {Role::Backbone, 0, Role::Fusion, 0, "1"}});
  CHECK(sensor_disjoint_paths(g, {Role::Sensor, 1}) == 0);
}

TEST_CASE("max_robustness on the worked examples") {
  auto mk_twin = max_robustness(twin_route_graph());
  REQUIRE(mk_twin.has_value());
  CHECK(*mk_twin == 1);

  auto mk_chain = max_robustness(chain_graph());
  REQUIRE(mk_chain.has_value());
  CHECK(*mk_chain == 0);
}

TEST_CASE("max_robustness is infeasible without a route") {
  PhysicalGraph isolated = make_graph(2, 1,
                                      {{Role::Sensor, 0, Role::Backbone, 0, "1"},
                                       {Role::Backbone, 0, Role::Fusion, 0, "1"}});
  CHECK_FALSE(max_robustness(isolated).has_value());

  // backbone that terminates sensor links but cannot reach z
  PhysicalGraph stuck = make_graph(1, 2,
                                   {{Role::Sensor, 0, Role::Backbone, 0, "1"},
                                    {Role::Sensor, 0, Role::Backbone, 1, "1"},
                                    {Role::Backbone, 0, Role::Fusion, 0, "1"}});
  CHECK_FALSE(max_robustness(stuck).has_value());
}

TEST_CASE("parallel sensor-backbone links count as separate routes") {
  PhysicalGraph g = make_graph(1, 1,
                               {{Role::Sensor, 0, Role::Backbone, 0, "1"},
                                {Role::Sensor, 0, Role::Backbone, 0, "4"},
                                {Role::Backbone, 0, Role::Fusion, 0, "1"}});
  CHECK(sensor_disjoint_paths(g, {Role::Sensor, 0}) == 2);
  auto mk = max_robustness(g);
  REQUIRE(mk.has_value());
  CHECK(*mk == 1);
}

TEST_CASE("local_node_connectivity basics") {
  SimpleDigraph path;
  path.n_nodes = 3;
  path.arcs = {{0, 1}, {1, 2}};
  CHECK(local_node_connectivity(path, 0, 2) == 1);

  SimpleDigraph split;
  split.n_nodes = 2;
  CHECK(local_node_connectivity(split, 0, 1) == 0);
}

TEST_CASE("local_node_connectivity on the twin-route dynamic graph") {
  PhysicalGraph g = twin_route_graph();
  DynamicGraph gd = build_dynamic_graph(g, backbone_shortest_paths(g));
  SimpleDigraph sd = simple_from_dynamic(gd);
  int fusion = gd.n_sensors + static_cast<int>(gd.outputs.size());
  CHECK(local_node_connectivity(sd, 0, fusion) == 2);
}

TEST_CASE("local_node_connectivity matches exhaustive path packing") {
  rng r(2024);
  int checked = 0;
  for (int i = 0; i < 120; ++i) {
    SimpleDigraph g = random_simple_digraph(r, 2, 6, 0.35, 0.1);
    int u = 0, v = g.n_nodes - 1;
    CHECK(local_node_connectivity(g, u, v) == oracle::disjoint_paths(g, u, v));
    ++checked;
  }
  CHECK(checked == 120);
}

TEST_CASE("adding an arc never lowers connectivity") {
  rng r(77);
  for (int i = 0; i < 40; ++i) {
    SimpleDigraph g = random_simple_digraph(r, 3, 6, 0.3, 0.0);
    int before = local_node_connectivity(g, 0, g.n_nodes - 1);
    g.arcs.emplace_back(0, static_cast<int>(1 + r.next_below(g.n_nodes - 1)));
    int after = local_node_connectivity(g, 0, g.n_nodes - 1);
    CHECK(after >= before);
  }
}
