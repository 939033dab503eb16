#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "obsnet/combinatorial.hpp"
#include "obsnet/flows.hpp"
#include "obsnet/graph_model.hpp"
#include "obsnet/pipeline.hpp"
#include "obsnet/realization.hpp"
#include "obsnet/robustness.hpp"
#include "obsnet/structural.hpp"

namespace {

using namespace obsnet;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_format, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_format, "cannot write " + path);
  out << text;
  out.flush();
  if (!out) fail(errc::io_format, "cannot write " + path);
}

std::string decimal_units(Cost c) {
  std::string s = cost_to_string(c);
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

int exit_code(errc kind) {
  switch (kind) {
    case errc::infeasible:
      return 2;
    case errc::validation:
      return 3;
    case errc::io_format:
      return 4;
    default:
      return 1;
  }
}

const char* kind_word(errc kind) {
  switch (kind) {
    case errc::infeasible:
      return "infeasible";
    case errc::validation:
      return "validation";
    case errc::io_format:
      return "io_format";
    default:
      return "internal";
  }
}

void emit_error(errc kind, const std::string& message) {
  nlohmann::ordered_json body;
  body["error"]["kind"] = kind_word(kind);
  body["error"]["message"] = message;
  std::cerr << body.dump() << "\n";
}

CostModel parse_cost_model(const std::string& name) {
  if (name == "distance-squared") return CostModel::DistanceSquared;
  fail(errc::validation, "unknown cost model: " + name);
}

TextFormat parse_format(const std::string& name) {
  if (name == "json") return TextFormat::Json;
  if (name == "dot") return TextFormat::Dot;
  fail(errc::validation, "unknown format: " + name);
}

FieldVector parse_state_vector(const std::string& text, std::uint32_t p) {
  FieldVector out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(cell, &used);
    } catch (const std::exception&) {
      fail(errc::validation, "state entries must be integers: " + cell);
    }
    if (used != cell.size()) fail(errc::validation, "state entries must be integers: " + cell);
    if (v < 0 || v >= static_cast<long long>(p))
      fail(errc::validation, "state entry outside the field: " + cell);
    out.push_back(static_cast<std::uint32_t>(v));
  }
  if (out.empty()) fail(errc::validation, "state vector is empty");
  return out;
}

std::string name_of(const DesignSolution& sol, int column) {
  if (column >= 0 && column < static_cast<int>(sol.sensor_names.size()))
    return sol.sensor_names[column];
  return "#" + std::to_string(column + 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"design and analysis of robustly observable sensor networks"};
  app.require_subcommand(1);

  auto* cmd_generate = app.add_subcommand("generate", "write a random geometric instance");
  int gen_sensors = 0, gen_backbone = 0;
  double gen_radius = 0.0;
  std::string gen_cost = "distance-squared", gen_output, gen_format = "json";
  std::uint64_t gen_seed = 0;
  cmd_generate->add_option("--sensors", gen_sensors)->required();
  cmd_generate->add_option("--backbone", gen_backbone)->required();
  cmd_generate->add_option("--radius", gen_radius)->required();
  cmd_generate->add_option("--cost", gen_cost);
  cmd_generate->add_option("--seed", gen_seed)->required();
  cmd_generate->add_option("--output", gen_output)->required();
  cmd_generate->add_option("--format", gen_format);

  auto* cmd_design = app.add_subcommand("design", "compute the minimum-cost robust structure");
  std::string design_input, design_output, design_format = "json";
  int design_k = 0;
  cmd_design->add_option("--input", design_input)->required();
  cmd_design->add_option("--k", design_k)->required();
  cmd_design->add_option("--output", design_output)->required();
  cmd_design->add_option("--format", design_format);

  auto* cmd_verify = app.add_subcommand("verify", "re-check a design against sensor deletions");
  std::string verify_design;
  int verify_k = 0;
  cmd_verify->add_option("--design", verify_design)->required();
  cmd_verify->add_option("--k", verify_k)->required();

  auto* cmd_max_k = app.add_subcommand("max-k", "largest robustness the network supports");
  std::string maxk_input;
  cmd_max_k->add_option("--input", maxk_input)->required();

  auto* cmd_inst = app.add_subcommand("instantiate", "draw numeric dynamics for a design");
  std::string inst_design, inst_output;
  std::uint64_t inst_prime = 2147483647ULL, inst_seed = 0;
  int inst_retries = 16;
  bool inst_det = false;
  bool inst_seed_given = false;
  cmd_inst->add_option("--design", inst_design)->required();
  cmd_inst->add_option("--prime", inst_prime);
  cmd_inst->add_option("--seed", inst_seed)->each([&](const std::string&) { inst_seed_given = true; });
  cmd_inst->add_option("--retries", inst_retries);
  cmd_inst->add_flag("--deterministic", inst_det);
  cmd_inst->add_option("--output", inst_output);

  auto* cmd_sim = app.add_subcommand("simulate", "run the dynamics and write the output trace");
  std::string sim_system, sim_x0, sim_trace;
  int sim_steps = 0;
  cmd_sim->add_option("--system", sim_system)->required();
  cmd_sim->add_option("--x0", sim_x0)->required();
  cmd_sim->add_option("--steps", sim_steps)->required();
  cmd_sim->add_option("--trace", sim_trace);

  auto* cmd_rec = app.add_subcommand("recover", "reconstruct the initial state from a trace");
  std::string rec_system, rec_trace;
  cmd_rec->add_option("--system", rec_system)->required();
  cmd_rec->add_option("--trace", rec_trace)->required();

  auto* cmd_rob = app.add_subcommand("robustness", "Monte Carlo failure-probability curve");
  int rob_sensors = 0, rob_backbone = 0, rob_k = 0, rob_graphs = 0, rob_trials = 0;
  double rob_radius = 0.0;
  std::string rob_cost = "distance-squared", rob_output;
  std::uint64_t rob_seed = 0;
  cmd_rob->add_option("--sensors", rob_sensors)->required();
  cmd_rob->add_option("--backbone", rob_backbone)->required();
  cmd_rob->add_option("--radius", rob_radius)->required();
  cmd_rob->add_option("--cost", rob_cost);
  cmd_rob->add_option("--k", rob_k)->required();
  cmd_rob->add_option("--graphs", rob_graphs)->required();
  cmd_rob->add_option("--trials", rob_trials)->required();
  cmd_rob->add_option("--seed", rob_seed)->required();
  cmd_rob->add_option("--output", rob_output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error(errc::io_format, e.what());
    return 4;
  }

  try {
    if (cmd_generate->parsed()) {
      PhysicalGraph g = random_geometric(gen_sensors, gen_backbone, gen_radius,
                                         parse_cost_model(gen_cost), gen_seed);
      write_file(gen_output, serialize(g, parse_format(gen_format)));
      std::cout << "sensors " << g.n_sensors() << " backbone " << g.n_backbone() << " edges "
                << g.edges.size() << "\n";
    } else if (cmd_design->parsed()) {
      PhysicalGraph g = parse_physical_graph(read_file(design_input));
      DesignSolution sol = design(g, design_k);
      write_file(design_output, parse_format(design_format) == TextFormat::Json
                                    ? design_to_json(g, sol)
                                    : design_to_dot(g, sol));
      std::cout << "cost_per_output_sum " << decimal_units(sol.cost_per_output_sum) << "\n";
      std::cout << "cost_deduplicated " << decimal_units(sol.cost_deduplicated) << "\n";
    } else if (cmd_verify->parsed()) {
      DesignSolution sol = design_from_json(read_file(verify_design));
      RobustnessCheck check = robust_structural_observability(sol.structure, verify_k);
      if (check.ok) {
        std::cout << "ok: structurally observable under every deletion of up to "
                  << verify_k << " sensors\n";
      } else {
        std::cout << "counterexample {";
        for (std::size_t i = 0; i < check.counterexample.size(); ++i) {
          if (i) std::cout << ",";
          std::cout << name_of(sol, check.counterexample[i]);
        }
        std::cout << "}\n";
        emit_error(errc::validation, "a sensor deletion breaks structural observability");
        return 3;
      }
    } else if (cmd_max_k->parsed()) {
      PhysicalGraph g = parse_physical_graph(read_file(maxk_input));
      auto mk = max_robustness(g);
      if (!mk) {
        std::cout << "infeasible\n";
        emit_error(errc::infeasible, "some sensor has no disjoint route to the fusion centre");
        return 2;
      }
      std::cout << *mk << "\n";
    } else if (cmd_inst->parsed()) {
      DesignSolution sol = design_from_json(read_file(inst_design));
      PrimeField field(inst_prime);
      FieldSystem sys = [&] {
        if (inst_det) return instantiate_deterministic(sol.structure, field);
        if (!inst_seed_given)
          fail(errc::validation, "--seed is required for random instantiation");
        return instantiate_random(sol.structure, field, inst_seed, inst_retries);
      }();
      std::string text = system_to_json(sys);
      if (inst_output.empty())
        std::cout << text;
      else {
        write_file(inst_output, text);
        std::cout << "instantiated over GF(" << field.p() << ")\n";
      }
    } else if (cmd_sim->parsed()) {
      FieldSystem sys = system_from_json(read_file(sim_system));
      FieldVector x0 = parse_state_vector(sim_x0, sys.field.p());
      FieldMatrix trace = simulate(sys, x0, sim_steps);
      std::string text = trace_to_csv(trace);
      if (sim_trace.empty())
        std::cout << text;
      else {
        write_file(sim_trace, text);
        std::cout << "simulated " << sim_steps << " steps\n";
      }
    } else if (cmd_rec->parsed()) {
      FieldSystem sys = system_from_json(read_file(rec_system));
      FieldMatrix trace = trace_from_csv(read_file(rec_trace));
      RecoverResult result = recover_initial_state(sys, trace);
      if (!result.observable) {
        std::cout << "unobservable\n";
        emit_error(errc::infeasible, "observability matrix is rank deficient at this horizon");
        return 2;
      }
      for (std::size_t i = 0; i < result.x0.size(); ++i) {
        if (i) std::cout << ",";
        std::cout << result.x0[i];
      }
      std::cout << "\n";
    } else if (cmd_rob->parsed()) {
      RobustnessCurve curve = failure_curve(rob_sensors, rob_backbone, rob_radius,
                                            parse_cost_model(rob_cost), rob_k, rob_graphs,
                                            rob_trials, rob_seed);
      write_file(rob_output, curve_to_csv(curve));
      std::cout << "graphs " << rob_graphs << " trials " << rob_trials << " redraws "
                << curve.redraws << "\n";
    }
  } catch (const error& e) {
    emit_error(e.kind(), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    emit_error(errc::internal, e.what());
    return 1;
  }
  return 0;
}
