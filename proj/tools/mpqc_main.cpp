// mpqc: protocol simulator CLI.
//
//   mpqc run --scenario steane-cnot --seed 7 --out reports/
//   mpqc run --circuit examples.mpqc --n 7 --s 2 --backend frame \
//            --adversary z-spray --corrupt 3 --seed 1 --out reports/
//   mpqc code-info --code mycode.txt
//   mpqc security-budget --circuit examples.mpqc --n 7 --s 4
//   mpqc scenarios

#include <CLI11.hpp>
#include <iostream>

#include "mpqc/harness.hpp"

using namespace mpqc;

namespace {

int cmd_run(const std::string& scenario, const std::string& circuit_path, std::size_t n,
            std::size_t s, std::uint64_t seed, std::uint64_t adv_seed, const std::string& backend,
            const std::string& adversary, const std::vector<std::size_t>& corrupt,
            const std::string& out_dir, std::size_t seeds, const std::string& inputs) {
  ExperimentResult res;
  if (!scenario.empty()) {
    res = run_scenario(scenario, seed, out_dir);
  } else {
    if (circuit_path.empty()) {
      std::cerr << "need --scenario or --circuit\n";
      return 2;
    }
    ExperimentSpec spec;
    spec.cfg.n = n;
    spec.cfg.s = s;
    spec.cfg.adv_seed = adv_seed;
    if (backend == "sv") {
      spec.cfg.backend = BackendKind::Statevector;
      spec.cfg.level = 1;
    } else if (backend == "tableau") {
      spec.cfg.backend = BackendKind::Tableau;
    } else if (backend == "frame") {
      spec.cfg.backend = BackendKind::Frame;
    } else {
      std::cerr << "unknown backend: " << backend << "\n";
      return 2;
    }
    spec.circuit = Circuit::load(circuit_path);
    spec.adversary = adversary;
    for (auto c : corrupt) {
      if (c == 0 || c > n) {
        std::cerr << "corrupt ids are 1-based node numbers\n";
        return 2;
      }
      spec.corrupt.insert(c - 1);
    }
    spec.out_dir = out_dir;
    spec.seeds.clear();
    for (std::size_t i = 0; i < seeds; ++i) spec.seeds.push_back(seed + i);
    // inputs: comma-separated 0/1/+/m labels, default all |0>
    for (std::size_t w = 0; w < spec.circuit.input_wires; ++w) {
      char label = w < inputs.size() ? inputs[w] : '0';
      switch (label) {
        case '0': spec.inputs.push_back(InputState::zero()); break;
        case '1': spec.inputs.push_back(InputState::one()); break;
        case '+': spec.inputs.push_back(InputState::plus()); break;
        case 'm': spec.inputs.push_back(InputState::magic()); break;
        default:
          std::cerr << "input labels are 0, 1, + or m\n";
          return 2;
      }
    }
    res = run_experiment(spec);
  }
  for (const auto& line : res.lines) std::cout << line << "\n";
  if (out_dir.empty()) std::cout << res.json_report << "\n";
  return res.pass ? 0 : 1;
}

int cmd_code_info(const std::string& path) {
  CssCode code = path.empty() ? CssCode::steane() : [&] {
    auto classical = BinaryCode::load(path);
    return CssCode::build(classical, classical);
  }();
  std::cout << "[[" << code.n() << ",1," << code.distance() << "]] CSS code, t = " << code.t()
            << "\n";
  std::cout << "transversal Cliffords: " << (code.transversal_clifford() ? "yes" : "no") << "\n";
  const auto& rep = code.check_transversal_cliffords();
  for (const auto& r : rep.reasons) std::cout << "  reason: " << r << "\n";
  std::cout << "logical X weight " << rep.logical_x_weight << ", logical Z weight "
            << rep.logical_z_weight << "\n";
  const std::pair<LogicalGateName, const char*> gates[] = {
      {LogicalGateName::H, "H"},       {LogicalGateName::P, "P"},
      {LogicalGateName::CNOT, "CNOT"}, {LogicalGateName::MeasZ, "MeasZ"},
      {LogicalGateName::CG, "C-G"},    {LogicalGateName::T, "T"}};
  for (const auto& [g, name] : gates) {
    auto lg = code.logical_gate(g);
    std::cout << "  " << name << (lg.transversal ? ", transversal: " : ", via ") << lg.physical
              << "\n";
  }
  return 0;
}

int cmd_security_budget(const std::string& circuit_path, std::size_t n, std::size_t s,
                        std::uint64_t seed) {
  Circuit circuit = circuit_path.empty()
                        ? Circuit::parse("WIRES 2\nCNOT 1 2\nOUT 1 1\nOUT 2 2\n")
                        : Circuit::load(circuit_path);
  auto b = security_budget(n, s, circuit, 10000, seed);
  std::cout << "kappa = " << b.kappa << "\n";
  std::cout << "security bound: " << b.bound << "\n";
  std::cout << "measured single-round detection probability (|0> target): "
            << b.measured_detection << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secure multi-party quantum computation simulator"};
  app.require_subcommand(1);

  std::string scenario, circuit_path, backend = "frame", adversary = "honest", out_dir, inputs;
  std::size_t n = 7, s = 2, seeds = 1;
  std::uint64_t seed = 1, adv_seed = 0;
  std::vector<std::size_t> corrupt;

  auto* run = app.add_subcommand("run", "run a scenario or a custom experiment");
  run->add_option("--scenario", scenario, "canned scenario name");
  run->add_option("--circuit", circuit_path, "circuit file (.mpqc)");
  run->add_option("--n", n, "node count");
  run->add_option("--s", s, "security parameter");
  run->add_option("--seed", seed, "base seed");
  run->add_option("--seeds", seeds, "number of consecutive seeds");
  run->add_option("--adv-seed", adv_seed, "separate adversary stream seed");
  run->add_option("--backend", backend, "sv | tableau | frame");
  run->add_option("--adversary", adversary, "strategy name from the corpus");
  run->add_option("--corrupt", corrupt, "corrupted node ids (1-based)");
  run->add_option("--inputs", inputs, "input labels per wire, e.g. +0");
  run->add_option("--out", out_dir, "report output directory");

  std::string code_path;
  auto* info = app.add_subcommand("code-info", "transversality report for a CSS code");
  info->add_option("--code", code_path, "classical code file (default: built-in Hamming)");

  auto* budget = app.add_subcommand("security-budget", "kappa and the security bound");
  budget->add_option("--circuit", circuit_path, "circuit file");
  budget->add_option("--n", n, "node count");
  budget->add_option("--s", s, "security parameter");
  budget->add_option("--seed", seed, "seed for the measured detection rate");

  auto* list = app.add_subcommand("scenarios", "list canned scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(scenario, circuit_path, n, s, seed, adv_seed, backend, adversary, corrupt,
                     out_dir, seeds, inputs);
    if (info->parsed()) return cmd_code_info(code_path);
    if (budget->parsed()) return cmd_security_budget(circuit_path, n, s, seed);
    if (list->parsed()) {
      for (const auto& name : scenario_names()) std::cout << name << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
