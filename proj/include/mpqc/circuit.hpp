#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpqc {

struct CircuitParseError : std::runtime_error {
  enum Kind { Syntax, UnknownGate, WireOutOfRange, UseBeforeDeclare };
  CircuitParseError(Kind k, std::size_t line, std::size_t col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        kind(k), line(line), col(col) {}
  Kind kind;
  std::size_t line, col;
};

enum class GateKind { H, P, PDG, X, Z, CNOT, T };

struct CircuitGate {
  GateKind kind;
  std::size_t a = 0;  // wire (0-based)
  std::size_t b = 0;  // CNOT target
};

// Circuit in the Cliff+T basis. Text format, one statement per line:
//   WIRES k        declares k input wires (wire i belongs to node i)
//   ANC w          declares ancilla wire w (fresh |0>, next free index)
//   <GATE> w [w2]  H P PDG X Z T CNOT
//   OUT w node     terminal assignment of wire w to a node
// Wires and nodes are 1-based in the text format. '#' starts a comment.
struct Circuit {
  struct Step {
    enum Kind { Gate, Anc } kind;
    CircuitGate gate;       // when kind == Gate
    std::size_t anc_wire;   // when kind == Anc
  };

  std::size_t input_wires = 0;
  std::size_t total_wires = 0;
  std::vector<Step> steps;
  std::vector<CircuitGate> gates() const;
  // outputs[i] = {wire, node}, both 0-based
  std::vector<std::pair<std::size_t, std::size_t>> outputs;

  static Circuit parse(const std::string& text);
  static Circuit load(const std::string& path);
  std::string print() const;
};

struct CircuitStats {
  std::size_t t_count = 0;
  std::size_t ancilla_count = 0;
  std::size_t depth = 0;
  // kappa = n + #T + #ancillas, the verification-count factor in the
  // protocol's security bound
  std::size_t kappa(std::size_t n) const { return n + t_count + ancilla_count; }
};

// Validates wire indices and OUT assignments against an n-node network and
// recounts the statistics from the gate list.
CircuitStats validate_and_stats(const Circuit& c, std::size_t n);

}  // namespace mpqc
