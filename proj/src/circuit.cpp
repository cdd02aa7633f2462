#include "mpqc/circuit.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace mpqc {

namespace {

const std::map<std::string, GateKind> kGateNames{
    {"H", GateKind::H},   {"P", GateKind::P}, {"PDG", GateKind::PDG}, {"X", GateKind::X},
    {"Z", GateKind::Z},   {"CNOT", GateKind::CNOT}, {"T", GateKind::T}};

const char* gate_name(GateKind k) {
  for (const auto& [name, kind] : kGateNames)
    if (kind == k) return name.c_str();
  return "?";
}

struct Tok {
  std::string text;
  std::size_t col;
};

std::vector<Tok> tokenize(const std::string& line) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::size_t parse_uint(const Tok& t, std::size_t line_no) {
  for (char c : t.text)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw CircuitParseError(CircuitParseError::Syntax, line_no, t.col,
                              "expected a number, got '" + t.text + "'");
  return static_cast<std::size_t>(std::stoull(t.text));
}

}  // namespace

std::vector<CircuitGate> Circuit::gates() const {
  std::vector<CircuitGate> out;
  for (const auto& s : steps)
    if (s.kind == Step::Gate) out.push_back(s.gate);
  return out;
}

Circuit Circuit::parse(const std::string& text) {
  Circuit c;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_wires = false;
  std::size_t declared = 0;

  // first pass: total wire count, so range errors can be told apart from
  // use-before-declare
  {
    std::istringstream scan(text);
    std::string l;
    std::size_t total = 0;
    while (std::getline(scan, l)) {
      auto toks = tokenize(l);
      if (toks.empty()) continue;
      if (toks[0].text == "WIRES" && toks.size() >= 2) {
        for (char ch : toks[1].text)
          if (!std::isdigit(static_cast<unsigned char>(ch))) { total = 0; break; }
        if (!toks[1].text.empty() && std::isdigit(static_cast<unsigned char>(toks[1].text[0])))
          total += std::stoull(toks[1].text);
      } else if (toks[0].text == "ANC") {
        total += 1;
      }
    }
    c.total_wires = total;
  }

  auto check_wire = [&](const Tok& t, std::size_t line_no_) -> std::size_t {
    const std::size_t w = parse_uint(t, line_no_);
    if (w == 0 || w > c.total_wires)
      throw CircuitParseError(CircuitParseError::WireOutOfRange, line_no_, t.col,
                              "wire " + t.text + " out of range (have " +
                                  std::to_string(c.total_wires) + ")");
    if (w > declared)
      throw CircuitParseError(CircuitParseError::UseBeforeDeclare, line_no_, t.col,
                              "wire " + t.text + " used before its declaration");
    return w - 1;
  };

  while (std::getline(in, line)) {
    ++line_no;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0].text;

    if (head == "WIRES") {
      if (have_wires)
        throw CircuitParseError(CircuitParseError::Syntax, line_no, toks[0].col,
                                "duplicate WIRES statement");
      if (toks.size() != 2)
        throw CircuitParseError(CircuitParseError::Syntax, line_no, toks[0].col,
                                "WIRES takes one count");
      c.input_wires = parse_uint(toks[1], line_no);
      declared = c.input_wires;
      have_wires = true;
      continue;
    }
    if (!have_wires)
      throw CircuitParseError(CircuitParseError::Syntax, line_no, toks[0].col,
                              "WIRES must come first");

    if (head == "ANC") {
      if (toks.size() != 2)
        throw CircuitParseError(CircuitParseError::Syntax, line_no, toks[0].col,
                                "ANC takes one wire index");
      const std::size_t w = parse_uint(toks[1], line_no);
      if (w != declared + 1)
        throw CircuitParseError(CircuitParseError::Syntax, line_no, toks[1].col,
                                "ancilla wires must be declared in order; expected " +
                                    std::to_string(declared + 1));
      ++declared;
      Step st;
      st.kind = Step::Anc;
      st.anc_wire = w - 1;
      c.steps.push_back(st);
      continue;
    }
    if (head == "OUT") {
      if (toks.size() != 3)
        throw CircuitParseError(CircuitParseError::Syntax, line_no, toks[0].col,
                                "OUT takes wire and node");
      const std::size_t w = check_wire(toks[1], line_no);
      const std::size_t node = parse_uint(toks[2], line_no);
      if (node == 0)
        throw CircuitParseError(CircuitParseError::Syntax, line_no, toks[2].col,
                                "nodes are numbered from 1");
      c.outputs.emplace_back(w, node - 1);
      continue;
    }

    auto it = kGateNames.find(head);
    if (it == kGateNames.end())
      throw CircuitParseError(CircuitParseError::UnknownGate, line_no, toks[0].col,
                              "unknown gate '" + head + "'");
    const bool two = it->second == GateKind::CNOT;
    if (toks.size() != (two ? 3u : 2u))
      throw CircuitParseError(CircuitParseError::Syntax, line_no, toks[0].col,
                              std::string(head) + " takes " + (two ? "two wires" : "one wire"));
    Step st;
    st.kind = Step::Gate;
    st.gate.kind = it->second;
    st.gate.a = check_wire(toks[1], line_no);
    if (two) {
      st.gate.b = check_wire(toks[2], line_no);
      if (st.gate.a == st.gate.b)
        throw CircuitParseError(CircuitParseError::Syntax, line_no, toks[2].col,
                                "CNOT control equals target");
    }
    c.steps.push_back(st);
  }
  if (!have_wires)
    throw CircuitParseError(CircuitParseError::Syntax, 1, 1, "missing WIRES statement");
  return c;
}

Circuit Circuit::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CircuitParseError(CircuitParseError::Syntax, 0, 0, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string Circuit::print() const {
  std::ostringstream out;
  out << "WIRES " << input_wires << '\n';
  for (const auto& s : steps) {
    if (s.kind == Step::Anc) {
      out << "ANC " << s.anc_wire + 1 << '\n';
    } else {
      out << gate_name(s.gate.kind) << ' ' << s.gate.a + 1;
      if (s.gate.kind == GateKind::CNOT) out << ' ' << s.gate.b + 1;
      out << '\n';
    }
  }
  for (const auto& [w, node] : outputs) out << "OUT " << w + 1 << ' ' << node + 1 << '\n';
  return out.str();
}

CircuitStats validate_and_stats(const Circuit& c, std::size_t n) {
  if (c.input_wires > n)
    throw CircuitParseError(CircuitParseError::WireOutOfRange, 0, 0,
                            "circuit has more input wires than network nodes");
  CircuitStats st;
  std::vector<std::size_t> wire_depth(c.total_wires, 0);
  for (const auto& s : c.steps) {
    if (s.kind == Circuit::Step::Anc) {
      ++st.ancilla_count;
      continue;
    }
    const auto& g = s.gate;
    if (g.kind == GateKind::T) ++st.t_count;
    if (g.kind == GateKind::CNOT) {
      const std::size_t d = std::max(wire_depth[g.a], wire_depth[g.b]) + 1;
      wire_depth[g.a] = wire_depth[g.b] = d;
    } else {
      wire_depth[g.a] += 1;
    }
  }
  for (auto d : wire_depth) st.depth = std::max(st.depth, d);
  std::vector<bool> seen_wire(c.total_wires, false);
  for (const auto& [w, node] : c.outputs) {
    if (node >= n)
      throw CircuitParseError(CircuitParseError::WireOutOfRange, 0, 0,
                              "OUT node exceeds network size");
    if (seen_wire[w])
      throw CircuitParseError(CircuitParseError::Syntax, 0, 0,
                              "wire assigned to two outputs");
    seen_wire[w] = true;
  }
  return st;
}

}  // namespace mpqc
