#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtr {

// =====================================================================
// Netlist model
//
// A strict SPICE-like subset. Supported element lines:
//   R<name> n1 n2 value        resistor, ohms
//   L<name> n1 n2 value        inductor, henries
//   C<name> n1 n2 value        capacitor, farads
//   V<name> n+ n- AC mag [ph]  AC source, volts / degrees
//   K<name> Lref1 Lref2 k      coupling between two inductors, 0 < k <= 1
// Directives: .probe v(node)  and  .end
// Comments start with '*' or '#'. Node "0" is ground. Values accept the
// suffixes p n u m k meg (case-insensitive), applied as exact decimal
// exponent shifts so e.g. "10u" parses to exactly 1e-5.
// =====================================================================

enum class ElementKind { resistor, inductor, capacitor, ac_source, coupling };

struct Element {
  ElementKind kind{};
  std::string name;
  // For coupling elements these are the two referenced inductor names.
  std::array<std::string, 2> nodes;
  double value = 0.0;
  double phase_deg = 0.0;  // sources only

  bool operator==(const Element&) const = default;
};

struct Circuit {
  std::vector<Element> elements;
  std::vector<std::string> probes;  // node ids, in .probe order

  static constexpr const char* ground = "0";

  bool operator==(const Circuit&) const = default;

  [[nodiscard]] const Element* find(const std::string& name) const;
  // Non-ground nodes in first-appearance order (coupling lines add none).
  [[nodiscard]] std::vector<std::string> node_order() const;
  [[nodiscard]] std::size_t count(ElementKind kind) const;
  // Throws CircuitError if a non-ground node is unreachable from ground,
  // a probe names an unknown node, or a coupling references a missing
  // inductor. Builders call this; the parser checks only its own rules.
  void validate() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what_arg);
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Total over arbitrary bytes: every input yields a Circuit or a ParseError.
[[nodiscard]] Circuit parse_netlist(const std::string& text);

// Canonical emission; parse_netlist(emit_netlist(c)) == c exactly.
[[nodiscard]] std::string emit_netlist(const Circuit& circuit);

// Shortest decimal form that round-trips the double exactly, with the
// exponent normalized ("8", "0.002533", "1e-5"). Never emits suffixes.
[[nodiscard]] std::string format_value(double value);

}  // namespace rtr
