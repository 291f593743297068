#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtr/linalg.hpp"
#include "rtr/netlist.hpp"

namespace rtr {

// =====================================================================
// Complex-valued modified nodal analysis.
//
// Unknown ordering is deterministic: node voltages in first-appearance
// order, then inductor branch currents, then source branch currents,
// both in file order. Branch currents flow from the element's first
// node to its second (for sources: into the positive terminal, through
// the source, out the negative one, the usual SPICE sign).
// Coupled inductors stamp -jwM into each other's branch rows with
// M = k * sqrt(L1 * L2); the first node of each inductor is the dotted
// terminal.
// =====================================================================

struct AssembledSystem {
  std::vector<std::string> nodes;          // non-ground, first-appearance order
  std::vector<std::string> branch_elems;   // inductors then sources, file order
  std::vector<std::string> unknowns;       // labels, "V(node)" / "I(name)"
  ComplexMatrix a;
  std::vector<Complex> b;
};

struct AcSolution {
  double omega = 0.0;
  std::map<std::string, Complex> node_voltages;   // ground excluded
  std::map<std::string, Complex> branch_currents; // inductors and sources
  double condition_estimate = 1.0;

  // Ground reads as exactly zero.
  [[nodiscard]] Complex voltage(const std::string& node) const;
  [[nodiscard]] Complex current(const std::string& element) const;
};

class SolveError : public std::runtime_error {
 public:
  SolveError(double omega, double pivot, const std::string& what_arg)
      : std::runtime_error(what_arg), omega_(omega), pivot_(pivot) {}
  [[nodiscard]] double omega() const { return omega_; }
  [[nodiscard]] double pivot() const { return pivot_; }

 private:
  double omega_;
  double pivot_;
};

// Throws std::invalid_argument for an empty circuit, omega <= 0, or a
// circuit without any source.
[[nodiscard]] AssembledSystem assemble(const Circuit& circuit, double omega);

// Assembles and solves one frequency point. Singular systems (exact
// lossless resonance, floating nodes) raise SolveError naming the
// smallest pivot and the frequency.
[[nodiscard]] AcSolution solve_ac(const Circuit& circuit, double omega);

// Sum of complex power absorbed over all elements (Tellegen residual);
// magnitude should vanish against the source power for any consistent
// solution. Throws CircuitError when the solution does not match the
// circuit (missing nodes or branch currents).
[[nodiscard]] Complex power_balance(const Circuit& circuit, const AcSolution& solution);

// Complex power absorbed by the sources alone, the natural scale for
// the power_balance residual.
[[nodiscard]] Complex source_power(const Circuit& circuit, const AcSolution& solution);

// Largest per-node current-sum magnitude, recomputed from element laws
// rather than the assembled matrix, so it is an independent check.
[[nodiscard]] double kcl_residual(const Circuit& circuit, const AcSolution& solution);

// Largest branch-current magnitude in the solution, the scale for
// kcl_residual.
[[nodiscard]] double max_branch_current(const Circuit& circuit, const AcSolution& solution);

}  // namespace rtr
