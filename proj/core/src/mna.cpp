#include "rtr/mna.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace rtr {

namespace {

Complex element_current(const Element& e, const AcSolution& sol) {
  switch (e.kind) {
    case ElementKind::resistor:
      return (sol.voltage(e.nodes[0]) - sol.voltage(e.nodes[1])) / e.value;
    case ElementKind::capacitor:
      return (sol.voltage(e.nodes[0]) - sol.voltage(e.nodes[1])) *
             Complex(0.0, sol.omega * e.value);
    case ElementKind::inductor:
    case ElementKind::ac_source:
      return sol.current(e.name);
    case ElementKind::coupling:
      return Complex{};
  }
  return Complex{};
}

}  // namespace

Complex AcSolution::voltage(const std::string& node) const {
  if (node == Circuit::ground) return Complex{};
  auto it = node_voltages.find(node);
  if (it == node_voltages.end())
    throw CircuitError("no solved voltage for node '" + node + "'");
  return it->second;
}

Complex AcSolution::current(const std::string& element) const {
  auto it = branch_currents.find(element);
  if (it == branch_currents.end())
    throw CircuitError("no solved branch current for element '" + element + "'");
  return it->second;
}

AssembledSystem assemble(const Circuit& circuit, double omega) {
  if (circuit.elements.empty()) throw std::invalid_argument("assemble: empty circuit");
  if (!(omega > 0.0)) throw std::invalid_argument("assemble: omega must be positive");
  if (circuit.count(ElementKind::ac_source) == 0)
    throw std::invalid_argument("assemble: circuit has no source");

  AssembledSystem sys;
  sys.nodes = circuit.node_order();
  std::map<std::string, std::size_t> node_idx;
  for (std::size_t i = 0; i < sys.nodes.size(); ++i) node_idx[sys.nodes[i]] = i;

  std::map<std::string, std::size_t> branch_idx;
  for (const auto& e : circuit.elements)
    if (e.kind == ElementKind::inductor) {
      branch_idx[e.name] = sys.nodes.size() + sys.branch_elems.size();
      sys.branch_elems.push_back(e.name);
    }
  for (const auto& e : circuit.elements)
    if (e.kind == ElementKind::ac_source) {
      branch_idx[e.name] = sys.nodes.size() + sys.branch_elems.size();
      sys.branch_elems.push_back(e.name);
    }

  const std::size_t n = sys.nodes.size() + sys.branch_elems.size();
  sys.a = ComplexMatrix(n);
  sys.b.assign(n, Complex{});
  for (const auto& node : sys.nodes) sys.unknowns.push_back("V(" + node + ")");
  for (const auto& name : sys.branch_elems) sys.unknowns.push_back("I(" + name + ")");

  // -1 marks ground: its row and column are simply dropped.
  auto row_of = [&](const std::string& node) -> std::ptrdiff_t {
    if (node == Circuit::ground) return -1;
    return static_cast<std::ptrdiff_t>(node_idx.at(node));
  };
  auto add = [&](std::ptrdiff_t i, std::ptrdiff_t j, Complex v) {
    if (i >= 0 && j >= 0) sys.a.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) += v;
  };

  for (const auto& e : circuit.elements) {
    const std::ptrdiff_t n1 = e.kind == ElementKind::coupling ? -1 : row_of(e.nodes[0]);
    const std::ptrdiff_t n2 = e.kind == ElementKind::coupling ? -1 : row_of(e.nodes[1]);
    switch (e.kind) {
      case ElementKind::resistor:
      case ElementKind::capacitor: {
        const Complex y = e.kind == ElementKind::resistor
                              ? Complex(1.0 / e.value, 0.0)
                              : Complex(0.0, omega * e.value);
        add(n1, n1, y);
        add(n2, n2, y);
        add(n1, n2, -y);
        add(n2, n1, -y);
        break;
      }
      case ElementKind::inductor: {
        const auto r = static_cast<std::ptrdiff_t>(branch_idx.at(e.name));
        add(n1, r, 1.0);
        add(n2, r, -1.0);
        add(r, n1, 1.0);
        add(r, n2, -1.0);
        add(r, r, Complex(0.0, -omega * e.value));
        break;
      }
      case ElementKind::ac_source: {
        const auto r = static_cast<std::ptrdiff_t>(branch_idx.at(e.name));
        add(n1, r, 1.0);
        add(n2, r, -1.0);
        add(r, n1, 1.0);
        add(r, n2, -1.0);
        sys.b[static_cast<std::size_t>(r)] =
            std::polar(e.value, e.phase_deg * std::numbers::pi / 180.0);
        break;
      }
      case ElementKind::coupling: {
        const Element* la = circuit.find(e.nodes[0]);
        const Element* lb = circuit.find(e.nodes[1]);
        if (la == nullptr || lb == nullptr || la->kind != ElementKind::inductor ||
            lb->kind != ElementKind::inductor)
          throw CircuitError("coupling '" + e.name + "' references a missing inductor");
        const double m = e.value * std::sqrt(la->value * lb->value);
        const auto ra = static_cast<std::ptrdiff_t>(branch_idx.at(la->name));
        const auto rb = static_cast<std::ptrdiff_t>(branch_idx.at(lb->name));
        add(ra, rb, Complex(0.0, -omega * m));
        add(rb, ra, Complex(0.0, -omega * m));
        break;
      }
    }
  }
  return sys;
}

AcSolution solve_ac(const Circuit& circuit, double omega) {
  AssembledSystem sys = assemble(circuit, omega);
  LuSolution lu;
  try {
    lu = lu_solve(std::move(sys.a), std::move(sys.b));
  } catch (const SingularMatrixError& e) {
    throw SolveError(omega, e.pivot(),
                     "singular system at omega = " + std::to_string(omega) +
                         " rad/s (f = " + std::to_string(omega / (2.0 * std::numbers::pi)) +
                         " Hz): " + e.what());
  }
  AcSolution sol;
  sol.omega = omega;
  sol.condition_estimate = lu.condition_estimate();
  for (std::size_t i = 0; i < sys.nodes.size(); ++i) sol.node_voltages[sys.nodes[i]] = lu.x[i];
  for (std::size_t i = 0; i < sys.branch_elems.size(); ++i)
    sol.branch_currents[sys.branch_elems[i]] = lu.x[sys.nodes.size() + i];
  return sol;
}

Complex power_balance(const Circuit& circuit, const AcSolution& solution) {
  Complex total{};
  for (const auto& e : circuit.elements) {
    if (e.kind == ElementKind::coupling) continue;
    const Complex v = solution.voltage(e.nodes[0]) - solution.voltage(e.nodes[1]);
    total += v * std::conj(element_current(e, solution));
  }
  return total;
}

Complex source_power(const Circuit& circuit, const AcSolution& solution) {
  Complex total{};
  for (const auto& e : circuit.elements)
    if (e.kind == ElementKind::ac_source) {
      const Complex v = solution.voltage(e.nodes[0]) - solution.voltage(e.nodes[1]);
      total += v * std::conj(solution.current(e.name));
    }
  return total;
}

double kcl_residual(const Circuit& circuit, const AcSolution& solution) {
  std::map<std::string, Complex> node_sum;
  for (const auto& node : circuit.node_order()) node_sum[node] = Complex{};
  for (const auto& e : circuit.elements) {
    if (e.kind == ElementKind::coupling) continue;
    const Complex i = element_current(e, solution);
    if (auto it = node_sum.find(e.nodes[0]); it != node_sum.end()) it->second += i;
    if (auto it = node_sum.find(e.nodes[1]); it != node_sum.end()) it->second -= i;
  }
  double worst = 0.0;
  for (const auto& [node, sum] : node_sum) worst = std::max(worst, std::abs(sum));
  return worst;
}

double max_branch_current(const Circuit& circuit, const AcSolution& solution) {
  double largest = 0.0;
  for (const auto& e : circuit.elements) {
    if (e.kind == ElementKind::coupling) continue;
    largest = std::max(largest, std::abs(element_current(e, solution)));
  }
  return largest;
}

}  // namespace rtr
