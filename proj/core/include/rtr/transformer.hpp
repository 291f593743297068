#pragma once

#include "rtr/linalg.hpp"

namespace rtr {

// Lumped transformer model: series winding resistance R_w, coupling k
// applied as mutual inductance M = k * sqrt(L1 * L2), optional parasitic
// capacitance C_par across the primary winding terminals. The turns
// ratio is carried implicitly by sqrt(L2 / L1).
struct TransformerParams {
  double l1 = 0.0;     // primary inductance, H
  double l2 = 0.0;     // secondary inductance, H
  double k = 1.0;      // coupling coefficient, (0, 1]
  double r_w = 0.0;    // primary winding resistance, ohms
  double c_par = 0.0;  // primary parallel parasitic, F

  [[nodiscard]] bool ideal() const { return k == 1.0 && r_w == 0.0 && c_par == 0.0; }
  // Leakage referred to the primary, (1 - k^2) * L1. Derived, never stored.
  [[nodiscard]] double leakage() const { return (1.0 - k * k) * l1; }
  [[nodiscard]] double mutual() const;

  void validate() const;  // throws std::invalid_argument
};

// Complementarity error eps(jw) = H_LF + H_HF - 1 for the resonant
// transformer router loop, from the series-loop algebra with the open
// secondary's voltage jwM * I_primary. Transfers are referenced to the
// input terminal after r_s, so r_s cancels from the ratio; the parameter
// stays for interface symmetry with the loop description.
// Throws std::invalid_argument for omega <= 0 or c3 <= 0.
[[nodiscard]] Complex epsilon_closed_form(const TransformerParams& params, double c3,
                                          double r_s, double omega);

}  // namespace rtr
