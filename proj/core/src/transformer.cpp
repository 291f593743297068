#include "rtr/transformer.hpp"

#include <cmath>
#include <stdexcept>

namespace rtr {

double TransformerParams::mutual() const { return k * std::sqrt(l1 * l2); }

void TransformerParams::validate() const {
  if (!(l1 > 0.0)) throw std::invalid_argument("transformer: L1 must be positive");
  if (!(l2 > 0.0)) throw std::invalid_argument("transformer: L2 must be positive");
  if (!(k > 0.0) || k > 1.0)
    throw std::invalid_argument("transformer: k must lie in (0, 1]");
  if (r_w < 0.0) throw std::invalid_argument("transformer: R_w must be nonnegative");
  if (c_par < 0.0) throw std::invalid_argument("transformer: C_par must be nonnegative");
}

Complex epsilon_closed_form(const TransformerParams& params, double c3, double r_s,
                            double omega) {
  params.validate();
  if (!(omega > 0.0)) throw std::invalid_argument("epsilon: omega must be positive");
  if (!(c3 > 0.0)) throw std::invalid_argument("epsilon: C3 must be positive");
  (void)r_s;  // cancels, see header

  const Complex jw(0.0, omega);
  const Complex z_l = params.r_w + jw * params.l1;  // winding branch
  const Complex z_c3 = 1.0 / (jw * c3);
  const Complex jwm = jw * params.mutual();
  if (params.c_par == 0.0) {
    // eps = (jwM - jwL1 - R_w) / (R_w + jwL1 + Z_C3)
    return (jwm - z_l) / (z_l + z_c3);
  }
  // With C_par across the winding branch the denominator picks up the
  // parallel combination; written multiplied through by Z_cpar so the
  // expression stays regular at the parallel-resonance point.
  const Complex z_cp = 1.0 / (jw * params.c_par);
  const Complex denom = z_l * z_cp + z_c3 * (z_l + z_cp);
  return (jwm - z_l) * z_cp / denom;
}

}  // namespace rtr
