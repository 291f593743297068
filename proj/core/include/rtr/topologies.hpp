#pragma once

#include <utility>
#include <vector>

#include "rtr/netlist.hpp"
#include "rtr/transformer.hpp"

namespace rtr {

// =====================================================================
// Reference topologies.
//
// RTR: series C3 feeding a transformer primary; the junction node "lf"
// (across C3) is the low-frequency output, the open (buffered) secondary
// node "hf" is the high-frequency output. With k = 1, R_w = 0 and
// L2 = L1 the two transfers sum to exactly 1 at every frequency.
//
// LC2: conventional second-order crossover, one Butterworth low-pass
// and one mirrored high-pass ladder driven from the same source.
//
// FIR: windowed-sinc low-pass and its spectral-inversion complement.
//
// Builders name the input terminal node "in" (the node after any source
// resistance); analysis references transfers to it.
// =====================================================================

struct RtrDesign {
  double f0 = 1000.0;   // crossover, Hz
  double c3 = 1e-5;     // junction capacitor, F
  TransformerParams transformer;
  double r_s = 0.0;     // source resistance, ohms

  // Computes L1 = 1 / ((2*pi*f0)^2 * C3) and L2 = L1 from the crossover
  // frequency. Throws std::invalid_argument on nonpositive f0/c3 or
  // invalid transformer parameters.
  static RtrDesign make(double f0, double c3, double k = 1.0, double r_w = 0.0,
                        double r_s = 0.0, double c_par = 0.0);
  // f0 = 1 kHz, C3 = 10 uF, ideal transformer, no source resistance.
  static RtrDesign reference();
  // Same magnetics with k = 0.999, R_w = R_s = 0.1 ohm.
  static RtrDesign reference_nonideal();

  void validate() const;
};

// Concrete component values of one built RTR instance; the unit the
// tolerance machinery perturbs.
struct RtrParts {
  double l1 = 0.0;
  double l2 = 0.0;
  double c3 = 0.0;
  double k = 1.0;
  double r_w = 0.0;
  double r_s = 0.0;
  double c_par = 0.0;
};

struct Lc2Design {
  double f0 = 1000.0;
  double r_load = 8.0;
  double q = 0.70710678118654752440;  // Butterworth
  double esr_l = 0.3;   // series resistance of the low-pass inductor
  double esr_c = 0.05;  // series resistance of the high-pass capacitor
  // Reported high-frequency branch polarity. Second-order crossovers are
  // conventionally wired with the HF driver inverted; the in-phase sum
  // has a null at f0. A ground-referenced probe cannot express the
  // inversion, so it is applied to H_HF by the closed form and by the
  // sweep pipeline instead.
  int hp_polarity = -1;

  static Lc2Design make(double f0, double r_load = 8.0, double esr_l = 0.3,
                        double esr_c = 0.05);
  static Lc2Design reference();

  void validate() const;
};

struct Lc2Parts {
  double l_lp = 0.0;
  double c_lp = 0.0;
  double r_load_lp = 0.0;
  double esr_l = 0.0;
  double c_hp = 0.0;
  double l_hp = 0.0;
  double r_load_hp = 0.0;
  double esr_c = 0.0;
  int hp_polarity = -1;
};

struct FirDesign {
  int n_taps = 1023;      // odd, >= 3
  double f_cut = 1000.0;  // Hz
  double f_s = 48000.0;   // Hz

  static FirDesign make(int n_taps, double f_cut, double f_s);
  static FirDesign reference();

  void validate() const;
};

struct FirPair {
  std::vector<double> h_lp;
  std::vector<double> h_hp;
  double f_s = 0.0;
  [[nodiscard]] int latency_samples() const { return (int(h_lp.size()) - 1) / 2; }
  [[nodiscard]] double latency_seconds() const { return latency_samples() / f_s; }
};

// Component values implied by a design.
[[nodiscard]] RtrParts rtr_parts(const RtrDesign& design);
[[nodiscard]] Lc2Parts lc2_parts(const Lc2Design& design);

// Circuits carry probes on "lf"/"hf" (RTR) and "lp"/"hp" (LC2). Elements
// for zero-valued resistances and parasitics are omitted.
[[nodiscard]] Circuit build_rtr(const RtrDesign& design);
[[nodiscard]] Circuit build_rtr(const RtrParts& parts);
[[nodiscard]] Circuit build_lc2(const Lc2Design& design);
[[nodiscard]] Circuit build_lc2(const Lc2Parts& parts);

// Closed-form transfer pairs (H_LF, H_HF) referenced to the input
// terminal. Throw SolveError at an exactly singular point (lossless RTR
// at its resonance).
[[nodiscard]] std::pair<Complex, Complex> rtr_closed_form(const RtrDesign& design, double omega);
[[nodiscard]] std::pair<Complex, Complex> rtr_closed_form(const RtrParts& parts, double omega);
[[nodiscard]] std::pair<Complex, Complex> lc2_closed_form(const Lc2Design& design, double omega);
[[nodiscard]] std::pair<Complex, Complex> lc2_closed_form(const Lc2Parts& parts, double omega);

// Hamming-windowed sinc low-pass normalized to unit DC gain, plus its
// spectral inversion h_hp[n] = delta[n - (N-1)/2] - h_lp[n].
[[nodiscard]] FirPair design_fir(const FirDesign& design);

// Netlist text for a built circuit with a comment header documenting the
// design values and the coupling dot convention.
[[nodiscard]] std::string rtr_netlist(const RtrDesign& design);
[[nodiscard]] std::string lc2_netlist(const Lc2Design& design);

}  // namespace rtr
