#include "rtr/topologies.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rtr/mna.hpp"

namespace rtr {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_nonnegative(double v, const char* what) {
  if (v < 0.0) throw std::invalid_argument(std::string(what) + " must be nonnegative");
}

Element resistor(std::string name, std::string n1, std::string n2, double v) {
  return {ElementKind::resistor, std::move(name), {std::move(n1), std::move(n2)}, v, 0.0};
}
Element inductor(std::string name, std::string n1, std::string n2, double v) {
  return {ElementKind::inductor, std::move(name), {std::move(n1), std::move(n2)}, v, 0.0};
}
Element capacitor(std::string name, std::string n1, std::string n2, double v) {
  return {ElementKind::capacitor, std::move(name), {std::move(n1), std::move(n2)}, v, 0.0};
}
Element source(std::string name, std::string n1, std::string n2, double v) {
  return {ElementKind::ac_source, std::move(name), {std::move(n1), std::move(n2)}, v, 0.0};
}
Element coupling(std::string name, std::string l1, std::string l2, double k) {
  return {ElementKind::coupling, std::move(name), {std::move(l1), std::move(l2)}, k, 0.0};
}

}  // namespace

RtrDesign RtrDesign::make(double f0, double c3, double k, double r_w, double r_s,
                          double c_par) {
  require_positive(f0, "f0");
  require_positive(c3, "C3");
  RtrDesign d;
  d.f0 = f0;
  d.c3 = c3;
  const double l1 = 1.0 / ((two_pi * f0) * (two_pi * f0) * c3);
  d.transformer = TransformerParams{l1, l1, k, r_w, c_par};
  d.r_s = r_s;
  d.validate();
  return d;
}

RtrDesign RtrDesign::reference() { return make(1000.0, 1e-5); }

RtrDesign RtrDesign::reference_nonideal() { return make(1000.0, 1e-5, 0.999, 0.1, 0.1); }

void RtrDesign::validate() const {
  require_positive(f0, "f0");
  require_positive(c3, "C3");
  require_nonnegative(r_s, "R_s");
  transformer.validate();
  const double f_check = 1.0 / (two_pi * std::sqrt(transformer.l1 * c3));
  if (std::abs(f_check / f0 - 1.0) > 1e-9)
    throw std::invalid_argument("rtr design: L1 and C3 do not resonate at f0");
}

RtrParts rtr_parts(const RtrDesign& design) {
  design.validate();
  return {design.transformer.l1, design.transformer.l2, design.c3, design.transformer.k,
          design.transformer.r_w, design.r_s, design.transformer.c_par};
}

Circuit build_rtr(const RtrDesign& design) { return build_rtr(rtr_parts(design)); }

Circuit build_rtr(const RtrParts& parts) {
  require_positive(parts.l1, "L1");
  require_positive(parts.l2, "L2");
  require_positive(parts.c3, "C3");
  if (!(parts.k > 0.0) || parts.k > 1.0)
    throw std::invalid_argument("k must lie in (0, 1]");
  require_nonnegative(parts.r_w, "R_w");
  require_nonnegative(parts.r_s, "R_s");
  require_nonnegative(parts.c_par, "C_par");

  Circuit c;
  if (parts.r_s > 0.0) {
    c.elements.push_back(source("V1", "src", "0", 1.0));
    c.elements.push_back(resistor("Rs", "src", "in", parts.r_s));
  } else {
    c.elements.push_back(source("V1", "in", "0", 1.0));
  }
  std::string winding_top = "in";
  if (parts.r_w > 0.0) {
    c.elements.push_back(resistor("Rw", "in", "w", parts.r_w));
    winding_top = "w";
  }
  c.elements.push_back(inductor("L1", winding_top, "lf", parts.l1));
  c.elements.push_back(capacitor("C3", "lf", "0", parts.c3));
  if (parts.c_par > 0.0) c.elements.push_back(capacitor("Cp", "in", "lf", parts.c_par));
  c.elements.push_back(inductor("L2", "hf", "0", parts.l2));
  c.elements.push_back(coupling("K1", "L1", "L2", parts.k));
  c.probes = {"lf", "hf"};
  c.validate();
  return c;
}

Lc2Design Lc2Design::make(double f0, double r_load, double esr_l, double esr_c) {
  Lc2Design d;
  d.f0 = f0;
  d.r_load = r_load;
  d.esr_l = esr_l;
  d.esr_c = esr_c;
  d.validate();
  return d;
}

Lc2Design Lc2Design::reference() { return make(1000.0); }

void Lc2Design::validate() const {
  require_positive(f0, "f0");
  require_positive(r_load, "R_load");
  require_positive(q, "Q");
  require_nonnegative(esr_l, "esr_L");
  require_nonnegative(esr_c, "esr_C");
  if (hp_polarity != 1 && hp_polarity != -1)
    throw std::invalid_argument("hp_polarity must be +1 or -1");
}

Lc2Parts lc2_parts(const Lc2Design& design) {
  design.validate();
  const double w0 = two_pi * design.f0;
  Lc2Parts p;
  p.l_lp = design.r_load / (design.q * w0);
  p.c_lp = design.q / (design.r_load * w0);
  p.r_load_lp = design.r_load;
  p.esr_l = design.esr_l;
  p.c_hp = design.q / (design.r_load * w0);
  p.l_hp = design.r_load / (design.q * w0);
  p.r_load_hp = design.r_load;
  p.esr_c = design.esr_c;
  p.hp_polarity = design.hp_polarity;
  return p;
}

Circuit build_lc2(const Lc2Design& design) { return build_lc2(lc2_parts(design)); }

Circuit build_lc2(const Lc2Parts& parts) {
  require_positive(parts.l_lp, "L_lp");
  require_positive(parts.c_lp, "C_lp");
  require_positive(parts.r_load_lp, "R_load (lp)");
  require_positive(parts.c_hp, "C_hp");
  require_positive(parts.l_hp, "L_hp");
  require_positive(parts.r_load_hp, "R_load (hp)");
  require_nonnegative(parts.esr_l, "esr_L");
  require_nonnegative(parts.esr_c, "esr_C");

  Circuit c;
  c.elements.push_back(source("V1", "in", "0", 1.0));
  std::string lp_top = "in";
  if (parts.esr_l > 0.0) {
    c.elements.push_back(resistor("Rel", "in", "lpa", parts.esr_l));
    lp_top = "lpa";
  }
  c.elements.push_back(inductor("Llp", lp_top, "lp", parts.l_lp));
  c.elements.push_back(capacitor("Clp", "lp", "0", parts.c_lp));
  c.elements.push_back(resistor("Rlp", "lp", "0", parts.r_load_lp));
  std::string hp_top = "in";
  if (parts.esr_c > 0.0) {
    c.elements.push_back(resistor("Rec", "in", "hpa", parts.esr_c));
    hp_top = "hpa";
  }
  c.elements.push_back(capacitor("Chp", hp_top, "hp", parts.c_hp));
  c.elements.push_back(inductor("Lhp", "hp", "0", parts.l_hp));
  c.elements.push_back(resistor("Rhp", "hp", "0", parts.r_load_hp));
  c.probes = {"lp", "hp"};
  c.validate();
  return c;
}

std::pair<Complex, Complex> rtr_closed_form(const RtrDesign& design, double omega) {
  return rtr_closed_form(rtr_parts(design), omega);
}

std::pair<Complex, Complex> rtr_closed_form(const RtrParts& parts, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const Complex jw(0.0, omega);
  const Complex z_l = parts.r_w + jw * parts.l1;
  const Complex z_c3 = 1.0 / (jw * parts.c3);
  const Complex jwm = jw * (parts.k * std::sqrt(parts.l1 * parts.l2));
  if (parts.c_par == 0.0) {
    const Complex denom = z_l + z_c3;
    if (std::abs(denom) <= 1e-13 * std::max(std::abs(z_l), std::abs(z_c3)))
      throw SolveError(omega, std::abs(denom),
                       "lossless branch impedance vanishes at omega = " +
                           std::to_string(omega));
    return {z_c3 / denom, jwm / denom};
  }
  const Complex z_cp = 1.0 / (jw * parts.c_par);
  const Complex denom = z_l * z_cp + z_c3 * (z_l + z_cp);
  if (std::abs(denom) <=
      1e-13 * std::max(std::abs(z_l * z_cp), std::abs(z_c3 * (z_l + z_cp))))
    throw SolveError(omega, std::abs(denom),
                     "lossless branch impedance vanishes at omega = " + std::to_string(omega));
  return {z_c3 * (z_l + z_cp) / denom, jwm * z_cp / denom};
}

std::pair<Complex, Complex> lc2_closed_form(const Lc2Design& design, double omega) {
  return lc2_closed_form(lc2_parts(design), omega);
}

std::pair<Complex, Complex> lc2_closed_form(const Lc2Parts& parts, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const Complex jw(0.0, omega);
  const Complex lp_series = parts.esr_l + jw * parts.l_lp;
  const Complex lp_shunt =
      parts.r_load_lp / (1.0 + jw * parts.c_lp * parts.r_load_lp);
  const Complex h_lp = lp_shunt / (lp_shunt + lp_series);
  const Complex hp_series = parts.esr_c + 1.0 / (jw * parts.c_hp);
  const Complex zl = jw * parts.l_hp;
  const Complex hp_shunt = zl * parts.r_load_hp / (zl + parts.r_load_hp);
  const Complex h_hp = hp_shunt / (hp_shunt + hp_series);
  return {h_lp, static_cast<double>(parts.hp_polarity) * h_hp};
}

FirDesign FirDesign::make(int n_taps, double f_cut, double f_s) {
  FirDesign d;
  d.n_taps = n_taps;
  d.f_cut = f_cut;
  d.f_s = f_s;
  d.validate();
  return d;
}

FirDesign FirDesign::reference() { return {}; }

void FirDesign::validate() const {
  if (n_taps < 3 || n_taps % 2 == 0)
    throw std::invalid_argument("n_taps must be an odd integer >= 3");
  require_positive(f_s, "f_s");
  if (!(f_cut > 0.0) || !(f_cut < f_s / 2.0))
    throw std::invalid_argument("f_cut must lie in (0, f_s/2)");
}

FirPair design_fir(const FirDesign& design) {
  design.validate();
  const int n = design.n_taps;
  const int mid = (n - 1) / 2;
  const double fc = design.f_cut / design.f_s;

  FirPair pair;
  pair.f_s = design.f_s;
  pair.h_lp.resize(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int m = i - mid;
    const double x = two_pi * fc * m;
    const double sinc = m == 0 ? 2.0 * fc : std::sin(x) / (std::numbers::pi * m);
    const double window =
        0.54 - 0.46 * std::cos(two_pi * i / static_cast<double>(n - 1));
    pair.h_lp[i] = sinc * window;
    sum += pair.h_lp[i];
  }
  for (double& h : pair.h_lp) h /= sum;

  pair.h_hp.resize(n);
  for (int i = 0; i < n; ++i) pair.h_hp[i] = -pair.h_lp[i];
  pair.h_hp[mid] += 1.0;
  return pair;
}

std::string rtr_netlist(const RtrDesign& design) {
  const RtrParts p = rtr_parts(design);
  std::ostringstream out;
  out << "* resonant transformer router, f0 = " << format_value(design.f0)
      << " Hz, C3 = " << format_value(p.c3) << " F, k = " << format_value(p.k) << "\n";
  out << "* dotted terminals are the first node of L1 and of L2; the secondary\n";
  out << "* is oriented so v(hf) reads +jwM times the primary current\n";
  out << emit_netlist(build_rtr(p));
  out << ".end\n";
  return out.str();
}

std::string lc2_netlist(const Lc2Design& design) {
  const Lc2Parts p = lc2_parts(design);
  std::ostringstream out;
  out << "* second-order crossover, f0 = " << format_value(design.f0)
      << " Hz, R_load = " << format_value(design.r_load) << " ohm, Q = "
      << format_value(design.q) << "\n";
  if (p.hp_polarity < 0)
    out << "* hp driver wired inverted; the sweep applies the sign to H_HF\n";
  out << emit_netlist(build_lc2(p));
  out << ".end\n";
  return out.str();
}

}  // namespace rtr
