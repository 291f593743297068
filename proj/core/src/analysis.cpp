#include "rtr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rtr {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double rad_to_deg = 180.0 / std::numbers::pi;

// Condition estimates above this are recorded as sweep warnings.
constexpr double condition_warn = 1e12;

double arg_deg(const Complex& z) { return normalize_deg(std::arg(z) * rad_to_deg); }

TransferPair make_pair(double f_hz, Complex h_lf, Complex h_hf) {
  TransferPair p;
  p.f_hz = f_hz;
  p.h_lf = h_lf;
  p.h_hf = h_hf;
  p.sum = h_lf + h_hf;
  p.eps = p.sum - 1.0;
  p.phase_lf_deg = arg_deg(h_lf);
  p.phase_hf_deg = arg_deg(h_hf);
  return p;
}

// Vertex of the parabola through three equally spaced samples, as an
// offset in units of the spacing, clamped to the bracket.
double parabolic_offset(double y0, double y1, double y2) {
  const double denom = y0 - 2.0 * y1 + y2;
  if (denom == 0.0) return 0.0;
  return std::clamp(0.5 * (y0 - y2) / denom, -1.0, 1.0);
}

double branch_magnitude(const TransferPair& p, Branch branch) {
  switch (branch) {
    case Branch::lf: return std::abs(p.h_lf);
    case Branch::hf: return std::abs(p.h_hf);
    case Branch::sum: return std::abs(p.sum);
  }
  return 0.0;
}

double branch_phase_rad(const TransferPair& p, Branch branch) {
  switch (branch) {
    case Branch::lf: return std::arg(p.h_lf);
    case Branch::hf: return std::arg(p.h_hf);
    case Branch::sum: return std::arg(p.sum);
  }
  return 0.0;
}

}  // namespace

std::vector<double> FrequencyGrid::points() const {
  validate();
  std::vector<double> f(static_cast<std::size_t>(n_points));
  const double ratio = f_max / f_min;
  for (int i = 0; i < n_points; ++i)
    f[static_cast<std::size_t>(i)] =
        f_min * std::pow(ratio, static_cast<double>(i) / (n_points - 1));
  f.front() = f_min;
  f.back() = f_max;
  return f;
}

void FrequencyGrid::validate() const {
  if (!(f_min > 0.0) || !(f_max > f_min))
    throw std::invalid_argument("grid: need 0 < f_min < f_max");
  if (n_points < 2) throw std::invalid_argument("grid: need at least 2 points");
}

double normalize_deg(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

double circular_distance_deg(double a_deg, double b_deg) {
  return std::abs(normalize_deg(a_deg - b_deg));
}

double to_db(double magnitude) {
  if (!(magnitude > 0.0)) return db_floor;
  return std::max(db_floor, 20.0 * std::log10(magnitude));
}

bool in_flat_band(double f_hz, const std::optional<double>& crossover_hz) {
  if (!crossover_hz) return true;
  return f_hz <= *crossover_hz / 2.0 || f_hz >= 2.0 * *crossover_hz;
}

SweepResult ac_sweep(const Circuit& circuit, const std::string& lf_probe,
                     const std::string& hf_probe, const FrequencyGrid& grid, bool lenient) {
  grid.validate();
  const auto nodes = circuit.node_order();
  auto has_node = [&](const std::string& n) {
    return std::find(nodes.begin(), nodes.end(), n) != nodes.end();
  };
  if (!has_node(lf_probe) || !has_node(hf_probe))
    throw CircuitError("sweep probes must name existing nodes");

  std::string ref_node = "in";
  if (!has_node(ref_node)) {
    ref_node.clear();
    for (const auto& e : circuit.elements)
      if (e.kind == ElementKind::ac_source) {
        ref_node = e.nodes[0];
        break;
      }
    if (ref_node.empty() || ref_node == Circuit::ground)
      throw CircuitError("no usable input terminal for transfer reference");
  }

  SweepResult result;
  result.grid = grid;
  for (double f : grid.points()) {
    const double omega = two_pi * f;
    AcSolution sol;
    try {
      sol = solve_ac(circuit, omega);
    } catch (const SolveError& e) {
      if (!lenient) throw;
      result.warnings.push_back(e.what());
      continue;
    }
    const Complex v_in = sol.voltage(ref_node);
    if (v_in == Complex{}) {
      if (!lenient) throw SolveError(omega, 0.0, "input terminal voltage vanished");
      result.warnings.push_back("input terminal voltage vanished at f = " +
                                std::to_string(f));
      continue;
    }
    result.pairs.push_back(
        make_pair(f, sol.voltage(lf_probe) / v_in, sol.voltage(hf_probe) / v_in));
    result.max_condition = std::max(result.max_condition, sol.condition_estimate);
    if (sol.condition_estimate > condition_warn)
      result.warnings.push_back("ill-conditioned solve at f = " + std::to_string(f) +
                                " Hz, pivot ratio " +
                                std::to_string(sol.condition_estimate));
  }
  return result;
}

void flip_hf_polarity(SweepResult& sweep) {
  for (auto& p : sweep.pairs) p = make_pair(p.f_hz, p.h_lf, -p.h_hf);
}

SweepResult fir_sweep(const FirPair& pair, const FrequencyGrid& grid) {
  grid.validate();
  SweepResult result;
  result.topology = "fir";
  result.grid = grid;
  for (double f : grid.points())
    result.pairs.push_back(make_pair(f, fir_response(pair.h_lp, f, pair.f_s),
                                     fir_response(pair.h_hp, f, pair.f_s)));
  return result;
}

ComplementarityReport complementarity_report(const SweepResult& sweep) {
  ComplementarityReport report;
  for (const auto& p : sweep.pairs) {
    const double db = to_db(std::abs(p.eps));
    report.max_eps_full_db = std::max(report.max_eps_full_db, db);
    if (in_flat_band(p.f_hz, sweep.crossover_hz))
      report.max_eps_flat_db = std::max(report.max_eps_flat_db, db);
  }
  return report;
}

PhaseMetrics phase_metrics(const SweepResult& sweep, const SweepResult* reference) {
  PhaseMetrics m;
  for (const auto& p : sweep.pairs) {
    const double sum_phase = arg_deg(p.sum);
    m.sum_phase_deg.push_back(sum_phase);
    m.max_sum_phase_deg = std::max(m.max_sum_phase_deg, std::abs(sum_phase));
  }
  if (reference == nullptr) return m;

  const FrequencyGrid& a = sweep.grid;
  const FrequencyGrid& b = reference->grid;
  if (a.f_min != b.f_min || a.f_max != b.f_max || a.n_points != b.n_points)
    throw std::invalid_argument("phase_metrics: sweeps use different grids");

  // Lenient sweeps may have dropped points, so align by frequency.
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sweep.pairs.size() && j < reference->pairs.size()) {
    const TransferPair& p = sweep.pairs[i];
    const TransferPair& r = reference->pairs[j];
    if (p.f_hz < r.f_hz) {
      ++i;
      continue;
    }
    if (r.f_hz < p.f_hz) {
      ++j;
      continue;
    }
    const double dev_lf = circular_distance_deg(p.phase_lf_deg, r.phase_lf_deg);
    const double dev_hf = circular_distance_deg(p.phase_hf_deg, r.phase_hf_deg);
    const double dev = std::max(dev_lf, dev_hf);
    m.max_branch_dev_full_deg = std::max(m.max_branch_dev_full_deg, dev);
    if (in_flat_band(p.f_hz, sweep.crossover_hz)) {
      m.max_branch_dev_flat_deg = std::max(m.max_branch_dev_flat_deg, dev);
    } else {
      m.max_branch_dev_near_deg = std::max(m.max_branch_dev_near_deg, dev);
      const double diff = normalize_deg(p.phase_lf_deg - p.phase_hf_deg);
      const double ref_diff = normalize_deg(r.phase_lf_deg - r.phase_hf_deg);
      m.max_interbranch_dev_near_deg =
          std::max(m.max_interbranch_dev_near_deg, circular_distance_deg(diff, ref_diff));
    }
    ++i;
    ++j;
  }
  return m;
}

std::vector<double> insertion_loss(const SweepResult& sweep) {
  std::vector<double> il;
  il.reserve(sweep.pairs.size());
  for (const auto& p : sweep.pairs) il.push_back(-to_db(std::abs(p.sum)));
  return il;
}

double max_flat_band_il(const SweepResult& sweep) {
  double worst = -std::numeric_limits<double>::infinity();
  const auto il = insertion_loss(sweep);
  for (std::size_t i = 0; i < sweep.pairs.size(); ++i)
    if (in_flat_band(sweep.pairs[i].f_hz, sweep.crossover_hz))
      worst = std::max(worst, il[i]);
  return worst;
}

std::vector<double> group_delay(const SweepResult& sweep, Branch branch) {
  const std::size_t n = sweep.pairs.size();
  if (n < 3) throw std::invalid_argument("group_delay: need at least 3 points");

  std::vector<double> phase(n);
  std::vector<double> omega(n);
  for (std::size_t i = 0; i < n; ++i) {
    omega[i] = two_pi * sweep.pairs[i].f_hz;
    double phi = branch_phase_rad(sweep.pairs[i], branch);
    if (i > 0) {
      // Continue onto the branch nearest the previous sample.
      const double turns = std::round((phase[i - 1] - phi) / two_pi);
      phi += turns * two_pi;
    }
    phase[i] = phi;
  }

  std::vector<double> tau(n);
  tau[0] = -(phase[1] - phase[0]) / (omega[1] - omega[0]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    tau[i] = -(phase[i + 1] - phase[i - 1]) / (omega[i + 1] - omega[i - 1]);
  tau[n - 1] = -(phase[n - 1] - phase[n - 2]) / (omega[n - 1] - omega[n - 2]);
  return tau;
}

std::optional<double> find_resonance(const SweepResult& sweep, Branch branch) {
  const std::size_t n = sweep.pairs.size();
  if (n < 3) return std::nullopt;
  std::size_t best = 0;
  double best_mag = branch_magnitude(sweep.pairs[0], branch);
  for (std::size_t i = 1; i < n; ++i) {
    const double mag = branch_magnitude(sweep.pairs[i], branch);
    if (mag > best_mag) {
      best = i;
      best_mag = mag;
    }
  }
  if (best == 0 || best == n - 1) return std::nullopt;

  const double y0 = branch_magnitude(sweep.pairs[best - 1], branch);
  const double y2 = branch_magnitude(sweep.pairs[best + 1], branch);
  const double x0 = std::log(sweep.pairs[best - 1].f_hz);
  const double x1 = std::log(sweep.pairs[best].f_hz);
  const double x2 = std::log(sweep.pairs[best + 1].f_hz);
  const double offset = parabolic_offset(y0, best_mag, y2);
  const double x = x1 + offset * (offset >= 0.0 ? x2 - x1 : x1 - x0);
  return std::exp(x);
}

std::optional<ResonancePeak> find_resonance_refined(const Circuit& circuit,
                                                    const std::string& probe,
                                                    const std::string& hf_probe,
                                                    const FrequencyGrid& grid, int rounds) {
  FrequencyGrid g = grid;
  std::optional<double> f_peak;
  for (int round = 0; round < rounds; ++round) {
    SweepResult sweep = ac_sweep(circuit, probe, hf_probe, g, true);
    const std::size_t n = sweep.pairs.size();
    if (n < 3) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(sweep.pairs[i].h_lf) > std::abs(sweep.pairs[best].h_lf)) best = i;
    if (round == 0 && (best == 0 || best == n - 1)) return std::nullopt;
    const std::size_t lo = best == 0 ? 0 : best - 1;
    const std::size_t hi = best == n - 1 ? best : best + 1;
    f_peak = find_resonance(sweep, Branch::lf).value_or(sweep.pairs[best].f_hz);
    g = FrequencyGrid{sweep.pairs[lo].f_hz, sweep.pairs[hi].f_hz, 65};
  }
  if (!f_peak) return std::nullopt;

  // One direct solve at the refined frequency for the magnitude.
  SweepResult final_sweep =
      ac_sweep(circuit, probe, hf_probe, FrequencyGrid{*f_peak * 0.9999, *f_peak * 1.0001, 3},
               true);
  ResonancePeak peak;
  peak.f_hz = *f_peak;
  for (const auto& p : final_sweep.pairs)
    if (std::abs(p.h_lf) > peak.magnitude) {
      peak.magnitude = std::abs(p.h_lf);
      peak.f_hz = p.f_hz;
    }
  if (peak.magnitude == 0.0) return std::nullopt;
  return peak;
}

Complex fir_response(const std::vector<double>& taps, double f_hz, double f_s) {
  if (!(f_s > 0.0)) throw std::invalid_argument("fir_response: f_s must be positive");
  if (f_hz < 0.0 || f_hz >= f_s / 2.0)
    throw std::invalid_argument("fir_response: f must lie in [0, f_s/2)");
  const double w = -two_pi * f_hz / f_s;
  Complex h{};
  for (std::size_t n = 0; n < taps.size(); ++n)
    h += taps[n] * std::polar(1.0, w * static_cast<double>(n));
  return h;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "# transfers referenced to the input terminal (node after any source "
         "resistance)\n";
  out << "f_hz,hlf_re,hlf_im,hhf_re,hhf_im,sum_re,sum_im,eps_db,phase_lf_deg,"
         "phase_hf_deg,il_db\n";
  char buf[352];
  for (const auto& p : sweep.pairs) {
    std::snprintf(buf, sizeof(buf),
                  "%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e\n",
                  p.f_hz, p.h_lf.real(), p.h_lf.imag(), p.h_hf.real(), p.h_hf.imag(),
                  p.sum.real(), p.sum.imag(), to_db(std::abs(p.eps)), p.phase_lf_deg,
                  p.phase_hf_deg, -to_db(std::abs(p.sum)));
    out << buf;
  }
  return out.str();
}

}  // namespace rtr
