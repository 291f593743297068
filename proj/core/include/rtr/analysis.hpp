#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rtr/mna.hpp"
#include "rtr/netlist.hpp"
#include "rtr/topologies.hpp"

namespace rtr {

// =====================================================================
// Frequency-domain analysis over a swept circuit.
//
// Transfers are probe voltage divided by the input-terminal voltage,
// where the input terminal is the node named "in" when the circuit has
// one and otherwise the positive node of the first source. Phases are
// reported in degrees on (-180, 180]. dB values are floored at -300.
// =====================================================================

constexpr double db_floor = -300.0;

struct FrequencyGrid {
  double f_min = 20.0;
  double f_max = 20000.0;
  int n_points = 500;

  // Log-spaced points, endpoints included.
  [[nodiscard]] std::vector<double> points() const;
  void validate() const;  // throws std::invalid_argument
};

struct TransferPair {
  double f_hz = 0.0;
  Complex h_lf;
  Complex h_hf;
  Complex sum;               // h_lf + h_hf
  Complex eps;               // sum - 1
  double phase_lf_deg = 0.0;
  double phase_hf_deg = 0.0;
};

struct SweepResult {
  std::string topology;   // "rtr", "lc2", "fir", "netlist", ...
  FrequencyGrid grid;
  std::vector<TransferPair> pairs;          // one per grid point
  std::vector<std::string> warnings;
  std::optional<double> crossover_hz;       // enables the flat-band split
  double max_condition = 1.0;
};

struct ComplementarityReport {
  double max_eps_full_db = db_floor;
  double max_eps_flat_db = db_floor;
};

struct PhaseMetrics {
  std::vector<double> sum_phase_deg;       // arg(H_LF + H_HF) per point
  double max_sum_phase_deg = 0.0;          // largest magnitude over the band
  // Largest circular distance to the reference sweep, per branch,
  // split by band. Zero when no reference is given.
  double max_branch_dev_full_deg = 0.0;
  double max_branch_dev_flat_deg = 0.0;
  double max_branch_dev_near_deg = 0.0;    // inside one octave of crossover
  // Deviation of the LF-to-HF phase difference from the reference's.
  double max_interbranch_dev_near_deg = 0.0;
};

// Wraps into (-180, 180].
[[nodiscard]] double normalize_deg(double deg);
// Shortest angular distance, always in [0, 180].
[[nodiscard]] double circular_distance_deg(double a_deg, double b_deg);
// 20*log10(x) with the -300 dB floor.
[[nodiscard]] double to_db(double magnitude);

// True when f lies outside one octave around the crossover (f <= f0/2 or
// f >= 2*f0). Without a known crossover everything counts as flat band.
[[nodiscard]] bool in_flat_band(double f_hz, const std::optional<double>& crossover_hz);

// Solves every grid point. Solver failures propagate with the offending
// frequency attached; pass lenient = true to record them as warnings and
// drop the point instead (used by the tolerance machinery, where a
// perturbed sample may graze a singularity).
[[nodiscard]] SweepResult ac_sweep(const Circuit& circuit, const std::string& lf_probe,
                                   const std::string& hf_probe, const FrequencyGrid& grid,
                                   bool lenient = false);

// Negates H_HF in place and recomputes the derived fields; how an
// inverted-polarity branch enters the reported pair (see Lc2Design).
void flip_hf_polarity(SweepResult& sweep);

// Sweep of an FIR pair via its frequency response (no circuit).
[[nodiscard]] SweepResult fir_sweep(const FirPair& pair, const FrequencyGrid& grid);

[[nodiscard]] ComplementarityReport complementarity_report(const SweepResult& sweep);

// reference, when given, must share the sweep's grid.
[[nodiscard]] PhaseMetrics phase_metrics(const SweepResult& sweep,
                                         const SweepResult* reference = nullptr);

// Per-point insertion loss, -20*log10|H_LF + H_HF|.
[[nodiscard]] std::vector<double> insertion_loss(const SweepResult& sweep);
// Largest insertion loss over the flat band (full band without a crossover).
[[nodiscard]] double max_flat_band_il(const SweepResult& sweep);

enum class Branch { lf, hf, sum };

// Group delay in seconds, -d(phase)/d(omega), from the unwrapped phase by
// central differences (one-sided at the endpoints).
[[nodiscard]] std::vector<double> group_delay(const SweepResult& sweep, Branch branch);

// Interior |H| maximum refined by parabolic interpolation on log
// frequency. Monotone responses and edge maxima yield nullopt.
[[nodiscard]] std::optional<double> find_resonance(const SweepResult& sweep, Branch branch);

struct ResonancePeak {
  double f_hz = 0.0;
  double magnitude = 0.0;
};

// Iteratively re-sweeps a shrinking bracket around the coarse peak; a
// 500-point decade grid cannot resolve a sharp resonance's magnitude, so
// reporting uses this refinement on top of find_resonance.
[[nodiscard]] std::optional<ResonancePeak> find_resonance_refined(
    const Circuit& circuit, const std::string& probe, const std::string& hf_probe,
    const FrequencyGrid& grid, int rounds = 3);

// Frequency response sum h[n] * exp(-j*2*pi*f*n/f_s) of a real tap set.
// f must lie in [0, f_s/2). Throws std::invalid_argument otherwise.
[[nodiscard]] Complex fir_response(const std::vector<double>& taps, double f_hz, double f_s);

// sweep.csv column order, fixed:
//   f_hz, hlf_re, hlf_im, hhf_re, hhf_im, sum_re, sum_im, eps_db,
//   phase_lf_deg, phase_hf_deg, il_db
// All doubles %.12e.
[[nodiscard]] std::string sweep_csv(const SweepResult& sweep);

}  // namespace rtr
