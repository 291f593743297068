#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rtr/analysis.hpp"
#include "rtr/topologies.hpp"

namespace rtr {

// =====================================================================
// Component-tolerance Monte Carlo.
//
// Every physical component value is multiplied by an independent factor
// drawn uniformly from [1 - tol, 1 + tol]. The transformer counts as one
// component: a single factor scales L1 and L2 together (two windings on
// one core cannot drift apart; their ratio is fixed by construction,
// which is precisely why the router's split survives tolerances), and
// the coupling coefficient k is only perturbed when enable_k is set.
// Determinism is a wire-level contract: per-sample seeds and the uniform
// draws come from SplitMix64 (documented constants, top 53 bits mapped
// to [0, 1)), never from implementation-defined standard-library
// distributions, and the draw order per sample is fixed:
//   RTR: transformer magnetics (L1 and L2 share the factor), C3, R_w,
//        R_s, C_par, then k when enabled
//   LC2: L_lp, C_lp, R_load_lp, esr_L, C_hp, L_hp, R_load_hp, esr_C
// Outputs are byte-identical across runs and platforms.
// =====================================================================

struct ToleranceSpec {
  double tol_fraction = 0.05;  // [0, 1)
  int n_samples = 200;
  std::uint64_t master_seed = 42;
  bool enable_k = false;
  double k_tol_fraction = 0.0;  // used only when enable_k

  void validate() const;  // throws std::invalid_argument
};

// One SplitMix64 round; the stream generator behind every draw.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t& state);
// Seed of sample i under a master seed.
[[nodiscard]] std::uint64_t sample_seed(std::uint64_t master_seed, int index);
// Next uniform in [0, 1) from the stream.
[[nodiscard]] double uniform01(std::uint64_t& state);

[[nodiscard]] std::vector<RtrParts> sample_designs(const RtrDesign& nominal,
                                                   const ToleranceSpec& spec);
[[nodiscard]] std::vector<Lc2Parts> sample_designs(const Lc2Design& nominal,
                                                   const ToleranceSpec& spec);

struct SampleMetrics {
  int index = 0;
  double max_phase_dev_full_deg = 0.0;
  double max_phase_dev_flat_deg = 0.0;
  double max_phase_dev_near_deg = 0.0;
  double max_interbranch_dev_near_deg = 0.0;
  double max_eps_flat_db = db_floor;
  double max_eps_full_db = db_floor;
  double il_min_flat_db = 0.0;
  double il_max_flat_db = 0.0;
  int n_warnings = 0;
};

struct McReport {
  std::string topology;
  ToleranceSpec spec;
  FrequencyGrid grid;
  std::vector<SampleMetrics> samples;
  // Aggregates over samples (warning-free points only).
  double agg_max_phase_dev_flat_deg = 0.0;
  double agg_mean_phase_dev_flat_deg = 0.0;
  double agg_max_phase_dev_near_deg = 0.0;
  double agg_max_interbranch_dev_near_deg = 0.0;
  double agg_max_eps_flat_db = db_floor;
  double agg_max_eps_full_db = db_floor;
  double agg_il_max_flat_db = 0.0;
  int total_warnings = 0;
};

// Sweeps the nominal design, then every perturbed sample on the same
// grid, and reduces per-sample phase/complementarity/insertion-loss
// metrics in sample order. The flat/near band split uses the nominal
// crossover. Singular sample points are recorded as warnings, never
// failures.
[[nodiscard]] McReport mc_run(const RtrDesign& nominal, const ToleranceSpec& spec,
                              const FrequencyGrid& grid);
[[nodiscard]] McReport mc_run(const Lc2Design& nominal, const ToleranceSpec& spec,
                              const FrequencyGrid& grid);

// One row per sample plus an aggregate footer block; all doubles %.12e.
[[nodiscard]] std::string mc_csv(const McReport& report);

}  // namespace rtr
