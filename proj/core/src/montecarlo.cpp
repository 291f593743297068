#include "rtr/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace rtr {

namespace {

constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

double factor(std::uint64_t& state, double tol) {
  return 1.0 + tol * (2.0 * uniform01(state) - 1.0);
}

struct BandIl {
  double lo = 0.0;
  double hi = 0.0;
};

BandIl flat_band_il_extrema(const SweepResult& sweep) {
  BandIl b;
  bool first = true;
  const auto il = insertion_loss(sweep);
  for (std::size_t i = 0; i < sweep.pairs.size(); ++i) {
    if (!in_flat_band(sweep.pairs[i].f_hz, sweep.crossover_hz)) continue;
    if (first) {
      b.lo = b.hi = il[i];
      first = false;
    } else {
      b.lo = std::min(b.lo, il[i]);
      b.hi = std::max(b.hi, il[i]);
    }
  }
  return b;
}

SampleMetrics reduce_sample(int index, const SweepResult& sample,
                            const SweepResult& nominal) {
  SampleMetrics m;
  m.index = index;
  const PhaseMetrics pm = phase_metrics(sample, &nominal);
  m.max_phase_dev_full_deg = pm.max_branch_dev_full_deg;
  m.max_phase_dev_flat_deg = pm.max_branch_dev_flat_deg;
  m.max_phase_dev_near_deg = pm.max_branch_dev_near_deg;
  m.max_interbranch_dev_near_deg = pm.max_interbranch_dev_near_deg;
  const ComplementarityReport cr = complementarity_report(sample);
  m.max_eps_flat_db = cr.max_eps_flat_db;
  m.max_eps_full_db = cr.max_eps_full_db;
  const BandIl il = flat_band_il_extrema(sample);
  m.il_min_flat_db = il.lo;
  m.il_max_flat_db = il.hi;
  m.n_warnings = static_cast<int>(sample.warnings.size());
  return m;
}

template <typename Sweeper>
McReport run_samples(std::string topology, const ToleranceSpec& spec,
                     const FrequencyGrid& grid, const SweepResult& nominal_sweep,
                     std::size_t n_samples, Sweeper&& sweep_sample) {
  McReport report;
  report.topology = std::move(topology);
  report.spec = spec;
  report.grid = grid;
  double dev_sum = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    SweepResult sweep = sweep_sample(i);
    sweep.crossover_hz = nominal_sweep.crossover_hz;
    SampleMetrics m = reduce_sample(static_cast<int>(i), sweep, nominal_sweep);
    report.agg_max_phase_dev_flat_deg =
        std::max(report.agg_max_phase_dev_flat_deg, m.max_phase_dev_flat_deg);
    report.agg_max_phase_dev_near_deg =
        std::max(report.agg_max_phase_dev_near_deg, m.max_phase_dev_near_deg);
    report.agg_max_interbranch_dev_near_deg = std::max(
        report.agg_max_interbranch_dev_near_deg, m.max_interbranch_dev_near_deg);
    report.agg_max_eps_flat_db = std::max(report.agg_max_eps_flat_db, m.max_eps_flat_db);
    report.agg_max_eps_full_db = std::max(report.agg_max_eps_full_db, m.max_eps_full_db);
    report.agg_il_max_flat_db = std::max(report.agg_il_max_flat_db, m.il_max_flat_db);
    report.total_warnings += m.n_warnings;
    dev_sum += m.max_phase_dev_flat_deg;
    report.samples.push_back(m);
  }
  if (n_samples > 0)
    report.agg_mean_phase_dev_flat_deg = dev_sum / static_cast<double>(n_samples);
  return report;
}

}  // namespace

void ToleranceSpec::validate() const {
  if (tol_fraction < 0.0 || tol_fraction >= 1.0)
    throw std::invalid_argument("tolerance fraction must lie in [0, 1)");
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  if (enable_k && (k_tol_fraction < 0.0 || k_tol_fraction >= 1.0))
    throw std::invalid_argument("k tolerance fraction must lie in [0, 1)");
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += golden_gamma;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t sample_seed(std::uint64_t master_seed, int index) {
  std::uint64_t state =
      master_seed + static_cast<std::uint64_t>(index) * golden_gamma;
  return splitmix64(state);
}

double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

std::vector<RtrParts> sample_designs(const RtrDesign& nominal, const ToleranceSpec& spec) {
  spec.validate();
  const RtrParts base = rtr_parts(nominal);
  std::vector<RtrParts> out;
  out.reserve(static_cast<std::size_t>(spec.n_samples));
  for (int i = 0; i < spec.n_samples; ++i) {
    std::uint64_t state = sample_seed(spec.master_seed, i);
    RtrParts p = base;
    const double magnetics = factor(state, spec.tol_fraction);
    p.l1 *= magnetics;
    p.l2 *= magnetics;
    p.c3 *= factor(state, spec.tol_fraction);
    p.r_w *= factor(state, spec.tol_fraction);
    p.r_s *= factor(state, spec.tol_fraction);
    p.c_par *= factor(state, spec.tol_fraction);
    if (spec.enable_k) p.k = std::min(p.k * factor(state, spec.k_tol_fraction), 1.0);
    out.push_back(p);
  }
  return out;
}

std::vector<Lc2Parts> sample_designs(const Lc2Design& nominal, const ToleranceSpec& spec) {
  spec.validate();
  const Lc2Parts base = lc2_parts(nominal);
  std::vector<Lc2Parts> out;
  out.reserve(static_cast<std::size_t>(spec.n_samples));
  for (int i = 0; i < spec.n_samples; ++i) {
    std::uint64_t state = sample_seed(spec.master_seed, i);
    Lc2Parts p = base;
    p.l_lp *= factor(state, spec.tol_fraction);
    p.c_lp *= factor(state, spec.tol_fraction);
    p.r_load_lp *= factor(state, spec.tol_fraction);
    p.esr_l *= factor(state, spec.tol_fraction);
    p.c_hp *= factor(state, spec.tol_fraction);
    p.l_hp *= factor(state, spec.tol_fraction);
    p.r_load_hp *= factor(state, spec.tol_fraction);
    p.esr_c *= factor(state, spec.tol_fraction);
    out.push_back(p);
  }
  return out;
}

McReport mc_run(const RtrDesign& nominal, const ToleranceSpec& spec,
                const FrequencyGrid& grid) {
  spec.validate();
  SweepResult nominal_sweep = ac_sweep(build_rtr(nominal), "lf", "hf", grid, true);
  nominal_sweep.crossover_hz = nominal.f0;
  const auto samples = sample_designs(nominal, spec);
  return run_samples("rtr", spec, grid, nominal_sweep, samples.size(),
                     [&](std::size_t i) {
                       return ac_sweep(build_rtr(samples[i]), "lf", "hf", grid, true);
                     });
}

McReport mc_run(const Lc2Design& nominal, const ToleranceSpec& spec,
                const FrequencyGrid& grid) {
  spec.validate();
  const bool invert = lc2_parts(nominal).hp_polarity < 0;
  SweepResult nominal_sweep = ac_sweep(build_lc2(nominal), "lp", "hp", grid, true);
  if (invert) flip_hf_polarity(nominal_sweep);
  nominal_sweep.crossover_hz = nominal.f0;
  const auto samples = sample_designs(nominal, spec);
  return run_samples("lc2", spec, grid, nominal_sweep, samples.size(),
                     [&](std::size_t i) {
                       SweepResult s = ac_sweep(build_lc2(samples[i]), "lp", "hp", grid, true);
                       if (samples[i].hp_polarity < 0) flip_hf_polarity(s);
                       return s;
                     });
}

std::string mc_csv(const McReport& report) {
  std::ostringstream out;
  char buf[352];
  out << "# topology=" << report.topology << "\n";
  std::snprintf(buf, sizeof(buf), "# tol=%.12e n=%d seed=%llu enable_k=%d\n",
                report.spec.tol_fraction, report.spec.n_samples,
                static_cast<unsigned long long>(report.spec.master_seed),
                report.spec.enable_k ? 1 : 0);
  out << buf;
  out << "index,max_phase_dev_full_deg,max_phase_dev_flat_deg,max_phase_dev_near_deg,"
         "max_interbranch_dev_near_deg,max_eps_flat_db,max_eps_full_db,il_min_flat_db,"
         "il_max_flat_db,n_warnings\n";
  for (const auto& s : report.samples) {
    std::snprintf(buf, sizeof(buf),
                  "%d,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%d\n", s.index,
                  s.max_phase_dev_full_deg, s.max_phase_dev_flat_deg,
                  s.max_phase_dev_near_deg, s.max_interbranch_dev_near_deg,
                  s.max_eps_flat_db, s.max_eps_full_db, s.il_min_flat_db,
                  s.il_max_flat_db, s.n_warnings);
    out << buf;
  }
  auto footer = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "# %s=%.12e\n", key, v);
    out << buf;
  };
  footer("agg_max_phase_dev_flat_deg", report.agg_max_phase_dev_flat_deg);
  footer("agg_mean_phase_dev_flat_deg", report.agg_mean_phase_dev_flat_deg);
  footer("agg_max_phase_dev_near_deg", report.agg_max_phase_dev_near_deg);
  footer("agg_max_interbranch_dev_near_deg", report.agg_max_interbranch_dev_near_deg);
  footer("agg_max_eps_flat_db", report.agg_max_eps_flat_db);
  footer("agg_max_eps_full_db", report.agg_max_eps_full_db);
  footer("agg_il_max_flat_db", report.agg_il_max_flat_db);
  out << "# total_warnings=" << report.total_warnings << "\n";
  return out.str();
}

}  // namespace rtr
