// Command-line front end: AC sweeps, tolerance Monte Carlo, the
// three-topology comparison table, and time-domain reconstruction.
// All numeric output is %.12e and deterministic for a fixed config.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rtr/analysis.hpp"
#include "rtr/montecarlo.hpp"
#include "rtr/netlist.hpp"
#include "rtr/timedomain.hpp"
#include "rtr/topologies.hpp"
#include "rtr/transformer.hpp"

namespace {

using namespace rtr;

constexpr double two_pi = 2.0 * std::numbers::pi;

struct RunConfig {
  std::string scenario = "rtr";
  double f_min = 20.0;
  double f_max = 20000.0;
  int n_points = 500;
  double f0 = 1000.0;
  double c3 = 1e-5;
  std::optional<double> k;
  std::optional<double> r_w;
  std::optional<double> r_s;
  double r_load = 8.0;
  double esr_l = 0.3;
  double esr_c = 0.05;
  int n_taps = 1023;
  double f_s = 48000.0;
  double tol = 0.05;
  int n_samples = 200;
  std::uint64_t seed = 42;
  std::string out_dir = "./out";

  [[nodiscard]] FrequencyGrid grid() const { return {f_min, f_max, n_points}; }
  [[nodiscard]] RtrDesign rtr() const {
    const bool nonideal = scenario == "rtr-nonideal";
    return RtrDesign::make(f0, c3, k.value_or(nonideal ? 0.999 : 1.0),
                           r_w.value_or(nonideal ? 0.1 : 0.0),
                           r_s.value_or(nonideal ? 0.1 : 0.0));
  }
  [[nodiscard]] Lc2Design lc2() const { return Lc2Design::make(f0, r_load, esr_l, esr_c); }
  [[nodiscard]] FirDesign fir() const { return FirDesign::make(n_taps, f0, f_s); }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_netlist_scenario(const std::string& scenario) {
  return scenario.rfind("netlist:", 0) == 0;
}

// A swept scenario reduced to the pieces every command consumes.
struct Prepared {
  SweepResult sweep;
  Circuit circuit;                 // empty for fir
  std::string lf_probe, hf_probe;  // empty for fir
  std::optional<FirPair> fir;
  bool invert_hf = false;
};

Prepared prepare(const RunConfig& cfg) {
  Prepared p;
  const FrequencyGrid grid = cfg.grid();
  if (cfg.scenario == "rtr" || cfg.scenario == "rtr-nonideal") {
    p.circuit = build_rtr(cfg.rtr());
    p.lf_probe = "lf";
    p.hf_probe = "hf";
    p.sweep = ac_sweep(p.circuit, p.lf_probe, p.hf_probe, grid);
    p.sweep.topology = "rtr";
    p.sweep.crossover_hz = cfg.f0;
  } else if (cfg.scenario == "lc2") {
    const Lc2Design design = cfg.lc2();
    p.circuit = build_lc2(design);
    p.lf_probe = "lp";
    p.hf_probe = "hp";
    p.invert_hf = design.hp_polarity < 0;
    p.sweep = ac_sweep(p.circuit, p.lf_probe, p.hf_probe, grid);
    if (p.invert_hf) flip_hf_polarity(p.sweep);
    p.sweep.topology = "lc2";
    p.sweep.crossover_hz = cfg.f0;
  } else if (cfg.scenario == "fir") {
    p.fir = design_fir(cfg.fir());
    if (cfg.f_max >= cfg.f_s / 2.0)
      throw std::invalid_argument("grid exceeds the FIR Nyquist frequency");
    p.sweep = fir_sweep(*p.fir, grid);
    p.sweep.crossover_hz = cfg.f0;
  } else if (is_netlist_scenario(cfg.scenario)) {
    const std::string path = cfg.scenario.substr(8);
    p.circuit = parse_netlist(read_file(path));
    p.circuit.validate();
    if (p.circuit.probes.empty())
      throw std::invalid_argument("netlist needs at least one .probe for a sweep");
    p.lf_probe = p.circuit.probes[0];
    p.hf_probe = p.circuit.probes.size() > 1 ? p.circuit.probes[1] : p.circuit.probes[0];
    p.sweep = ac_sweep(p.circuit, p.lf_probe, p.hf_probe, grid);
    p.sweep.topology = "netlist";
    // Crossover unknown; the flat band spans the whole grid.
  } else {
    throw std::invalid_argument("unknown scenario '" + cfg.scenario +
                                "' (rtr | rtr-nonideal | lc2 | fir | netlist:<path>)");
  }
  return p;
}

int cmd_sweep(const RunConfig& cfg) {
  Prepared p = prepare(cfg);
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "sweep.csv", sweep_csv(p.sweep));

  const ComplementarityReport cr = complementarity_report(p.sweep);
  const PhaseMetrics pm = phase_metrics(p.sweep);
  std::ostringstream s;
  s << "scenario=" << cfg.scenario << "\n";
  s << "topology=" << p.sweep.topology << "\n";
  s << "f_min_hz=" << fmt(cfg.f_min) << "\n";
  s << "f_max_hz=" << fmt(cfg.f_max) << "\n";
  s << "n_points=" << cfg.n_points << "\n";
  s << "max_eps_full_db=" << fmt(cr.max_eps_full_db) << "\n";
  s << "max_eps_flat_db=" << fmt(cr.max_eps_flat_db) << "\n";
  s << "max_flat_band_il_db=" << fmt(max_flat_band_il(p.sweep)) << "\n";
  s << "max_sum_phase_deg=" << fmt(pm.max_sum_phase_deg) << "\n";
  std::optional<ResonancePeak> peak;
  if (!p.fir)
    peak = find_resonance_refined(p.circuit, p.lf_probe, p.hf_probe, cfg.grid());
  else if (auto f = find_resonance(p.sweep, Branch::lf))
    peak = ResonancePeak{*f, 0.0};
  if (peak) {
    s << "resonance_f_hz=" << fmt(peak->f_hz) << "\n";
    s << "resonance_magnitude=" << fmt(peak->magnitude) << "\n";
  } else {
    s << "resonance=none\n";
  }
  s << "max_condition=" << fmt(p.sweep.max_condition) << "\n";
  s << "n_warnings=" << p.sweep.warnings.size() << "\n";
  write_file(dir / "summary.txt", s.str());
  std::printf("wrote %s and %s\n", (dir / "sweep.csv").c_str(),
              (dir / "summary.txt").c_str());
  return 0;
}

int cmd_mc(const RunConfig& cfg) {
  ToleranceSpec spec;
  spec.tol_fraction = cfg.tol;
  spec.n_samples = cfg.n_samples;
  spec.master_seed = cfg.seed;

  McReport report;
  if (cfg.scenario == "rtr" || cfg.scenario == "rtr-nonideal")
    report = mc_run(cfg.rtr(), spec, cfg.grid());
  else if (cfg.scenario == "lc2")
    report = mc_run(cfg.lc2(), spec, cfg.grid());
  else
    throw std::invalid_argument("mc needs an rtr, rtr-nonideal or lc2 scenario");

  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "mc.csv", mc_csv(report));

  std::ostringstream s;
  s << "scenario=" << cfg.scenario << "\n";
  s << "topology=" << report.topology << "\n";
  s << "tol=" << fmt(spec.tol_fraction) << "\n";
  s << "n_samples=" << spec.n_samples << "\n";
  s << "seed=" << spec.master_seed << "\n";
  s << "agg_max_phase_dev_flat_deg=" << fmt(report.agg_max_phase_dev_flat_deg) << "\n";
  s << "agg_mean_phase_dev_flat_deg=" << fmt(report.agg_mean_phase_dev_flat_deg) << "\n";
  s << "agg_max_phase_dev_near_deg=" << fmt(report.agg_max_phase_dev_near_deg) << "\n";
  s << "agg_max_interbranch_dev_near_deg=" << fmt(report.agg_max_interbranch_dev_near_deg)
    << "\n";
  s << "agg_max_eps_flat_db=" << fmt(report.agg_max_eps_flat_db) << "\n";
  s << "agg_max_eps_full_db=" << fmt(report.agg_max_eps_full_db) << "\n";
  s << "agg_il_max_flat_db=" << fmt(report.agg_il_max_flat_db) << "\n";
  s << "total_warnings=" << report.total_warnings << "\n";
  write_file(dir / "summary.txt", s.str());
  std::printf("wrote %s and %s\n", (dir / "mc.csv").c_str(), (dir / "summary.txt").c_str());
  return 0;
}

std::vector<ToneSpec> default_tones(const std::string& scenario) {
  if (scenario == "rtr-nonideal") return {{100.0, 1.0, 0.0}, {8000.0, 1.0, 0.0}};
  return {{100.0, 1.0, 0.0}, {3000.0, 0.5, 30.0}};
}

// Per-tone transfer pair of a prepared analog scenario, via direct MNA
// solves at the tone frequencies.
std::pair<std::vector<Complex>, std::vector<Complex>> tone_transfers(
    const Prepared& p, const std::vector<ToneSpec>& tones) {
  std::vector<Complex> h_lf, h_hf;
  for (const auto& tone : tones) {
    const AcSolution sol = solve_ac(p.circuit, two_pi * tone.f_hz);
    Complex v_in;
    try {
      v_in = sol.voltage("in");
    } catch (const CircuitError&) {
      v_in = sol.voltage(p.circuit.elements.front().nodes[0]);
    }
    h_lf.push_back(sol.voltage(p.lf_probe) / v_in);
    h_hf.push_back((p.invert_hf ? -1.0 : 1.0) * sol.voltage(p.hf_probe) / v_in);
  }
  return {h_lf, h_hf};
}

int cmd_recon(const RunConfig& cfg) {
  const std::vector<ToneSpec> tones = default_tones(cfg.scenario);
  const double duration = 0.1;
  const double f_s = cfg.scenario == "fir" ? cfg.f_s : 48000.0;
  const Signal input = synth_multitone(tones, f_s, duration);

  Signal lf, hf;
  std::optional<int> latency;
  if (cfg.scenario == "fir") {
    const FirPair pair = design_fir(cfg.fir());
    lf = fir_filter(pair.h_lp, input);
    hf = fir_filter(pair.h_hp, input);
    latency = pair.latency_samples();
  } else {
    Prepared p = prepare(cfg);
    auto [h_lf, h_hf] = tone_transfers(p, tones);
    lf = branch_response_time(tones, h_lf, f_s, duration);
    hf = branch_response_time(tones, h_hf, f_s, duration);
  }

  Signal sum;
  sum.f_s = f_s;
  sum.samples.resize(input.size());
  for (std::size_t i = 0; i < input.size(); ++i)
    sum.samples[i] = lf.samples[i] + hf.samples[i];

  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "recon_input.csv", signal_csv(input));
  write_file(dir / "recon_lf.csv", signal_csv(lf));
  write_file(dir / "recon_hf.csv", signal_csv(hf));
  write_file(dir / "recon_sum.csv", signal_csv(sum));

  std::ostringstream s;
  s << "scenario=" << cfg.scenario << "\n";
  s << "f_s_hz=" << fmt(f_s) << "\n";
  s << "duration_s=" << fmt(duration) << "\n";
  s << "tones_hz=";
  for (std::size_t i = 0; i < tones.size(); ++i)
    s << (i ? ";" : "") << format_value(tones[i].f_hz);
  s << "\n";
  if (latency) {
    // The linear-phase pair is a pure delay; report the error after
    // shifting it out, over the fully charged interior.
    const int m = *latency;
    double err2 = 0.0;
    double ref2 = 0.0;
    for (std::size_t i = 2 * static_cast<std::size_t>(m); i < input.size(); ++i) {
      const double d = sum.samples[i] - input.samples[i - static_cast<std::size_t>(m)];
      err2 += d * d;
      ref2 += input.samples[i - static_cast<std::size_t>(m)] *
              input.samples[i - static_cast<std::size_t>(m)];
    }
    s << "latency_samples=" << m << "\n";
    s << "latency_ms=" << fmt(1e3 * m / f_s) << "\n";
    s << "compensated_interior_error=" << fmt(std::sqrt(err2 / ref2)) << "\n";
  } else {
    s << "relative_rms_error=" << fmt(reconstruct_error(input, sum)) << "\n";
  }
  write_file(dir / "summary.txt", s.str());
  std::printf("wrote reconstruction CSVs and %s\n", (dir / "summary.txt").c_str());
  return 0;
}

struct CompareColumn {
  std::string name;
  double il_db = 0.0;
  double sum_phase_err_deg = 0.0;
  double latency_ms = 0.0;
  double mc_phase_dev_deg = 0.0;
};

int cmd_compare(const RunConfig& cfg) {
  const FrequencyGrid grid = cfg.grid();
  const std::vector<ToneSpec> tones{{100.0, 1.0, 0.0}, {3000.0, 0.5, 30.0}};
  const double f_s = cfg.f_s;
  const double duration = 0.1;
  const Signal input = synth_multitone(tones, f_s, duration);
  ToleranceSpec spec;
  spec.tol_fraction = cfg.tol;
  spec.n_samples = cfg.n_samples;
  spec.master_seed = cfg.seed;

  auto measured_latency_ms = [&](const Signal& sum) {
    return 1e3 *
           static_cast<double>(cross_correlation_lag(input, sum, input.size() / 2)) / f_s;
  };
  auto summed = [&](const Signal& a, const Signal& b) {
    Signal s;
    s.f_s = f_s;
    s.samples.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s.samples[i] = a.samples[i] + b.samples[i];
    return s;
  };

  // LC2 column.
  CompareColumn lc2{"lc2"};
  {
    RunConfig c = cfg;
    c.scenario = "lc2";
    Prepared p = prepare(c);
    lc2.il_db = max_flat_band_il(p.sweep);
    lc2.sum_phase_err_deg = phase_metrics(p.sweep).max_sum_phase_deg;
    auto [h_lf, h_hf] = tone_transfers(p, tones);
    lc2.latency_ms = measured_latency_ms(
        summed(branch_response_time(tones, h_lf, f_s, duration),
               branch_response_time(tones, h_hf, f_s, duration)));
    lc2.mc_phase_dev_deg = mc_run(c.lc2(), spec, grid).agg_max_phase_dev_flat_deg;
  }

  // FIR column.
  CompareColumn fir{"fir"};
  {
    RunConfig c = cfg;
    c.scenario = "fir";
    const FirPair pair = design_fir(c.fir());
    Prepared p = prepare(c);
    fir.il_db = max_flat_band_il(p.sweep);
    // The complementary pair sums to a pure delay; report the phase error
    // that remains after the delay itself is taken out.
    double worst = 0.0;
    const double tau = pair.latency_seconds();
    for (const auto& pr : p.sweep.pairs) {
      const Complex compensated = pr.sum * std::polar(1.0, two_pi * pr.f_hz * tau);
      worst = std::max(worst, std::abs(normalize_deg(std::arg(compensated) * 180.0 /
                                                     std::numbers::pi)));
    }
    fir.sum_phase_err_deg = worst;
    fir.latency_ms =
        measured_latency_ms(summed(fir_filter(pair.h_lp, input), fir_filter(pair.h_hp, input)));
    fir.mc_phase_dev_deg = 0.0;  // no physical components to perturb
  }

  // RTR column: ideal reference everywhere except the tolerance row,
  // which uses the non-ideal defaults.
  CompareColumn rtr{"rtr"};
  {
    RunConfig c = cfg;
    c.scenario = "rtr";
    Prepared p = prepare(c);
    rtr.il_db = max_flat_band_il(p.sweep);
    rtr.sum_phase_err_deg = phase_metrics(p.sweep).max_sum_phase_deg;
    auto [h_lf, h_hf] = tone_transfers(p, tones);
    rtr.latency_ms = measured_latency_ms(
        summed(branch_response_time(tones, h_lf, f_s, duration),
               branch_response_time(tones, h_hf, f_s, duration)));
    RunConfig n = cfg;
    n.scenario = "rtr-nonideal";
    rtr.mc_phase_dev_deg = mc_run(n.rtr(), spec, grid).agg_max_phase_dev_flat_deg;
  }

  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);

  std::ostringstream csv;
  csv << "metric,lc2,fir,rtr\n";
  auto row = [&](const char* name, double a, double b, double c) {
    csv << name << "," << fmt(a) << "," << fmt(b) << "," << fmt(c) << "\n";
  };
  row("insertion_loss_db", lc2.il_db, fir.il_db, rtr.il_db);
  row("sum_phase_err_deg_max", lc2.sum_phase_err_deg, fir.sum_phase_err_deg,
      rtr.sum_phase_err_deg);
  row("latency_ms", lc2.latency_ms, fir.latency_ms, rtr.latency_ms);
  row("mc_phase_dev_deg_max", lc2.mc_phase_dev_deg, fir.mc_phase_dev_deg,
      rtr.mc_phase_dev_deg);
  write_file(dir / "compare.csv", csv.str());

  std::ostringstream txt;
  txt << "crossover comparison (computed from this build, never hard-coded)\n\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-26s %14s %14s %14s\n", "metric", "lc2", "fir", "rtr");
  txt << line;
  auto trow = [&](const char* name, double a, double b, double c) {
    std::snprintf(line, sizeof(line), "%-26s %14.6g %14.6g %14.6g\n", name, a, b, c);
    txt << line;
  };
  trow("insertion_loss_db", lc2.il_db, fir.il_db, rtr.il_db);
  trow("sum_phase_err_deg_max", lc2.sum_phase_err_deg, fir.sum_phase_err_deg,
       rtr.sum_phase_err_deg);
  trow("latency_ms", lc2.latency_ms, fir.latency_ms, rtr.latency_ms);
  trow("mc_phase_dev_deg_max", lc2.mc_phase_dev_deg, fir.mc_phase_dev_deg,
       rtr.mc_phase_dev_deg);
  txt << "\nnotes:\n";
  txt << "- insertion loss: largest flat-band -20*log10|H_LF + H_HF|\n";
  txt << "- sum phase error: largest |arg(H_LF + H_HF)|; the fir value is taken\n";
  txt << "  after removing its (N-1)/2-sample design delay\n";
  txt << "- latency: cross-correlation lag of a reconstructed 100 Hz + 3 kHz\n";
  txt << "  multitone against the input, at " << format_value(f_s) << " Hz sampling\n";
  txt << "- mc phase dev: largest flat-band branch-phase deviation from nominal\n";
  txt << "  over " << spec.n_samples << " samples at " << format_value(spec.tol_fraction * 100.0)
      << "% tolerance, seed " << spec.master_seed << "; the rtr cell uses the non-ideal\n";
  txt << "  parameters (k = 0.999, R_w = R_s = 0.1 ohm); the fir cell is 0 because a\n";
  txt << "  tap set has no physical components to perturb\n";
  write_file(dir / "compare.txt", txt.str());
  std::printf("wrote %s and %s\n", (dir / "compare.csv").c_str(),
              (dir / "compare.txt").c_str());
  return 0;
}

}  // namespace

// Flat "key = value" config support.  CLI11's own config machinery only runs
// on the root app, so the file is expanded into synthetic tokens placed right
// after the subcommand name; explicit flags come later and take precedence
// via the TakeLast policy.
static int expand_config_args(const CLI::App& sub, std::vector<std::string>& args,
                              std::size_t insert_at) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        std::fprintf(stderr, "error: --config requires a file path\n");
        return 1;
      }
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return 0;

  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "error: cannot open config file '%s'\n", path.c_str());
    return 1;
  }
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
  };
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: %s:%d: expected key = value\n", path.c_str(), lineno);
      return 1;
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    while (key.rfind("-", 0) == 0) key.erase(0, 1);
    if (key.empty() || value.empty()) {
      std::fprintf(stderr, "error: %s:%d: expected key = value\n", path.c_str(), lineno);
      return 1;
    }
    if (key == "config") continue;
    if (sub.get_option_no_throw("--" + key) == nullptr) {
      std::fprintf(stderr, "error: %s:%d: unknown config key '%s'\n", path.c_str(), lineno,
                   key.c_str());
      return 1;
    }
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), tokens.begin(),
              tokens.end());
  return 0;
}

int main(int argc, char** argv) {
  CLI::App app{"resonant transformer router analysis tool"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  auto add_common = [&](CLI::App* sub) {
    auto opt = [&sub](CLI::Option* o) { (void)sub; o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast); };
    opt(sub->add_option("--config", config_path, "flat key = value file; flags override it"));
    opt(sub->add_option("--scenario", cfg.scenario,
                        "rtr | rtr-nonideal | lc2 | fir | netlist:<path>"));
    opt(sub->add_option("--fmin", cfg.f_min, "sweep start, Hz"));
    opt(sub->add_option("--fmax", cfg.f_max, "sweep end, Hz"));
    opt(sub->add_option("--npoints", cfg.n_points, "grid points"));
    opt(sub->add_option("--f0", cfg.f0, "crossover / FIR cutoff, Hz"));
    opt(sub->add_option("--c3", cfg.c3, "junction capacitor, F"));
    opt(sub->add_option("--k", cfg.k, "coupling coefficient"));
    opt(sub->add_option("--rw", cfg.r_w, "winding resistance, ohm"));
    opt(sub->add_option("--rs", cfg.r_s, "source resistance, ohm"));
    opt(sub->add_option("--rload", cfg.r_load, "per-branch load, ohm"));
    opt(sub->add_option("--esrl", cfg.esr_l, "series resistance of the lp inductor, ohm"));
    opt(sub->add_option("--esrc", cfg.esr_c, "series resistance of the hp capacitor, ohm"));
    opt(sub->add_option("--ntaps", cfg.n_taps, "FIR taps, odd"));
    opt(sub->add_option("--fs", cfg.f_s, "sample rate, Hz"));
    opt(sub->add_option("--tol", cfg.tol, "tolerance fraction"));
    opt(sub->add_option("--n", cfg.n_samples, "sample count"));
    opt(sub->add_option("--seed", cfg.seed, "master seed"));
    opt(sub->add_option("--out", cfg.out_dir, "output directory"));
  };

  CLI::App* sweep = app.add_subcommand("sweep", "AC sweep to sweep.csv + summary.txt");
  CLI::App* mc = app.add_subcommand("mc", "tolerance Monte Carlo to mc.csv + summary.txt");
  CLI::App* compare =
      app.add_subcommand("compare", "three-topology table to compare.csv + compare.txt");
  CLI::App* recon =
      app.add_subcommand("recon", "time-domain reconstruction CSVs + summary.txt");
  for (CLI::App* sub : {sweep, mc, compare, recon}) add_common(sub);

  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    const CLI::App* named = app.get_subcommand_no_throw(args[i]);
    if (named != nullptr) {
      if (int rc = expand_config_args(*named, args, i + 1)) return rc;
      break;
    }
  }
  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (mc->parsed()) return cmd_mc(cfg);
    if (compare->parsed()) return cmd_compare(cfg);
    if (recon->parsed()) return cmd_recon(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
