#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rtr/analysis.hpp"
#include "rtr/netlist.hpp"
#include "rtr/topologies.hpp"
#include "rtr/transformer.hpp"

using namespace rtr;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// small local generator for the randomized property checks
std::uint64_t mix64(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform(std::uint64_t& s, double lo, double hi) {
  const double u = double(mix64(s) >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("frequency grid is log-spaced with exact endpoints") {
  FrequencyGrid g{20.0, 20000.0, 500};
  auto f = g.points();
  REQUIRE(f.size() == 500);
  CHECK(f.front() == 20.0);
  CHECK(f.back() == 20000.0);
  const double r0 = f[1] / f[0];
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    CHECK(f[i + 1] / f[i] == doctest::Approx(r0).epsilon(1e-12));
  }

  FrequencyGrid two{100.0, 400.0, 2};
  auto e = two.points();
  REQUIRE(e.size() == 2);
  CHECK(e[0] == 100.0);
  CHECK(e[1] == 400.0);

  CHECK_THROWS_AS((FrequencyGrid{0.0, 100.0, 10}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((FrequencyGrid{-5.0, 100.0, 10}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((FrequencyGrid{100.0, 100.0, 10}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((FrequencyGrid{20.0, 20000.0, 1}.validate()), std::invalid_argument);
}

TEST_CASE("angle and level helpers") {
  CHECK(normalize_deg(180.0) == 180.0);
  CHECK(normalize_deg(-180.0) == 180.0);
  CHECK(normalize_deg(540.0) == 180.0);
  CHECK(normalize_deg(360.0) == 0.0);
  CHECK(normalize_deg(-190.0) == doctest::Approx(170.0).epsilon(1e-15));

  CHECK(circular_distance_deg(179.0, -179.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(circular_distance_deg(0.0, 180.0) == 180.0);
  CHECK(circular_distance_deg(45.0, 45.0) == 0.0);

  CHECK(to_db(0.0) == db_floor);
  CHECK(to_db(-1.0) == db_floor);
  CHECK(to_db(1e-20) == db_floor);
  CHECK(to_db(1.0) == 0.0);
  CHECK(to_db(10.0) == doctest::Approx(20.0).epsilon(1e-15));

  CHECK(in_flat_band(500.0, 1000.0));
  CHECK_FALSE(in_flat_band(501.0, 1000.0));
  CHECK_FALSE(in_flat_band(1999.0, 1000.0));
  CHECK(in_flat_band(2000.0, 1000.0));
  CHECK(in_flat_band(1000.0, std::nullopt));
}

TEST_CASE("ideal router sums to one at every sweep point") {
  Circuit c = build_rtr(RtrDesign::reference());
  SweepResult s = ac_sweep(c, "lf", "hf", FrequencyGrid{});
  REQUIRE(s.pairs.size() == 500);
  for (const auto& p : s.pairs) {
    CAPTURE(p.f_hz);
    CHECK(std::abs(p.eps) <= 1e-12);
  }
  ComplementarityReport rep = complementarity_report(s);
  CHECK(rep.max_eps_full_db == db_floor);
  CHECK(rep.max_eps_flat_db == db_floor);

  SweepResult tiny = ac_sweep(c, "lf", "hf", FrequencyGrid{100.0, 400.0, 2});
  CHECK(tiny.pairs.size() == 2);
}

TEST_CASE("complementarity is a structural property of the ideal design") {
  std::uint64_t s = 7;
  for (int trial = 0; trial < 30; ++trial) {
    const double f0 = std::exp(uniform(s, std::log(50.0), std::log(5000.0)));
    const double c3 = std::exp(uniform(s, std::log(1e-7), std::log(1e-4)));
    RtrDesign d = RtrDesign::make(f0, c3);
    Circuit c = build_rtr(d);
    SweepResult sw = ac_sweep(c, "lf", "hf", FrequencyGrid{20.0, 20000.0, 100});
    REQUIRE(sw.pairs.size() == 100);
    for (const auto& p : sw.pairs) {
      CAPTURE(trial);
      CAPTURE(f0);
      CAPTURE(c3);
      CAPTURE(p.f_hz);
      CHECK(std::abs(p.eps) <= 1e-12);
      CHECK(std::abs(std::arg(p.sum)) * 180.0 / std::numbers::pi <= 1e-10);
    }
  }
}

TEST_CASE("swept complementarity error matches the loop algebra") {
  RtrDesign d = RtrDesign::reference_nonideal();
  Circuit c = build_rtr(d);
  RtrParts parts = rtr_parts(d);
  TransformerParams tp;
  tp.l1 = parts.l1;
  tp.l2 = parts.l2;
  tp.k = parts.k;
  tp.r_w = parts.r_w;
  tp.c_par = parts.c_par;

  SweepResult s = ac_sweep(c, "lf", "hf", FrequencyGrid{20.0, 20000.0, 120});
  REQUIRE(s.pairs.size() == 120);
  for (const auto& p : s.pairs) {
    const Complex want = epsilon_closed_form(tp, parts.c3, parts.r_s, two_pi * p.f_hz);
    CAPTURE(p.f_hz);
    CHECK(std::abs(p.eps - want) <= 1e-9);
  }
}

TEST_CASE("nonideal flat-band error report is stable") {
  Circuit c = build_rtr(RtrDesign::reference_nonideal());
  SweepResult s = ac_sweep(c, "lf", "hf", FrequencyGrid{});
  s.crossover_hz = 1000.0;
  ComplementarityReport rep = complementarity_report(s);
  CHECK(rep.max_eps_flat_db == doctest::Approx(-47.20209678529).epsilon(1e-9));
  CHECK(rep.max_eps_full_db == doctest::Approx(-6.101325386803).epsilon(1e-9));
  CHECK(rep.max_eps_full_db > rep.max_eps_flat_db);

  // without a crossover the flat band covers everything
  s.crossover_hz.reset();
  ComplementarityReport all = complementarity_report(s);
  CHECK(all.max_eps_flat_db == all.max_eps_full_db);
}

TEST_CASE("phase metrics against a reference sweep") {
  Circuit c = build_rtr(RtrDesign::reference_nonideal());
  FrequencyGrid g{20.0, 20000.0, 50};
  SweepResult s = ac_sweep(c, "lf", "hf", g);
  s.crossover_hz = 1000.0;

  PhaseMetrics self = phase_metrics(s, &s);
  CHECK(self.max_branch_dev_full_deg == 0.0);
  CHECK(self.max_branch_dev_flat_deg == 0.0);
  CHECK(self.max_branch_dev_near_deg == 0.0);
  CHECK(self.max_interbranch_dev_near_deg == 0.0);
  CHECK(self.sum_phase_deg.size() == s.pairs.size());

  SweepResult other = ac_sweep(c, "lf", "hf", FrequencyGrid{20.0, 20000.0, 60});
  CHECK_THROWS_AS((void)phase_metrics(s, &other), std::invalid_argument);
}

TEST_CASE("phase deviations use the shortest way around the circle") {
  FrequencyGrid g{100.0, 200.0, 2};
  SweepResult a;
  a.grid = g;
  a.crossover_hz = 150.0;  // both points land inside the octave band
  SweepResult b = a;

  TransferPair p;
  p.f_hz = 100.0;
  p.phase_lf_deg = 179.0;
  p.phase_hf_deg = 0.0;
  a.pairs.push_back(p);
  p.f_hz = 200.0;
  a.pairs.push_back(p);

  p.f_hz = 100.0;
  p.phase_lf_deg = -179.0;
  b.pairs.push_back(p);
  p.f_hz = 200.0;
  b.pairs.push_back(p);

  PhaseMetrics m = phase_metrics(a, &b);
  CHECK(m.max_branch_dev_near_deg == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.max_branch_dev_full_deg == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.max_branch_dev_flat_deg == 0.0);
  // lf-hf difference wraps: 179 - 0 vs -179 - 0 differ by 2 degrees too
  CHECK(m.max_interbranch_dev_near_deg == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("insertion loss definitions are consistent") {
  Circuit ideal = build_rtr(RtrDesign::reference());
  SweepResult s = ac_sweep(ideal, "lf", "hf", FrequencyGrid{20.0, 20000.0, 80});
  for (double il : insertion_loss(s)) CHECK(std::abs(il) <= 1e-12);

  Circuit ni = build_rtr(RtrDesign::reference_nonideal());
  SweepResult sn = ac_sweep(ni, "lf", "hf", FrequencyGrid{20.0, 20000.0, 80});
  auto il = insertion_loss(sn);
  REQUIRE(il.size() == sn.pairs.size());
  for (std::size_t i = 0; i < il.size(); ++i) {
    CHECK(il[i] == -to_db(std::abs(sn.pairs[i].sum)));
  }
}

TEST_CASE("crossover ladder insertion loss over the flat band") {
  Lc2Design d = Lc2Design::reference();
  Circuit c = build_lc2(d);
  SweepResult s = ac_sweep(c, "lp", "hp", FrequencyGrid{});
  flip_hf_polarity(s);
  s.crossover_hz = 1000.0;
  CHECK(max_flat_band_il(s) == doctest::Approx(0.3161599917530).epsilon(1e-6));
}

TEST_CASE("polarity flip negates the high branch and undoes itself") {
  Circuit c = build_lc2(Lc2Design::reference());
  SweepResult s = ac_sweep(c, "lp", "hp", FrequencyGrid{20.0, 20000.0, 40});
  SweepResult flipped = s;
  flip_hf_polarity(flipped);
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    CHECK(flipped.pairs[i].h_hf == -s.pairs[i].h_hf);
    CHECK(flipped.pairs[i].h_lf == s.pairs[i].h_lf);
  }
  flip_hf_polarity(flipped);
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    CHECK(flipped.pairs[i].h_hf == s.pairs[i].h_hf);
    CHECK(flipped.pairs[i].sum == s.pairs[i].sum);
    CHECK(flipped.pairs[i].phase_hf_deg == s.pairs[i].phase_hf_deg);
  }
}

TEST_CASE("group delay recovers the single-pole time constant") {
  // R = 1k, C = 1u: tau = 1 ms, fc = 159.155 Hz, delay at fc is tau/2
  Circuit c = parse_netlist(
      "V1 in 0 AC 1\n"
      "R1 in out 1k\n"
      "C1 out 0 1u\n");
  const double fc = 1.0 / (two_pi * 1e-3);
  SweepResult s = ac_sweep(c, "out", "out", FrequencyGrid{fc / 1.001, fc * 1.001, 3});
  auto tau = group_delay(s, Branch::lf);
  REQUIRE(tau.size() == 3);
  CHECK(tau[1] == doctest::Approx(0.5e-3).epsilon(1e-4));

  CHECK_THROWS_AS((void)group_delay(SweepResult{}, Branch::lf), std::invalid_argument);
}

TEST_CASE("ideal router sum has no group delay") {
  Circuit c = build_rtr(RtrDesign::reference());
  SweepResult s = ac_sweep(c, "lf", "hf", FrequencyGrid{});
  for (double tau : group_delay(s, Branch::sum)) CHECK(std::abs(tau) <= 1e-9);
}

TEST_CASE("windowed-sinc pair sum is a pure delay of half the taps") {
  FirPair pair = design_fir(FirDesign::reference());
  // stay well under Nyquist so the unwrapping never skips a turn
  SweepResult s = fir_sweep(pair, FrequencyGrid{20.0, 2000.0, 2001});
  const double want = 511.0 / 48000.0;
  for (double tau : group_delay(s, Branch::sum)) {
    CHECK(tau == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("resonance search finds the interior peak only") {
  Circuit ni = build_rtr(RtrDesign::reference_nonideal());
  SweepResult s = ac_sweep(ni, "lf", "hf", FrequencyGrid{});
  auto f_peak = find_resonance(s, Branch::lf);
  REQUIRE(f_peak.has_value());
  // within one grid step of the crossover (the ratio is about 1.4%)
  CHECK(*f_peak == doctest::Approx(1000.0).epsilon(0.015));

  // the low-pass ladder is monotone, no interior maximum
  Circuit lc2 = build_lc2(Lc2Design::reference());
  SweepResult sl = ac_sweep(lc2, "lp", "hp", FrequencyGrid{});
  CHECK_FALSE(find_resonance(sl, Branch::lf).has_value());

  SweepResult synth;
  for (int i = 0; i < 10; ++i) {
    TransferPair p;
    p.f_hz = 100.0 * (i + 1);
    p.h_lf = Complex{1.0 / (i + 1.0), 0.0};
    synth.pairs.push_back(p);
  }
  CHECK_FALSE(find_resonance(synth, Branch::lf).has_value());
  synth.pairs.resize(2);
  CHECK_FALSE(find_resonance(synth, Branch::lf).has_value());
}

TEST_CASE("refined resonance search nails the winding-loss peak") {
  Circuit ni = build_rtr(RtrDesign::reference_nonideal());
  auto peak = find_resonance_refined(ni, "lf", "hf", FrequencyGrid{});
  REQUIRE(peak.has_value());
  CHECK(peak->f_hz == doctest::Approx(999.9901251871).epsilon(1e-6));
  CHECK(peak->magnitude == doctest::Approx(159.1557284957).epsilon(1e-6));
}

TEST_CASE("tap-set frequency response") {
  std::vector<double> unit{1.0};
  CHECK(fir_response(unit, 0.0, 48000.0) == Complex{1.0, 0.0});
  CHECK(fir_response(unit, 12345.0, 48000.0) == Complex{1.0, 0.0});

  CHECK_THROWS_AS((void)fir_response(unit, -1.0, 48000.0), std::invalid_argument);
  CHECK_THROWS_AS((void)fir_response(unit, 24000.0, 48000.0), std::invalid_argument);
  CHECK_THROWS_AS((void)fir_response(unit, 30000.0, 48000.0), std::invalid_argument);

  FirPair pair = design_fir(FirDesign::make(301, 1000.0, 48000.0));
  double dc = std::abs(fir_response(pair.h_lp, 0.0, 48000.0));
  CHECK(dc == doctest::Approx(1.0).epsilon(1e-12));
  for (double f : {100.0, 997.0, 5000.0, 20000.0}) {
    Complex sum = fir_response(pair.h_lp, f, 48000.0) + fir_response(pair.h_hp, f, 48000.0);
    CAPTURE(f);
    CHECK(std::abs(sum) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sweep csv layout is fixed") {
  Circuit c = build_rtr(RtrDesign::reference_nonideal());
  SweepResult s = ac_sweep(c, "lf", "hf", FrequencyGrid{20.0, 20000.0, 25});
  auto lines = split_lines(sweep_csv(s));
  REQUIRE(lines.size() == 27);
  CHECK(lines[0] ==
        "# transfers referenced to the input terminal (node after any source resistance)");
  CHECK(lines[1] ==
        "f_hz,hlf_re,hlf_im,hhf_re,hhf_im,sum_re,sum_im,eps_db,phase_lf_deg,phase_hf_deg,il_db");
  CHECK(lines[2].substr(0, 19) == "2.000000000000e+01,");
  for (std::size_t i = 2; i < lines.size(); ++i) {
    std::size_t commas = 0;
    for (char ch : lines[i])
      if (ch == ',') ++commas;
    CHECK(commas == 10);
  }
}

TEST_CASE("lenient sweeps drop unsolvable points instead of throwing") {
  // the R2 island is disconnected, so the system is singular everywhere
  Circuit c = parse_netlist(
      "V1 in 0 AC 1\n"
      "R1 in 0 8\n"
      "R2 x y 1\n");
  FrequencyGrid g{100.0, 1000.0, 10};
  CHECK_THROWS_AS((void)ac_sweep(c, "in", "in", g, false), SolveError);

  SweepResult s = ac_sweep(c, "in", "in", g, true);
  CHECK(s.pairs.empty());
  CHECK(s.warnings.size() == 10);
}

TEST_CASE("sweep rejects unknown probe nodes") {
  Circuit c = build_rtr(RtrDesign::reference());
  CHECK_THROWS_AS((void)ac_sweep(c, "lf", "nope", FrequencyGrid{}), CircuitError);
  CHECK_THROWS_AS((void)ac_sweep(c, "nope", "hf", FrequencyGrid{}), CircuitError);
}
