#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "rtr/mna.hpp"
#include "rtr/timedomain.hpp"
#include "rtr/topologies.hpp"
#include "rtr/transformer.hpp"

using namespace rtr;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// mirrors the reporting pipeline: per-tone transfers via direct solves
std::pair<std::vector<Complex>, std::vector<Complex>> tone_transfers(
    const Circuit& circuit, const std::vector<ToneSpec>& tones, const std::string& lf,
    const std::string& hf) {
  std::vector<Complex> h_lf, h_hf;
  for (const auto& tone : tones) {
    const AcSolution sol = solve_ac(circuit, two_pi * tone.f_hz);
    const Complex v_in = sol.voltage("in");
    h_lf.push_back(sol.voltage(lf) / v_in);
    h_hf.push_back(sol.voltage(hf) / v_in);
  }
  return {h_lf, h_hf};
}

}  // namespace

TEST_CASE("multitone synthesis") {
  Signal s = synth_multitone({{100.0, 1.0, 0.0}}, 48000.0, 0.1);
  REQUIRE(s.size() == 4800);
  CHECK(s.f_s == 48000.0);
  CHECK(s.samples[0] == 1.0);
  for (std::size_t i : {7u, 480u, 1234u}) {
    CHECK(s.samples[i] ==
          doctest::Approx(std::cos(two_pi * 100.0 * double(i) / 48000.0)).epsilon(1e-12));
  }
  for (double v : s.samples) CHECK(std::abs(v) <= 1.0 + 1e-12);

  Signal silent = synth_multitone({}, 48000.0, 0.1);
  REQUIRE(silent.size() == 4800);
  for (double v : silent.samples) CHECK(v == 0.0);
}

TEST_CASE("synthesis rejects malformed tone sets") {
  CHECK_THROWS_AS((void)synth_multitone({{30000.0, 1.0, 0.0}}, 48000.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)synth_multitone({{24000.0, 1.0, 0.0}}, 48000.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)synth_multitone({{0.0, 1.0, 0.0}}, 48000.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)synth_multitone({{-100.0, 1.0, 0.0}}, 48000.0, 0.1),
                  std::invalid_argument);
  // 10.3 cycles in the window will not wrap around cleanly
  CHECK_THROWS_AS((void)synth_multitone({{103.0, 1.0, 0.0}}, 48000.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)synth_multitone({{100.0, 1.0, 0.0}, {100.0, 0.5, 10.0}}, 48000.0, 0.1),
      std::invalid_argument);
  CHECK_THROWS_AS((void)synth_multitone({{100.0, 1.0, 0.0}}, 0.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)synth_multitone({{100.0, 1.0, 0.0}}, 48000.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("per-tone branch response") {
  const std::vector<ToneSpec> tones{{100.0, 1.0, 0.0}, {3000.0, 0.5, 30.0}};
  Signal in = synth_multitone(tones, 48000.0, 0.1);

  Signal same = branch_response_time(tones, {Complex{1.0, 0.0}, Complex{1.0, 0.0}},
                                     48000.0, 0.1);
  CHECK(same.samples == in.samples);

  Signal gone = branch_response_time(tones, {Complex{}, Complex{}}, 48000.0, 0.1);
  for (double v : gone.samples) CHECK(v == 0.0);

  CHECK_THROWS_AS((void)branch_response_time(tones, {Complex{1.0, 0.0}}, 48000.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("reconstruction error metric") {
  const std::vector<ToneSpec> tones{{100.0, 1.0, 0.0}};
  Signal in = synth_multitone(tones, 48000.0, 0.1);
  Signal zeros;
  zeros.f_s = in.f_s;
  zeros.samples.assign(in.size(), 0.0);

  CHECK(reconstruct_error(in, in, zeros) == 0.0);
  CHECK(reconstruct_error(in, zeros) == doctest::Approx(1.0).epsilon(1e-12));

  Signal shorter = in;
  shorter.samples.pop_back();
  CHECK_THROWS_AS((void)reconstruct_error(in, shorter), std::invalid_argument);
  CHECK_THROWS_AS((void)reconstruct_error(zeros, zeros), std::invalid_argument);
  Signal empty;
  empty.f_s = 48000.0;
  CHECK_THROWS_AS((void)reconstruct_error(empty, empty), std::invalid_argument);
  Signal wrong_rate = in;
  wrong_rate.f_s = 44100.0;
  CHECK_THROWS_AS((void)reconstruct_error(in, wrong_rate), std::invalid_argument);
}

TEST_CASE("ideal router reconstructs a two-tone program exactly") {
  const std::vector<ToneSpec> tones{{100.0, 1.0, 0.0}, {3000.0, 0.5, 30.0}};
  Signal in = synth_multitone(tones, 48000.0, 0.1);
  Circuit c = build_rtr(RtrDesign::reference());
  auto [h_lf, h_hf] = tone_transfers(c, tones, "lf", "hf");
  Signal lf = branch_response_time(tones, h_lf, 48000.0, 0.1);
  Signal hf = branch_response_time(tones, h_hf, 48000.0, 0.1);
  CHECK(reconstruct_error(in, lf, hf) <= 1e-12);
}

TEST_CASE("lossy router reconstruction error is small and stable") {
  const std::vector<ToneSpec> tones{{100.0, 1.0, 0.0}, {8000.0, 1.0, 0.0}};
  Signal in = synth_multitone(tones, 48000.0, 0.1);
  RtrDesign d = RtrDesign::reference_nonideal();
  Circuit c = build_rtr(d);
  auto [h_lf, h_hf] = tone_transfers(c, tones, "lf", "hf");
  Signal lf = branch_response_time(tones, h_lf, 48000.0, 0.1);
  Signal hf = branch_response_time(tones, h_hf, 48000.0, 0.1);

  const double err = reconstruct_error(in, lf, hf);
  CHECK(err == doctest::Approx(1.017714823730e-3).epsilon(1e-9));
  CHECK(err < 1e-2);

  // per-tone complement errors bound the rms figure from both sides
  RtrParts parts = rtr_parts(d);
  TransformerParams tp;
  tp.l1 = parts.l1;
  tp.l2 = parts.l2;
  tp.k = parts.k;
  tp.r_w = parts.r_w;
  double worst = 0.0;
  for (const auto& t : tones)
    worst = std::max(worst,
                     std::abs(epsilon_closed_form(tp, parts.c3, parts.r_s, two_pi * t.f_hz)));
  CHECK(err >= worst / 2.0);
  CHECK(err <= 2.0 * worst);
}

TEST_CASE("direct-form filtering") {
  Signal in = synth_multitone({{100.0, 1.0, 0.0}, {3000.0, 0.5, 30.0}}, 48000.0, 0.01);

  Signal ident = fir_filter({1.0}, in);
  CHECK(ident.samples == in.samples);
  CHECK(ident.f_s == in.f_s);

  Signal delayed = fir_filter({0.0, 1.0}, in);
  REQUIRE(delayed.size() == in.size());
  CHECK(delayed.samples[0] == 0.0);
  for (std::size_t i = 1; i < in.size(); ++i) CHECK(delayed.samples[i] == in.samples[i - 1]);

  CHECK_THROWS_AS((void)fir_filter({}, in), std::invalid_argument);
}

TEST_CASE("complementary tap pair passes a program through as a delay") {
  FirPair pair = design_fir(FirDesign::make(101, 1000.0, 48000.0));
  const std::vector<ToneSpec> tones{{100.0, 1.0, 0.0}, {3000.0, 0.5, 30.0}};
  Signal in = synth_multitone(tones, 48000.0, 0.05);
  Signal lp = fir_filter(pair.h_lp, in);
  Signal hp = fir_filter(pair.h_hp, in);

  const int m = pair.latency_samples();
  REQUIRE(m == 50);
  double err2 = 0.0;
  double ref2 = 0.0;
  for (std::size_t i = 2 * std::size_t(m); i < in.size(); ++i) {
    const double d = (lp.samples[i] + hp.samples[i]) - in.samples[i - std::size_t(m)];
    err2 += d * d;
    ref2 += in.samples[i - std::size_t(m)] * in.samples[i - std::size_t(m)];
  }
  CHECK(std::sqrt(err2 / ref2) <= 1e-12);
}

TEST_CASE("cross-correlation lag measures the pair latency") {
  Signal in = synth_multitone({{100.0, 1.0, 0.0}, {3000.0, 0.5, 30.0}}, 48000.0, 0.1);

  CHECK(cross_correlation_lag(in, in, 100) == 0);

  Signal shifted = fir_filter({0.0, 0.0, 1.0}, in);
  CHECK(cross_correlation_lag(in, shifted, 10) == 2);

  FirPair pair = design_fir(FirDesign::reference());
  Signal lp = fir_filter(pair.h_lp, in);
  Signal hp = fir_filter(pair.h_hp, in);
  Signal sum;
  sum.f_s = in.f_s;
  sum.samples.resize(in.size());
  for (std::size_t i = 0; i < in.size(); ++i)
    sum.samples[i] = lp.samples[i] + hp.samples[i];
  CHECK(cross_correlation_lag(in, sum, in.size() / 2) == 511);

  Signal empty;
  CHECK_THROWS_AS((void)cross_correlation_lag(empty, in, 4), std::invalid_argument);
}

TEST_CASE("signal csv round-trips") {
  Signal in = synth_multitone({{200.0, 1.0, 0.0}}, 48000.0, 0.005);
  const std::string csv = signal_csv(in);
  CHECK(csv.rfind("# fs=4.800000000000e+04\nindex,value\n0,", 0) == 0);

  Signal back = parse_signal_csv(csv);
  CHECK(back.f_s == in.f_s);
  REQUIRE(back.size() == in.size());
  for (std::size_t i = 0; i < in.size(); ++i)
    CHECK(back.samples[i] == doctest::Approx(in.samples[i]).epsilon(1e-12));
}

TEST_CASE("signal csv parser rejects malformed input") {
  CHECK_THROWS_AS((void)parse_signal_csv("index,value\n0,1.0\n"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_signal_csv("# fs=48000\nindex,value\n1,1.0\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)parse_signal_csv("# fs=48000\nindex,value\n0,1.0\n2,2.0\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)parse_signal_csv("# fs=48000\ngarbage without comma\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)parse_signal_csv("# fs=-1\nindex,value\n"), std::invalid_argument);

  Signal ok = parse_signal_csv("# fs=48000\nindex,value\n0,0.5\n1,-0.25\n");
  CHECK(ok.f_s == 48000.0);
  REQUIRE(ok.size() == 2);
  CHECK(ok.samples[0] == 0.5);
  CHECK(ok.samples[1] == -0.25);
}
