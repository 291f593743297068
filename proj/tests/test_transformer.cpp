#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "rtr/montecarlo.hpp"
#include "rtr/transformer.hpp"

using namespace rtr;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

TransformerParams ideal_1to1(double l) { return {.l1 = l, .l2 = l}; }
}  // namespace

TEST_CASE("parameter validation") {
  TransformerParams p = ideal_1to1(2.5e-3);
  CHECK_NOTHROW(p.validate());
  CHECK(p.ideal());

  p.k = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.k = 1.0001;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ideal_1to1(-1e-3);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ideal_1to1(1e-3);
  p.r_w = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.r_w = 0.1;
  CHECK_FALSE(p.ideal());
  p.r_w = 0.0;
  p.c_par = -1e-12;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("mutual inductance and leakage follow k") {
  TransformerParams p{.l1 = 2e-3, .l2 = 8e-3, .k = 0.5};
  CHECK(p.mutual() == doctest::Approx(2e-3).epsilon(1e-15));
  CHECK(p.leakage() == doctest::Approx(0.75 * 2e-3).epsilon(1e-15));

  p.k = 1.0;
  CHECK(p.mutual() == doctest::Approx(4e-3).epsilon(1e-15));
  CHECK(p.leakage() == 0.0);
}

TEST_CASE("ideal parameters zero the error term for any component values") {
  std::uint64_t state = 11;
  for (int iter = 0; iter < 1000; ++iter) {
    const double l = std::exp(uniform01(state) * 9.0 - 10.0);    // ~45 uH .. 370 mH
    const double c3 = std::exp(uniform01(state) * 9.0 - 14.0);   // ~0.8 uF .. 6.7 mF
    const double omega = two_pi * std::exp(uniform01(state) * 6.9 + 3.0);  // 20 Hz .. 20 kHz
    Complex eps = epsilon_closed_form(ideal_1to1(l), c3, 0.0, omega);
    CAPTURE(l);
    CAPTURE(c3);
    CAPTURE(omega);
    CHECK(std::abs(eps) <= 1e-13);
  }
}

TEST_CASE("pure coupling loss reduces to (k-1) times the ideal HF transfer") {
  const double l = 2.533029591058444e-3;
  const double c3 = 1e-5;
  TransformerParams lossy = ideal_1to1(l);
  lossy.k = 0.999;
  for (int i = 0; i < 10; ++i) {
    const double f = 20.0 * std::pow(10.0, 3.0 * i / 9.0);
    const double omega = two_pi * f;
    const Complex z_l{0.0, omega * l};
    const Complex z_c3{0.0, -1.0 / (omega * c3)};
    const Complex h_hf_ideal = z_l / (z_l + z_c3);
    Complex eps = epsilon_closed_form(lossy, c3, 0.0, omega);
    CAPTURE(f);
    CHECK(std::abs(eps - (lossy.k - 1.0) * h_hf_ideal) <= 1e-12);
  }
}

TEST_CASE("the error term vanishes toward DC") {
  TransformerParams p = ideal_1to1(2.533e-3);
  p.k = 0.999;
  p.r_w = 0.1;
  double prev = 1.0;
  for (double omega : {1e2, 1e1, 1e0, 1e-1, 1e-2}) {
    double mag = std::abs(epsilon_closed_form(p, 1e-5, 0.1, omega));
    CHECK(mag < prev);
    prev = mag;
  }
  CHECK(prev <= 2e-8);
}

TEST_CASE("the error magnitude is continuous in k near 1") {
  const double omega = two_pi * 300.0;
  double prev = 1.0;
  for (int m = 2; m <= 8; ++m) {
    TransformerParams p = ideal_1to1(2.533e-3);
    p.k = 1.0 - std::pow(10.0, -m);
    double mag = std::abs(epsilon_closed_form(p, 1e-5, 0.0, omega));
    CHECK(mag < prev);
    prev = mag;
  }
  CHECK(prev <= 1e-7);
}

TEST_CASE("source resistance cancels out of the input-referenced error") {
  TransformerParams p = ideal_1to1(2.533e-3);
  p.k = 0.999;
  p.r_w = 0.1;
  const double omega = two_pi * 440.0;
  Complex a = epsilon_closed_form(p, 1e-5, 0.0, omega);
  Complex b = epsilon_closed_form(p, 1e-5, 100.0, omega);
  CHECK(a == b);
}

TEST_CASE("parasitic capacitance changes the error term") {
  TransformerParams p = ideal_1to1(2.533e-3);
  p.k = 0.999;
  p.r_w = 0.1;
  Complex base = epsilon_closed_form(p, 1e-5, 0.0, two_pi * 15000.0);
  p.c_par = 1e-7;
  Complex shifted = epsilon_closed_form(p, 1e-5, 0.0, two_pi * 15000.0);
  CHECK(std::abs(base - shifted) > 1e-6);
}

TEST_CASE("error term preconditions") {
  TransformerParams p = ideal_1to1(1e-3);
  CHECK_THROWS_AS((void)epsilon_closed_form(p, 1e-5, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)epsilon_closed_form(p, 1e-5, 0.0, -5.0), std::invalid_argument);
  CHECK_THROWS_AS((void)epsilon_closed_form(p, 0.0, 0.0, 100.0), std::invalid_argument);
  CHECK_THROWS_AS((void)epsilon_closed_form(p, -1e-5, 0.0, 100.0), std::invalid_argument);
}
