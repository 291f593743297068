#include "rtr/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rtr {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::size_t sample_count(double f_s, double duration_s) {
  if (!(f_s > 0.0)) throw std::invalid_argument("sample rate must be positive");
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
  const double n = std::round(f_s * duration_s);
  if (n < 1.0) throw std::invalid_argument("duration shorter than one sample");
  return static_cast<std::size_t>(n);
}

void check_tones(const std::vector<ToneSpec>& tones, double f_s, double duration_s) {
  std::set<double> seen;
  for (const auto& t : tones) {
    if (!(t.f_hz > 0.0) || t.f_hz >= f_s / 2.0)
      throw std::invalid_argument("tone frequency must lie in (0, f_s/2)");
    const double cycles = t.f_hz * duration_s;
    if (std::abs(cycles - std::round(cycles)) > 1e-9 * std::max(1.0, cycles))
      throw std::invalid_argument("tone is off-bin for this duration");
    if (!seen.insert(t.f_hz).second)
      throw std::invalid_argument("duplicate tone frequency");
  }
}

}  // namespace

Signal synth_multitone(const std::vector<ToneSpec>& tones, double f_s, double duration_s) {
  const std::size_t n = sample_count(f_s, duration_s);
  check_tones(tones, f_s, duration_s);
  Signal out;
  out.f_s = f_s;
  out.samples.assign(n, 0.0);
  for (const auto& tone : tones) {
    const double w = two_pi * tone.f_hz / f_s;
    const double phase = tone.phase_deg * std::numbers::pi / 180.0;
    for (std::size_t i = 0; i < n; ++i)
      out.samples[i] += tone.amplitude * std::cos(w * static_cast<double>(i) + phase);
  }
  return out;
}

Signal branch_response_time(const std::vector<ToneSpec>& tones,
                            const std::vector<Complex>& h_per_tone, double f_s,
                            double duration_s) {
  if (tones.size() != h_per_tone.size())
    throw std::invalid_argument("one response value per tone required");
  const std::size_t n = sample_count(f_s, duration_s);
  check_tones(tones, f_s, duration_s);
  Signal out;
  out.f_s = f_s;
  out.samples.assign(n, 0.0);
  for (std::size_t k = 0; k < tones.size(); ++k) {
    const double w = two_pi * tones[k].f_hz / f_s;
    const double phase =
        tones[k].phase_deg * std::numbers::pi / 180.0 + std::arg(h_per_tone[k]);
    const double amp = tones[k].amplitude * std::abs(h_per_tone[k]);
    for (std::size_t i = 0; i < n; ++i)
      out.samples[i] += amp * std::cos(w * static_cast<double>(i) + phase);
  }
  return out;
}

double reconstruct_error(const Signal& input, const Signal& reconstructed) {
  if (input.size() != reconstructed.size() || input.f_s != reconstructed.f_s)
    throw std::invalid_argument("signals must share length and rate");
  if (input.size() == 0) throw std::invalid_argument("empty input");
  double err2 = 0.0;
  double ref2 = 0.0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double d = input.samples[i] - reconstructed.samples[i];
    err2 += d * d;
    ref2 += input.samples[i] * input.samples[i];
  }
  if (ref2 == 0.0) throw std::invalid_argument("zero input signal");
  return std::sqrt(err2 / ref2);
}

double reconstruct_error(const Signal& input, const Signal& lf, const Signal& hf) {
  if (lf.size() != hf.size() || lf.f_s != hf.f_s)
    throw std::invalid_argument("branch signals must share length and rate");
  Signal sum;
  sum.f_s = lf.f_s;
  sum.samples.resize(lf.size());
  for (std::size_t i = 0; i < lf.size(); ++i)
    sum.samples[i] = lf.samples[i] + hf.samples[i];
  return reconstruct_error(input, sum);
}

Signal fir_filter(const std::vector<double>& taps, const Signal& input) {
  if (taps.empty()) throw std::invalid_argument("empty tap set");
  Signal out;
  out.f_s = input.f_s;
  out.samples.assign(input.size(), 0.0);
  for (std::size_t i = 0; i < input.size(); ++i) {
    double acc = 0.0;
    const std::size_t k_max = std::min(taps.size() - 1, i);
    for (std::size_t k = 0; k <= k_max; ++k) acc += taps[k] * input.samples[i - k];
    out.samples[i] = acc;
  }
  return out;
}

std::size_t cross_correlation_lag(const Signal& input, const Signal& output,
                                  std::size_t max_lag) {
  if (input.size() == 0 || output.size() == 0)
    throw std::invalid_argument("empty signal");
  std::size_t best_lag = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::size_t i = lag; i < output.size(); ++i) {
      if (i - lag >= input.size()) break;
      acc += output.samples[i] * input.samples[i - lag];
    }
    if (acc > best) {
      best = acc;
      best_lag = lag;
    }
  }
  return best_lag;
}

std::string signal_csv(const Signal& signal) {
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "# fs=%.12e\n", signal.f_s);
  out << buf << "index,value\n";
  for (std::size_t i = 0; i < signal.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.12e\n", i, signal.samples[i]);
    out << buf;
  }
  return out.str();
}

Signal parse_signal_csv(const std::string& text) {
  Signal signal;
  std::istringstream in(text);
  std::string line;
  bool have_fs = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# fs=", 0) == 0) {
      signal.f_s = std::strtod(line.c_str() + 5, nullptr);
      have_fs = true;
      continue;
    }
    if (line[0] == '#' || line.rfind("index,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("malformed signal row: " + line);
    char* end = nullptr;
    const double index = std::strtod(line.c_str(), &end);
    const double value = std::strtod(line.c_str() + comma + 1, nullptr);
    if (end == nullptr || static_cast<std::size_t>(index) != signal.samples.size())
      throw std::invalid_argument("signal rows out of order at: " + line);
    signal.samples.push_back(value);
  }
  if (!have_fs || !(signal.f_s > 0.0))
    throw std::invalid_argument("signal file missing '# fs=' header");
  return signal;
}

}  // namespace rtr
