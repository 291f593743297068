#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rtr/linalg.hpp"

namespace rtr {

// =====================================================================
// Steady-state time-domain reconstruction.
//
// Signals are multi-tone and exactly periodic in the analysis window
// (every tone lands on a bin), so steady-state branch responses are
// exact per tone: scale by |H|, shift by arg H. No transient modeling.
// =====================================================================

struct Signal {
  std::vector<double> samples;
  double f_s = 0.0;

  [[nodiscard]] std::size_t size() const { return samples.size(); }
};

struct ToneSpec {
  double f_hz = 0.0;
  double amplitude = 1.0;
  double phase_deg = 0.0;
};

// Sum of cosines amp * cos(2*pi*f*t + phase). Every tone must satisfy
// f * duration integral (on-bin), 0 < f < f_s/2, and tones must be
// distinct. Throws std::invalid_argument otherwise.
[[nodiscard]] Signal synth_multitone(const std::vector<ToneSpec>& tones, double f_s,
                                     double duration_s);

// Applies one complex response value per tone; tones must be the set the
// signal was synthesized from.
[[nodiscard]] Signal branch_response_time(const std::vector<ToneSpec>& tones,
                                          const std::vector<Complex>& h_per_tone,
                                          double f_s, double duration_s);

// Relative RMS error rms(input - reconstructed) / rms(input).
// Throws std::invalid_argument on length mismatch or zero input.
[[nodiscard]] double reconstruct_error(const Signal& input, const Signal& reconstructed);
// Convenience: reconstructed = lf + hf, summed sample by sample.
[[nodiscard]] double reconstruct_error(const Signal& input, const Signal& lf,
                                       const Signal& hf);

// Direct-form convolution, output length equals input length, zero
// initial state.
[[nodiscard]] Signal fir_filter(const std::vector<double>& taps, const Signal& input);

// Lag (>= 0, in samples) maximizing the cross-correlation of output
// against input; the latency measurement used for comparisons.
[[nodiscard]] std::size_t cross_correlation_lag(const Signal& input, const Signal& output,
                                                std::size_t max_lag);

// Two-column "index,value" CSV with a "# fs=<Hz>" header line.
[[nodiscard]] std::string signal_csv(const Signal& signal);
[[nodiscard]] Signal parse_signal_csv(const std::string& text);

}  // namespace rtr
