// Copyright 2026 The oqlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oqlab/photonsim.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

#include "oqlab/error.hpp"

namespace oqlab {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

void require_range(double value, double lo, double hi, const char* name) {
  if (!std::isfinite(value) || value < lo || value > hi) {
    std::ostringstream os;
    os << name << " = " << value << " outside [" << lo << ", " << hi << "]";
    invalid(os.str());
  }
}

void require_nonnegative(double value, const char* name) {
  require_range(value, 0.0, std::numeric_limits<double>::max(), name);
}

}  // namespace

const char* to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::kHeraldedSpdc: return "spdc";
    case SourceKind::kSingleEmitter: return "emitter";
    case SourceKind::kWeakCoherent: return "weak";
  }
  return "unknown";
}

SourceKind source_kind_from_string(const std::string& name) {
  if (name == "spdc" || name == "heralded") return SourceKind::kHeraldedSpdc;
  if (name == "emitter" || name == "molecule") return SourceKind::kSingleEmitter;
  if (name == "weak" || name == "coherent") return SourceKind::kWeakCoherent;
  invalid("unknown source kind '" + name + "'");
}

void SourceModel::validate() const {
  require_nonnegative(mean_photons_per_pulse, "mean_photons_per_pulse");
  require_nonnegative(repetition_rate, "repetition_rate");
  require_nonnegative(pair_rate, "pair_rate");
  require_range(herald_efficiency, 0.0, 1.0, "herald_efficiency");
  require_nonnegative(excited_lifetime_ns, "excited_lifetime_ns");
  require_nonnegative(excitation_rate, "excitation_rate");
  require_range(collection_efficiency, 0.0, 1.0, "collection_efficiency");
  if (kind == SourceKind::kWeakCoherent && repetition_rate <= 0.0) {
    invalid("weak coherent source needs a positive repetition_rate");
  }
}

void DetectorModel::validate() const {
  for (double e : efficiency) {
    if (!std::isfinite(e) || e <= 0.0 || e > 1.0) invalid("detector efficiency must be in (0, 1]");
  }
  require_nonnegative(dark_rate, "dark_rate");
  require_nonnegative(dark_gate_ns, "dark_gate_ns");
  require_range(pbs_reflect_leak, 0.0, 0.5 - 1e-12, "pbs_reflect_leak");
  require_range(pbs_transmit_leak, 0.0, 0.5 - 1e-12, "pbs_transmit_leak");
  require_nonnegative(waveplate_angle_error_deg, "waveplate_angle_error_deg");
  require_nonnegative(coincidence_window_ns, "coincidence_window_ns");
  require_nonnegative(timing_jitter_ns, "timing_jitter_ns");
}

DetectorModel DetectorModel::ideal() {
  DetectorModel det;
  det.dark_rate = 0.0;
  det.pbs_reflect_leak = 0.0;
  det.pbs_transmit_leak = 0.0;
  det.waveplate_angle_error_deg = 0.0;
  det.timing_jitter_ns = 0.0;
  return det;
}

std::uint64_t CountTable::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

ClickStream::ClickStream(std::vector<ClickEvent> events) : events_(std::move(events)) {
  std::stable_sort(events_.begin(), events_.end(),
                   [](const ClickEvent& a, const ClickEvent& b) { return a.time_ns < b.time_ns; });
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Optical train

namespace {

// Maps the basis' port-0 state onto its port-1 state and back.
Mat2 port_swap(Basis basis) {
  return basis == Basis::kHV ? Mat2{{0.0, 1.0, 1.0, 0.0}} : Mat2{{1.0, 0.0, 0.0, -1.0}};
}

// Unnormalized states leaving the transmitted (0) and reflected (1) ports.
std::array<Mat2, 2> pbs_split(const Mat2& rho, Basis basis, const DetectorModel& det) {
  const auto pi = projectors(basis);
  const double t = det.pbs_transmit_leak;
  std::array<Mat2, 2> out;
  for (int k = 0; k < 2; ++k) {
    const Mat2 right = pi[k] * rho * pi[k];
    const Mat2 wrong = pi[1 - k] * rho * pi[1 - k];
    out[k] = Complex(1.0 - t) * right + Complex(t) * wrong;
  }
  if (det.pbs_reflect_leak > 0.0) {
    const Mat2 f = port_swap(basis);
    const double r = det.pbs_reflect_leak;
    out[1] = Complex(1.0 - r) * out[1] + Complex(r) * (f * out[1] * f.adjoint());
  }
  return out;
}

double weight(const Mat2& rho) { return std::max(0.0, rho.trace().real()); }

}  // namespace

std::array<double, kDetectorCount> detector_probabilities(const QubitState& state,
                                                          const MeasurementContext& setup,
                                                          const DetectorModel& det) {
  std::array<double, kDetectorCount> p{};
  const Mat2& rho = state.density();
  if (setup.n1) {
    const auto after_hv = pbs_split(rho, Basis::kHV, det);
    for (int a1 = 0; a1 < 2; ++a1) {
      if (setup.n2) {
        const auto after_da = pbs_split(after_hv[a1], Basis::kDA, det);
        for (int a2 = 0; a2 < 2; ++a2) p[detector_index(a1, a2)] = weight(after_da[a2]);
      } else {
        p[detector_index(a1, 0)] = weight(after_hv[a1]);
      }
    }
  } else if (setup.n2) {
    const auto after_da = pbs_split(rho, Basis::kDA, det);
    for (int a2 = 0; a2 < 2; ++a2) p[detector_index(0, a2)] = weight(after_da[a2]);
  } else {
    p[0] = 1.0;
  }
  for (int d = 0; d < kDetectorCount; ++d) p[d] *= det.efficiency[d];
  return p;
}

std::array<double, 3> draw_waveplate_errors(const DetectorModel& det, std::mt19937_64& rng) {
  const double bound = radians(det.waveplate_angle_error_deg);
  if (bound <= 0.0) return {0.0, 0.0, 0.0};
  std::uniform_real_distribution<double> error(-bound, bound);
  std::array<double, 3> e{};
  for (double& v : e) v = error(rng);
  return e;
}

namespace {

// Multinomial draw of `n` trials over `p` (sum <= 1; the rest is a loss bin).
std::array<std::uint64_t, kDetectorCount> multinomial(std::uint64_t n,
                                                      const std::array<double, kDetectorCount>& p,
                                                      std::mt19937_64& rng) {
  std::array<std::uint64_t, kDetectorCount> out{};
  double remaining_mass = 1.0;
  std::uint64_t remaining = n;
  for (int d = 0; d < kDetectorCount && remaining > 0; ++d) {
    if (p[d] <= 0.0) continue;
    const double q = std::clamp(p[d] / remaining_mass, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(remaining, q);
    out[d] = draw(rng);
    remaining -= out[d];
    remaining_mass -= p[d];
    if (remaining_mass <= 0.0) break;
  }
  return out;
}

}  // namespace

CountTable simulate_counts(const QubitState& state, const MeasurementContext& setup,
                           std::uint64_t photons, const DetectorModel& det, std::uint64_t seed) {
  if (photons < 1) invalid("simulate_counts needs at least one photon");
  det.validate();
  std::mt19937_64 rng(seed);
  const QubitState prepared = apply_preparation_error(state, draw_waveplate_errors(det, rng));
  CountTable table{setup, multinomial(photons, detector_probabilities(prepared, setup, det), rng)};

  const double mean_dark = det.dark_rate * det.dark_gate_ns * 1e-9 * static_cast<double>(photons);
  if (mean_dark > 0.0) {
    std::poisson_distribution<std::uint64_t> dark(mean_dark);
    for (auto& c : table.counts) c += dark(rng);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Weak field

namespace {

std::uint64_t weak_pulses(const std::array<double, kDetectorCount>& probs, double mean,
                          double dark_probability, std::uint8_t active_mask,
                          std::uint64_t pulses, std::mt19937_64& rng,
                          std::array<std::uint64_t, kDetectorCount>& counts) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Cumulative routing table; anything beyond the last entry is lost.
  std::array<double, kDetectorCount> cumulative{};
  std::partial_sum(probs.begin(), probs.end(), cumulative.begin());

  // Dark clicks are rare: jump straight to the next dark pulse per detector.
  constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();
  std::array<std::uint64_t, kDetectorCount> next_dark{};
  std::geometric_distribution<std::uint64_t> gap(dark_probability > 0.0 ? dark_probability
                                                                         : 0.5);
  for (int d = 0; d < kDetectorCount; ++d) {
    const bool active = (active_mask >> d) & 1U;
    next_dark[d] = (active && dark_probability > 0.0) ? gap(rng) : kNever;
  }

  const double p_zero = std::exp(-mean);
  std::uint64_t retained = 0;
  for (std::uint64_t pulse = 0; pulse < pulses; ++pulse) {
    std::uint8_t mask = 0;
    for (int d = 0; d < kDetectorCount; ++d) {
      if (next_dark[d] == pulse) {
        mask |= static_cast<std::uint8_t>(1U << d);
        next_dark[d] = pulse + 1 + gap(rng);
      }
    }
    // Poisson photon number by inversion; almost every pulse stops at zero.
    double u = unit(rng);
    double term = p_zero;
    double cdf = p_zero;
    int photons = 0;
    while (u > cdf && term > 0.0) {
      ++photons;
      term *= mean / photons;
      cdf += term;
    }
    for (int k = 0; k < photons; ++k) {
      const double v = unit(rng);
      for (int d = 0; d < kDetectorCount; ++d) {
        if (v < cumulative[d]) {
          mask |= static_cast<std::uint8_t>(1U << d);
          break;
        }
      }
    }
    mask &= active_mask;
    if (std::popcount(mask) == 1) {
      ++counts[std::countr_zero(mask)];
      ++retained;
    }
  }
  return retained;
}

std::uint8_t active_mask(const MeasurementContext& setup) {
  std::uint8_t mask = 0;
  for (int d = 0; d < kDetectorCount; ++d) {
    if (detector_active(setup, d)) mask |= static_cast<std::uint8_t>(1U << d);
  }
  return mask;
}

double dark_probability_per_pulse(const SourceModel& source, const DetectorModel& det) {
  return -std::expm1(-det.dark_rate / source.repetition_rate);
}

}  // namespace

CountTable weakfield_run(double theta, double phi, const SourceModel& source,
                         const MeasurementContext& setup, std::uint64_t pulses,
                         const DetectorModel& det, std::uint64_t seed) {
  if (source.kind != SourceKind::kWeakCoherent) invalid("weakfield_run needs a weak coherent source");
  source.validate();
  det.validate();
  std::mt19937_64 rng(seed);
  const auto errors = draw_waveplate_errors(det, rng);
  PrepAngles angles = PrepAngles::for_state(theta, phi);
  angles.hwp += errors[0];
  angles.qwp += errors[1];
  angles.final_qwp += errors[2];
  const QubitState state = prepare_with_angles(angles);

  CountTable table{setup, {}};
  weak_pulses(detector_probabilities(state, setup, det), source.mean_photons_per_pulse,
              dark_probability_per_pulse(source, det), active_mask(setup), pulses, rng,
              table.counts);
  return table;
}

std::array<std::uint64_t, kDetectorCount> measure_dark_counts(const SourceModel& source,
                                                              std::uint64_t pulses,
                                                              const DetectorModel& det,
                                                              std::uint64_t seed) {
  if (source.kind != SourceKind::kWeakCoherent) invalid("dark-count runs use the weak-field timing");
  source.validate();
  det.validate();
  std::mt19937_64 rng(seed);
  std::array<std::uint64_t, kDetectorCount> counts{};
  weak_pulses({}, 0.0, dark_probability_per_pulse(source, det), active_mask(kSequential), pulses,
              rng, counts);
  return counts;
}

// ---------------------------------------------------------------------------
// Click streams

namespace {

class StreamBuilder {
 public:
  StreamBuilder(int detectors, const DetectorModel& det, double duration_ns,
                std::mt19937_64& rng)
      : events_(detectors), det_(det), duration_ns_(duration_ns), rng_(rng) {}

  void click(int detector, double t_ns) {
    if (det_.timing_jitter_ns > 0.0) t_ns += jitter_(rng_) * det_.timing_jitter_ns;
    events_[detector].push_back({t_ns, detector});
  }

  void add_dark_counts() {
    if (det_.dark_rate <= 0.0) return;
    std::exponential_distribution<double> gap(det_.dark_rate * 1e-9);
    for (int d = 0; d < static_cast<int>(events_.size()); ++d) {
      for (double t = gap(rng_); t < duration_ns_; t += gap(rng_)) click(d, t);
    }
  }

  std::vector<ClickStream> finish() {
    std::vector<ClickStream> out;
    out.reserve(events_.size());
    for (auto& e : events_) out.emplace_back(std::move(e));
    return out;
  }

 private:
  std::vector<std::vector<ClickEvent>> events_;
  const DetectorModel& det_;
  double duration_ns_;
  std::mt19937_64& rng_;
  std::normal_distribution<double> jitter_{0.0, 1.0};
};

// Two-input coincidence: one output per `a` click that has a `b` click within
// `window`, emitted when the later of the two arrives.
ClickStream and_gate(const ClickStream& a, const ClickStream& b, double window, int label) {
  std::vector<ClickEvent> out;
  const auto& be = b.events();
  std::size_t lo = 0;
  for (const ClickEvent& e : a.events()) {
    while (lo < be.size() && be[lo].time_ns < e.time_ns - window) ++lo;
    std::size_t best = be.size();
    double best_gap = window;
    for (std::size_t j = lo; j < be.size() && be[j].time_ns <= e.time_ns + window; ++j) {
      const double gap = std::abs(be[j].time_ns - e.time_ns);
      if (gap <= best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    if (best < be.size()) out.push_back({std::max(e.time_ns, be[best].time_ns), label});
  }
  return ClickStream(std::move(out));
}

ClickStreamSet two_channel(std::vector<ClickStream> channels) {
  ClickStreamSet set;
  set.start = channels[0];
  set.stop = channels[1];
  set.detectors = std::move(channels);
  return set;
}

}  // namespace

ClickStreamSet generate_click_streams(const SourceModel& source, double duration_s,
                                      const DetectorModel& det, std::uint64_t seed) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) invalid("duration must be positive");
  source.validate();
  det.validate();
  std::mt19937_64 rng(seed);
  const double duration_ns = duration_s * 1e9;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  switch (source.kind) {
    case SourceKind::kWeakCoherent: {
      // Photons behind a 50:50 splitter: two independent Poisson processes.
      StreamBuilder streams(2, det, duration_ns, rng);
      const double photon_rate = source.mean_photons_per_pulse * source.repetition_rate;
      for (int d = 0; d < 2; ++d) {
        const double rate = 0.5 * photon_rate * det.efficiency[d] * 1e-9;
        if (rate <= 0.0) continue;
        std::exponential_distribution<double> gap(rate);
        for (double t = gap(rng); t < duration_ns; t += gap(rng)) streams.click(d, t);
      }
      streams.add_dark_counts();
      return two_channel(streams.finish());
    }

    case SourceKind::kSingleEmitter: {
      // Renewal process: after each emission the emitter is dark for one
      // excited-state lifetime, then re-emits after an exponential wait.
      // Skipping undetected emissions, the gap between detected photons is
      // K * lifetime + Gamma(K, excitation_rate) with K ~ 1 + Geometric(p).
      StreamBuilder streams(2, det, duration_ns, rng);
      const double p_detect = source.collection_efficiency;
      if (p_detect > 0.0 && source.excitation_rate > 0.0) {
        std::geometric_distribution<std::uint64_t> skipped(p_detect);
        const double mean_wait_ns = 1e9 / source.excitation_rate;
        double t = 0.0;
        while (true) {
          const std::uint64_t k = 1 + skipped(rng);
          std::gamma_distribution<double> wait(static_cast<double>(k), mean_wait_ns);
          t += static_cast<double>(k) * source.excited_lifetime_ns + wait(rng);
          if (t >= duration_ns) break;
          const int d = unit(rng) < 0.5 ? 0 : 1;
          if (unit(rng) < det.efficiency[d]) streams.click(d, t);
        }
      }
      streams.add_dark_counts();
      return two_channel(streams.finish());
    }

    case SourceKind::kHeraldedSpdc: {
      // Channels: 0 = S1, 1 = S2, 2 = I1, 3 = I2.
      StreamBuilder streams(4, det, duration_ns, rng);
      if (source.pair_rate > 0.0) {
        std::exponential_distribution<double> gap(source.pair_rate * 1e-9);
        const double eta = source.herald_efficiency;
        for (double t = gap(rng); t < duration_ns; t += gap(rng)) {
          const int s = unit(rng) < 0.5 ? 0 : 1;
          const int i = unit(rng) < 0.5 ? 2 : 3;
          if (unit(rng) < eta * det.efficiency[s]) streams.click(s, t);
          if (unit(rng) < eta * det.efficiency[i]) streams.click(i, t);
        }
      }
      streams.add_dark_counts();
      ClickStreamSet set;
      set.detectors = streams.finish();
      set.start = and_gate(set.detectors[0], set.detectors[2], det.coincidence_window_ns, 0);
      set.stop = and_gate(set.detectors[1], set.detectors[3], det.coincidence_window_ns, 1);
      return set;
    }
  }
  invalid("unknown source kind");
}

}  // namespace oqlab
