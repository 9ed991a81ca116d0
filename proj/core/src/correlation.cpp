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

#include "oqlab/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "oqlab/error.hpp"

namespace oqlab {

G2Histogram start_stop_histogram(const ClickStream& start, const ClickStream& stop,
                                 double bin_width_ns, double range_ns) {
  if (!(bin_width_ns > 0.0) || !(range_ns >= bin_width_ns)) {
    throw Error(ErrorCode::kInvalidArgument, "need bin_width > 0 and range >= bin_width");
  }
  G2Histogram h;
  h.bin_width_ns = bin_width_ns;
  const auto bins = static_cast<std::size_t>(std::llround(range_ns / bin_width_ns));
  const double half = 0.5 * static_cast<double>(bins) * bin_width_ns;
  h.counts.assign(bins, 0);
  h.normalized.assign(bins, 0.0);
  h.delays_ns.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    h.delays_ns[b] = -half + (static_cast<double>(b) + 0.5) * bin_width_ns;
  }
  if (start.empty() || stop.empty()) {
    h.empty_input = true;
    return h;
  }

  const auto& stops = stop.events();
  std::size_t next = 0;
  for (const ClickEvent& s : start.events()) {
    ++h.starts;
    const double open = s.time_ns - half;
    while (next < stops.size() && stops[next].time_ns < open) ++next;
    if (next == stops.size()) break;
    const double tau = stops[next].time_ns - s.time_ns;
    if (tau >= half) continue;
    const auto b = static_cast<std::size_t>(std::floor((tau + half) / bin_width_ns));
    if (b < bins) ++h.counts[b];
  }

  double tail_sum = 0.0;
  std::size_t tail_bins = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    if (std::abs(h.delays_ns[b]) >= 0.8 * half) {
      tail_sum += static_cast<double>(h.counts[b]);
      ++tail_bins;
    }
  }
  const double tail_mean = tail_bins > 0 ? tail_sum / static_cast<double>(tail_bins) : 0.0;
  if (tail_mean <= 0.0) {
    h.unnormalized = true;
    return h;
  }
  for (std::size_t b = 0; b < bins; ++b) {
    h.normalized[b] = static_cast<double>(h.counts[b]) / tail_mean;
  }
  return h;
}

double g2_zero(const G2Histogram& h, double window_ns) {
  const double range = h.bin_width_ns * static_cast<double>(h.delays_ns.size());
  if (!(window_ns > 0.0) || window_ns > range + 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "g2 window must be positive and within the range");
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t b = 0; b < h.delays_ns.size(); ++b) {
    if (std::abs(h.delays_ns[b]) <= 0.5 * window_ns + 1e-12) {
      sum += h.normalized[b];
      ++n;
    }
  }
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "g2 window is narrower than one bin");
  return sum / static_cast<double>(n);
}

double dip_half_width(const G2Histogram& h, double level) {
  const auto& x = h.delays_ns;
  const auto& y = h.normalized;
  if (x.size() < 2) return 0.0;
  // Centre bin: the one closest to tau = 0.
  const auto centre = static_cast<std::ptrdiff_t>(
      std::min_element(x.begin(), x.end(),
                       [](double a, double b) { return std::abs(a) < std::abs(b); }) -
      x.begin());
  auto crossing = [&](std::ptrdiff_t step) {
    for (std::ptrdiff_t i = centre; i + step >= 0 && i + step < std::ssize(x); i += step) {
      if (y[i + step] >= level && y[i] < level) {
        const double f = (level - y[i]) / (y[i + step] - y[i]);
        return std::abs(x[i] + f * (x[i + step] - x[i]));
      }
    }
    return std::abs(x[step > 0 ? x.size() - 1 : 0]);
  };
  return 0.5 * (crossing(+1) + crossing(-1));
}

void write_g2_csv(std::ostream& os, const G2Histogram& h) {
  os << "tau_ns,counts,g2\n";
  os << std::setprecision(10);
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    os << h.delays_ns[b] << ',' << h.counts[b] << ',' << h.normalized[b] << '\n';
  }
}

}  // namespace oqlab
