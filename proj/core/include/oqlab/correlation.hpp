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

// Start-stop (first-stop) second-order correlation estimates.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "oqlab/photonsim.hpp"

namespace oqlab {

struct G2Histogram {
  double bin_width_ns = 0.0;
  std::vector<double> delays_ns;  // bin centres, symmetric about zero
  std::vector<std::uint64_t> counts;
  std::vector<double> normalized;  // g2 estimate
  std::uint64_t starts = 0;
  // Set when either input stream is empty; all bins are then zero.
  bool empty_input = false;
  // Set when the tail bins hold no counts, so no normalization was possible.
  bool unnormalized = false;
};

// For every start click, the delay to the first stop click at or after
// (start - range/2) is binned into [-range/2, range/2); stops further out
// are ignored. This emulates a start-stop TCSPC with the stop channel delayed
// by half the range. Normalized values divide by the mean of the bins whose
// |tau| lies in the outer 20% of the half range.
G2Histogram start_stop_histogram(const ClickStream& start, const ClickStream& stop,
                                 double bin_width_ns, double range_ns);

// Mean normalized value over bins with |tau| <= window/2.
double g2_zero(const G2Histogram& h, double window_ns);

// Half width of the central dip: smallest |tau| (interpolated) at which the
// normalized curve climbs back to `level`, averaged over both sides.
double dip_half_width(const G2Histogram& h, double level);

void write_g2_csv(std::ostream& os, const G2Histogram& h);

}  // namespace oqlab
