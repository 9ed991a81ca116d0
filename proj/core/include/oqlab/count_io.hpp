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

// CSV interchange for count tables (`n1,n2,a1,a2,counts`) and click streams
// (`time_ns,detector`).

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "oqlab/photonsim.hpp"

namespace oqlab {

inline constexpr const char* kCountTableHeader = "n1,n2,a1,a2,counts";
inline constexpr const char* kClickStreamHeader = "time_ns,detector";

// One row per detector cell of every table, in table order.
void write_count_tables_csv(std::ostream& os, std::span<const CountTable> tables);
void write_count_tables_file(const std::string& path, std::span<const CountTable> tables);

// Tables appear in order of first mention. Cells that are not listed are
// zero. Throws Error(kSchema) with the source name and line number on any
// malformed row, a duplicated cell or an empty input.
std::vector<CountTable> read_count_tables_csv(std::istream& is, const std::string& source);
std::vector<CountTable> read_count_tables_file(const std::string& path);

void write_click_stream_csv(std::ostream& os, const ClickStream& stream);
ClickStream read_click_stream_csv(std::istream& is, const std::string& source);

}  // namespace oqlab
