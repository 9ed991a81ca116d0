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

#include "oqlab/count_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "oqlab/error.hpp"

namespace oqlab {

namespace {

[[noreturn]] void schema_error(const std::string& source, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << source << ":" << line << ": " << what;
  throw Error(ErrorCode::kSchema, os.str());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return is;
}

}  // namespace

void write_count_tables_csv(std::ostream& os, std::span<const CountTable> tables) {
  os << kCountTableHeader << '\n';
  for (const CountTable& t : tables) {
    for (int d = 0; d < kDetectorCount; ++d) {
      const Outcome o = detector_outcome(d);
      os << int(t.setup.n1) << ',' << int(t.setup.n2) << ',' << o.a1 << ',' << o.a2 << ','
         << t.counts[d] << '\n';
    }
  }
}

void write_count_tables_file(const std::string& path, std::span<const CountTable> tables) {
  std::ofstream os = open_output(path);
  write_count_tables_csv(os, tables);
  if (!os) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

std::vector<CountTable> read_count_tables_csv(std::istream& is, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<CountTable> tables;
  std::map<std::pair<MeasurementContext, int>, std::size_t> seen;

  while (std::getline(is, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!have_header) {
      if (text != kCountTableHeader) {
        schema_error(source, line_no, "expected header '" + std::string(kCountTableHeader) + "'");
      }
      have_header = true;
      continue;
    }
    const auto fields = split_fields(text);
    if (fields.size() != 5) schema_error(source, line_no, "expected 5 fields");
    int bits[4];
    for (int k = 0; k < 4; ++k) {
      if (!parse_number(fields[k], bits[k]) || (bits[k] != 0 && bits[k] != 1)) {
        schema_error(source, line_no, "field " + std::to_string(k + 1) + " must be 0 or 1");
      }
    }
    std::uint64_t count = 0;
    if (!parse_number(fields[4], count)) {
      schema_error(source, line_no, "counts must be a nonnegative integer");
    }
    const MeasurementContext ctx{bits[0] == 1, bits[1] == 1};
    const int detector = detector_index(bits[2], bits[3]);
    if (seen.count({ctx, detector})) {
      schema_error(source, line_no, "duplicate cell for setup " + to_string(ctx));
    }
    auto it = std::find_if(tables.begin(), tables.end(),
                           [&](const CountTable& t) { return t.setup == ctx; });
    if (it == tables.end()) {
      tables.push_back(CountTable{ctx, {}});
      it = std::prev(tables.end());
    }
    it->counts[detector] = count;
    seen[{ctx, detector}] = line_no;
  }
  if (!have_header) schema_error(source, line_no, "empty input (no header)");
  if (tables.empty()) schema_error(source, line_no, "no count rows");
  return tables;
}

std::vector<CountTable> read_count_tables_file(const std::string& path) {
  std::ifstream is = open_input(path);
  return read_count_tables_csv(is, path);
}

void write_click_stream_csv(std::ostream& os, const ClickStream& stream) {
  os << kClickStreamHeader << '\n';
  os << std::setprecision(17);
  for (const ClickEvent& e : stream.events()) os << e.time_ns << ',' << e.detector << '\n';
}

ClickStream read_click_stream_csv(std::istream& is, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<ClickEvent> events;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!have_header) {
      if (text != kClickStreamHeader) {
        schema_error(source, line_no, "expected header '" + std::string(kClickStreamHeader) + "'");
      }
      have_header = true;
      continue;
    }
    const auto fields = split_fields(text);
    ClickEvent e;
    if (fields.size() != 2 || !parse_number(fields[0], e.time_ns) ||
        !parse_number(fields[1], e.detector)) {
      schema_error(source, line_no, "expected 'time_ns,detector'");
    }
    if (!events.empty() && e.time_ns < events.back().time_ns) {
      schema_error(source, line_no, "click times must be nondecreasing");
    }
    events.push_back(e);
  }
  if (!have_header) schema_error(source, line_no, "empty input (no header)");
  return ClickStream(std::move(events));
}

}  // namespace oqlab
