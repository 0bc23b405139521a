// Copyright 2026 The Sg2 Authors
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

#ifndef SG2_CLICKSTREAM_IO_HPP
#define SG2_CLICKSTREAM_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "sg2/simulate.hpp"

namespace sg2 {

// Binary layout, all integers little-endian:
//
//   offset  size  field
//   0       4     magic "SG2C"
//   4       4     format version (u32), currently 1
//   8       8     n_pulses (u64)
//   16      32    SHA-256 of the generating config's canonical text
//   48      9*N   records: pulse_index (u64), detector_mask (u8, bit 0 = A .. bit 3 = D)
//
// The CSV form starts with "# sg2-clickstream version=1 n_pulses=<n> config_hash=<hex>",
// then the header "pulse_index,detectors", then one row per record with the detectors as
// a subset string of "ABCD", e.g. "1204,AC".

inline constexpr std::uint32_t kClickStreamVersion = 1;
inline constexpr std::size_t kClickStreamHeaderBytes = 48;
inline constexpr std::size_t kClickRecordBytes = 9;

enum class StreamFormat { Binary, Csv };

void write_binary(const ClickStream& stream, std::ostream& out);
/// Throws IoError on bad magic, version mismatch (quoting both versions), truncation
/// (naming the byte offset), or records that violate ClickStream invariants.
ClickStream read_binary(std::istream& in);

void write_csv(const ClickStream& stream, std::ostream& out);
ClickStream read_csv(std::istream& in);

/// "AC" for mask 0b0101; "" for 0.
std::string mask_to_string(std::uint8_t mask);
std::uint8_t mask_from_string(const std::string& text);

/// Chooses the format from the file extension: ".csv" selects CSV, anything else binary.
void save_stream(const ClickStream& stream, const std::string& path);
ClickStream load_stream(const std::string& path);
StreamFormat format_for_path(const std::string& path);

}  // namespace sg2

#endif  // SG2_CLICKSTREAM_IO_HPP
