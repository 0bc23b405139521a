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

#include "sg2/clickstream_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sg2/errors.hpp"

namespace sg2 {

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
    std::array<char, sizeof(T)> buf;
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
    out.write(buf.data(), buf.size());
}

template <typename T>
T get_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return static_cast<T>(v);
}

ConfigHash hash_from_hex(const std::string& hex) {
    ConfigHash h{};
    if (hex.size() != 64) throw IoError("config_hash must be 64 hex digits");
    for (std::size_t i = 0; i < 32; ++i) {
        unsigned v = 0;
        if (std::sscanf(hex.c_str() + 2 * i, "%2x", &v) != 1) throw IoError("config_hash is not hexadecimal");
        h[i] = static_cast<std::uint8_t>(v);
    }
    return h;
}

void check_records(const ClickStream& s) {
    try {
        s.validate();
    } catch (const ValidationError& e) {
        throw IoError(std::string("corrupt click stream: ") + e.what());
    }
}

}  // namespace

void write_binary(const ClickStream& stream, std::ostream& out) {
    out.write("SG2C", 4);
    put_le<std::uint32_t>(out, kClickStreamVersion);
    put_le<std::uint64_t>(out, stream.n_pulses);
    out.write(reinterpret_cast<const char*>(stream.config_hash.data()), 32);
    for (const auto& r : stream.records) {
        put_le<std::uint64_t>(out, r.pulse);
        put_le<std::uint8_t>(out, r.mask);
    }
    if (!out) throw IoError("failed writing click stream");
}

ClickStream read_binary(std::istream& in) {
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    if (data.size() < kClickStreamHeaderBytes) {
        throw IoError("click stream truncated inside the header at byte offset " + std::to_string(data.size()) +
                      " (header is " + std::to_string(kClickStreamHeaderBytes) + " bytes)");
    }
    if (std::memcmp(bytes, "SG2C", 4) != 0) {
        throw IoError("not a click stream: bad magic at byte offset 0");
    }
    auto version = get_le<std::uint32_t>(bytes + 4);
    if (version != kClickStreamVersion) {
        throw IoError("click stream format version " + std::to_string(version) + " is not supported (this build reads version " +
                      std::to_string(kClickStreamVersion) + ")");
    }
    ClickStream s;
    s.n_pulses = get_le<std::uint64_t>(bytes + 8);
    std::memcpy(s.config_hash.data(), bytes + 16, 32);
    std::size_t body = data.size() - kClickStreamHeaderBytes;
    if (body % kClickRecordBytes != 0) {
        std::size_t offset = kClickStreamHeaderBytes + (body / kClickRecordBytes) * kClickRecordBytes;
        throw IoError("click stream truncated: partial record at byte offset " + std::to_string(offset));
    }
    s.records.resize(body / kClickRecordBytes);
    for (std::size_t i = 0; i < s.records.size(); ++i) {
        const unsigned char* p = bytes + kClickStreamHeaderBytes + i * kClickRecordBytes;
        s.records[i] = {get_le<std::uint64_t>(p), p[8]};
    }
    check_records(s);
    return s;
}

std::string mask_to_string(std::uint8_t mask) {
    std::string out;
    for (int d = 0; d < kNumDetectors; ++d)
        if (mask & (1u << d)) out.push_back(kDetectorNames[d]);
    return out;
}

std::uint8_t mask_from_string(const std::string& text) {
    std::uint8_t mask = 0;
    for (char c : text) {
        const char* pos = std::strchr(kDetectorNames, c);
        if (c == '\0' || pos == nullptr) throw IoError("unknown detector '" + std::string(1, c) + "'");
        mask |= static_cast<std::uint8_t>(1u << (pos - kDetectorNames));
    }
    return mask;
}

void write_csv(const ClickStream& stream, std::ostream& out) {
    out << "# sg2-clickstream version=" << kClickStreamVersion << " n_pulses=" << stream.n_pulses
        << " config_hash=" << to_hex(stream.config_hash) << "\n";
    out << "pulse_index,detectors\n";
    for (const auto& r : stream.records) out << r.pulse << "," << mask_to_string(r.mask) << "\n";
    if (!out) throw IoError("failed writing click stream CSV");
}

ClickStream read_csv(std::istream& in) {
    ClickStream s;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# sg2-clickstream", 0) != 0) {
        throw IoError("CSV click stream lacks the '# sg2-clickstream' preamble on line 1");
    }
    std::istringstream meta(line.substr(17));
    std::string token;
    bool have_pulses = false, have_hash = false;
    while (meta >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        std::string key = token.substr(0, eq), value = token.substr(eq + 1);
        if (key == "version" && std::stoul(value) != kClickStreamVersion) {
            throw IoError("click stream format version " + value + " is not supported (this build reads version " +
                          std::to_string(kClickStreamVersion) + ")");
        }
        if (key == "n_pulses") {
            s.n_pulses = std::stoull(value);
            have_pulses = true;
        }
        if (key == "config_hash") {
            s.config_hash = hash_from_hex(value);
            have_hash = true;
        }
    }
    if (!have_pulses || !have_hash) throw IoError("CSV preamble must carry n_pulses and config_hash");
    if (!std::getline(in, line) || line != "pulse_index,detectors") {
        throw IoError("CSV click stream header must be 'pulse_index,detectors'");
    }
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError("malformed CSV row at line " + std::to_string(lineno));
        try {
            s.records.push_back({std::stoull(line.substr(0, comma)), mask_from_string(line.substr(comma + 1))});
        } catch (const std::logic_error&) {
            throw IoError("malformed CSV row at line " + std::to_string(lineno));
        }
    }
    check_records(s);
    return s;
}

StreamFormat format_for_path(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0 ? StreamFormat::Csv : StreamFormat::Binary;
}

void save_stream(const ClickStream& stream, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    if (format_for_path(path) == StreamFormat::Csv) {
        write_csv(stream, out);
    } else {
        write_binary(stream, out);
    }
}

ClickStream load_stream(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return format_for_path(path) == StreamFormat::Csv ? read_csv(in) : read_binary(in);
}

}  // namespace sg2
