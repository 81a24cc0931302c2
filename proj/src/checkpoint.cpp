// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include "tweetinform/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <sstream>

#include "tweetinform/error.hpp"
#include "util.hpp"

namespace ti {

namespace {

constexpr std::string_view kMagic = "TICKPT 1";

void append_le_f64(std::string& out, double v)
{
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
        out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
    }
}

double read_le_f64(const char* p)
{
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
    }
    return std::bit_cast<double>(bits);
}

std::string array_payload(const NamedArray& a)
{
    if (a.dtype == DType::U8) {
        return a.bytes;
    }
    std::string out;
    out.reserve(a.values.size() * 8);
    for (double v : a.values) {
        append_le_f64(out, v);
    }
    return out;
}

std::string shape_string(const std::vector<std::size_t>& shape)
{
    std::string s;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) {
            s += ',';
        }
        s += std::to_string(shape[i]);
    }
    return s;
}

// Reads one '\n'-terminated line starting at `pos`, advancing it.
std::string_view next_line(std::string_view bytes, std::size_t& pos)
{
    auto end = bytes.find('\n', pos);
    if (end == std::string_view::npos) {
        throw ValidationError("checkpoint truncated");
    }
    auto line = bytes.substr(pos, end - pos);
    pos = end + 1;
    return line;
}

} // namespace

std::size_t NamedArray::element_count() const noexcept
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

void ArrayFile::put(const std::string& name, std::vector<std::size_t> shape,
                    std::vector<double> values)
{
    NamedArray a;
    a.dtype = DType::F64;
    a.shape = std::move(shape);
    a.values = std::move(values);
    if (a.element_count() != a.values.size()) {
        throw ShapeError("array '" + name + "': shape does not match element count");
    }
    arrays[name] = std::move(a);
}

void ArrayFile::put_text(const std::string& name, std::string text)
{
    NamedArray a;
    a.dtype = DType::U8;
    a.shape = {text.size()};
    a.bytes = std::move(text);
    arrays[name] = std::move(a);
}

const NamedArray& ArrayFile::get(const std::string& name) const
{
    auto it = arrays.find(name);
    if (it == arrays.end()) {
        throw ValidationError("checkpoint has no array '" + name + "'");
    }
    return it->second;
}

const std::string& ArrayFile::get_text(const std::string& name) const
{
    const auto& a = get(name);
    if (a.dtype != DType::U8) {
        throw ValidationError("array '" + name + "' is not a byte array");
    }
    return a.bytes;
}

const std::string& ArrayFile::config_value(const std::string& key) const
{
    auto it = config.find(key);
    if (it == config.end()) {
        throw ValidationError("checkpoint config has no key '" + key + "'");
    }
    return it->second;
}

std::string ArrayFile::config_value_or(const std::string& key, std::string fallback) const
{
    auto it = config.find(key);
    return it == config.end() ? std::move(fallback) : it->second;
}

std::string ArrayFile::group_bytes(std::string_view prefix) const
{
    std::string out;
    for (const auto& [name, a] : arrays) {
        if (std::string_view(name).starts_with(prefix)) {
            out += name;
            out += '\0';
            out += array_payload(a);
        }
    }
    return out;
}

std::string ArrayFile::serialize() const
{
    std::string config_text;
    for (const auto& [k, v] : config) {
        if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos) {
            throw ValidationError("config entry '" + k + "' cannot contain '=' in key or newlines");
        }
        config_text += k + "=" + v + "\n";
    }
    std::string manifest;
    std::string payload;
    for (const auto& [name, a] : arrays) {
        if (name.find_first_of("\t\n") != std::string::npos) {
            throw ValidationError("array name '" + name + "' contains a tab or newline");
        }
        auto data = array_payload(a);
        manifest += name + "\t" + (a.dtype == DType::F64 ? "f64" : "u8") + "\t" +
                    shape_string(a.shape) + "\t" + std::to_string(payload.size()) + "\t" +
                    std::to_string(data.size()) + "\n";
        payload += data;
    }
    std::string out;
    out += kMagic;
    out += "\nconfig " + std::to_string(config_text.size()) + "\n" + config_text;
    out += "arrays " + std::to_string(arrays.size()) + "\n" + manifest;
    out += "data\n";
    out += payload;
    return out;
}

ArrayFile ArrayFile::deserialize(std::string_view bytes)
{
    std::size_t pos = 0;
    if (next_line(bytes, pos) != kMagic) {
        throw ValidationError("not a tweetinform checkpoint (bad magic)");
    }
    ArrayFile f;
    auto cfg_line = next_line(bytes, pos);
    if (!cfg_line.starts_with("config ")) {
        throw ValidationError("checkpoint: missing config section");
    }
    const auto cfg_size = static_cast<std::size_t>(util::parse_int(cfg_line.substr(7)));
    if (pos + cfg_size > bytes.size()) {
        throw ValidationError("checkpoint truncated in config section");
    }
    for (auto line : util::split(bytes.substr(pos, cfg_size), '\n')) {
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("checkpoint: malformed config line");
        }
        f.config.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
    }
    pos += cfg_size;

    auto arr_line = next_line(bytes, pos);
    if (!arr_line.starts_with("arrays ")) {
        throw ValidationError("checkpoint: missing arrays manifest");
    }
    const auto count = static_cast<std::size_t>(util::parse_int(arr_line.substr(7)));
    struct Entry {
        std::string name;
        NamedArray array;
        std::size_t offset;
        std::size_t nbytes;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < count; ++i) {
        auto fields = util::split(next_line(bytes, pos), '\t');
        if (fields.size() != 5) {
            throw ValidationError("checkpoint: malformed manifest entry");
        }
        Entry e;
        e.name = std::string(fields[0]);
        if (fields[1] == "f64") {
            e.array.dtype = DType::F64;
        } else if (fields[1] == "u8") {
            e.array.dtype = DType::U8;
        } else {
            throw ValidationError("checkpoint: unknown dtype '" + std::string(fields[1]) + "'");
        }
        if (!fields[2].empty()) {
            for (auto d : util::split(fields[2], ',')) {
                e.array.shape.push_back(static_cast<std::size_t>(util::parse_int(d)));
            }
        }
        e.offset = static_cast<std::size_t>(util::parse_int(fields[3]));
        e.nbytes = static_cast<std::size_t>(util::parse_int(fields[4]));
        const std::size_t width = e.array.dtype == DType::F64 ? 8 : 1;
        if (e.nbytes != e.array.element_count() * width) {
            throw ValidationError("checkpoint: array '" + e.name + "' size disagrees with shape");
        }
        entries.push_back(std::move(e));
    }
    if (next_line(bytes, pos) != "data") {
        throw ValidationError("checkpoint: missing data marker");
    }
    const auto payload = bytes.substr(pos);
    for (auto& e : entries) {
        if (e.offset + e.nbytes > payload.size()) {
            throw ValidationError("checkpoint: array '" + e.name + "' exceeds payload");
        }
        const char* p = payload.data() + e.offset;
        if (e.array.dtype == DType::F64) {
            e.array.values.resize(e.nbytes / 8);
            for (std::size_t k = 0; k < e.array.values.size(); ++k) {
                e.array.values[k] = read_le_f64(p + 8 * k);
            }
        } else {
            e.array.bytes.assign(p, e.nbytes);
        }
        f.arrays.emplace(std::move(e.name), std::move(e.array));
    }
    return f;
}

void ArrayFile::save(const std::filesystem::path& path) const
{
    util::write_file(path, serialize());
}

ArrayFile ArrayFile::load(const std::filesystem::path& path)
{
    return deserialize(util::read_file(path));
}

} // namespace ti
