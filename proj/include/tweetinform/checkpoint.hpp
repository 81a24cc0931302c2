// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ti {

enum class DType { F64, U8 };

/// One named array of a checkpoint. F64 arrays use `values`, U8 arrays
/// (embedded text such as a tokenizer) use `bytes`.
struct NamedArray {
    DType dtype = DType::F64;
    std::vector<std::size_t> shape;
    std::vector<double> values;
    std::string bytes;

    std::size_t element_count() const noexcept;

    friend bool operator==(const NamedArray&, const NamedArray&) = default;
};

/// Versioned container: a text manifest (name, dtype, shape, byte offset and
/// length per array), an embedded `key=value` config section, then the raw
/// little-endian array payload. Arrays are written in name order so equal
/// contents always serialize to identical bytes.
///
///     TICKPT 1
///     config <nbytes>
///     <config text>
///     arrays <count>
///     <name>\t<f64|u8>\t<d0,d1,...>\t<offset>\t<nbytes>
///     data
///     <payload>
class ArrayFile {
public:
    std::map<std::string, NamedArray> arrays;
    std::map<std::string, std::string> config;

    void put(const std::string& name, std::vector<std::size_t> shape, std::vector<double> values);
    void put_text(const std::string& name, std::string text);

    const NamedArray& get(const std::string& name) const;
    const std::string& get_text(const std::string& name) const;
    bool has(const std::string& name) const { return arrays.count(name) != 0; }

    const std::string& config_value(const std::string& key) const;
    std::string config_value_or(const std::string& key, std::string fallback) const;

    /// All arrays whose name starts with `prefix`, serialized to bytes; used to
    /// compare parameter groups byte for byte.
    std::string group_bytes(std::string_view prefix) const;

    std::string serialize() const;
    static ArrayFile deserialize(std::string_view bytes);
    void save(const std::filesystem::path& path) const;
    static ArrayFile load(const std::filesystem::path& path);

    friend bool operator==(const ArrayFile&, const ArrayFile&) = default;
};

} // namespace ti
