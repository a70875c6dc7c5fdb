// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "csiloc/types.hpp"

namespace csiloc {

/// Minimal `key = value` config document. Lines starting with '#' and blank
/// lines are ignored. Later keys override earlier ones.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig from_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;
    std::vector<std::string> get_string_list(
        const std::string& key, const std::vector<std::string>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace csiloc
