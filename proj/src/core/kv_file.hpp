/*
* Copyright (C) 2026 mobiflow contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mobiflow {

/// `key = value` configuration text. `#` starts a comment; keys may repeat
/// (e.g. one `phase` line per phase). Later values of single-valued keys win.
class KeyValueFile {
public:
    static KeyValueFile parse(const std::string& text, const std::string& origin = "<string>");
    static KeyValueFile load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    void append(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    std::vector<std::string> get_all(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;

    const std::string& origin() const noexcept { return origin_; }
    std::filesystem::path base_dir() const;

    /// Keys present in the file but absent from `known`.
    std::vector<std::string> unknown_keys(const std::vector<std::string>& known) const;

private:
    std::string origin_;
    std::map<std::string, std::vector<std::string>> values_;
};

std::vector<std::string> split_list(const std::string& text, char sep = ',');

} // namespace mobiflow
