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
#include "core/kv_file.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mobiflow {

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& origin)
{
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            fail(Errc::usage, origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(body.substr(0, eq));
        const auto value = trim(body.substr(eq + 1));
        if (key.empty()) {
            fail(Errc::usage, origin + ":" + std::to_string(line_no) + ": empty key");
        }
        kv.values_[std::string(key)].emplace_back(value);
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(Errc::missing_input, "cannot open configuration " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

void KeyValueFile::set(const std::string& key, const std::string& value)
{
    values_[key] = {value};
}

void KeyValueFile::append(const std::string& key, const std::string& value)
{
    values_[key].push_back(value);
}

bool KeyValueFile::has(const std::string& key) const
{
    return values_.count(key) > 0;
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end() || it->second.empty()) {
        return std::nullopt;
    }
    return it->second.back();
}

std::vector<std::string> KeyValueFile::get_all(const std::string& key) const
{
    auto it = values_.find(key);
    return it == values_.end() ? std::vector<std::string>{} : it->second;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const
{
    return get(key).value_or(fallback);
}

double KeyValueFile::get_double(const std::string& key, double fallback) const
{
    auto v = get(key);
    if (!v) {
        return fallback;
    }
    try {
        return parse_double(*v, key);
    }
    catch (const Error&) {
        fail(Errc::usage, origin_ + ": '" + key + "' expects a number, got '" + *v + "'");
    }
}

long long KeyValueFile::get_int(const std::string& key, long long fallback) const
{
    auto v = get(key);
    if (!v) {
        return fallback;
    }
    try {
        return parse_int(*v, key);
    }
    catch (const Error&) {
        fail(Errc::usage, origin_ + ": '" + key + "' expects an integer, got '" + *v + "'");
    }
}

std::filesystem::path KeyValueFile::base_dir() const
{
    std::filesystem::path p(origin_);
    return p.has_parent_path() ? p.parent_path() : std::filesystem::path(".");
}

std::vector<std::string> KeyValueFile::unknown_keys(const std::vector<std::string>& known) const
{
    std::vector<std::string> out;
    for (const auto& [key, _] : values_) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            out.push_back(key);
        }
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text, char sep)
{
    std::vector<std::string> out;
    if (trim(text).empty()) {
        return out;
    }
    for (auto f : split_csv(text, sep)) {
        out.emplace_back(f);
    }
    return out;
}

} // namespace mobiflow
