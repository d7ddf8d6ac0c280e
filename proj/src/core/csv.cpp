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
#include "core/csv.hpp"

#include "core/error.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>

namespace mobiflow {

std::vector<std::string_view> split_csv(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string> read_csv(const std::filesystem::path& path,
                                  const std::function<void(const std::vector<std::string_view>&, std::size_t)>& row)
{
    std::ifstream in(path);
    if (!in) {
        fail(Errc::missing_input, "cannot open " + path.string());
    }
    std::string line;
    std::vector<std::string> header;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split_csv(line);
        if (header.empty()) {
            for (auto f : fields) {
                header.emplace_back(f);
            }
            continue;
        }
        row(fields, line_no);
    }
    return header;
}

std::string format_fixed(double value, int precision)
{
    if (value == 0.0) {
        value = 0.0; // no negative zero in outputs
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
    return buf;
}

AtomicFile::AtomicFile(std::filesystem::path path)
    : path_(std::move(path))
    , tmp_(path_.string() + ".tmp")
    , out_(tmp_, std::ios::binary | std::ios::trunc)
{
    if (!out_) {
        fail(Errc::io, "cannot write " + tmp_.string());
    }
}

AtomicFile::~AtomicFile()
{
    if (!committed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(tmp_, ec);
    }
}

void AtomicFile::commit()
{
    out_.close();
    if (!out_) {
        fail(Errc::io, "failed writing " + tmp_.string());
    }
    std::filesystem::rename(tmp_, path_);
    committed_ = true;
}

long long parse_int(std::string_view s, std::string_view what)
{
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail(Errc::malformed_line, "bad integer for " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return v;
}

double parse_double(std::string_view s, std::string_view what)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail(Errc::malformed_line, "bad number for " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return v;
}

} // namespace mobiflow
