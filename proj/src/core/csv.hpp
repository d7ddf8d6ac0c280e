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
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace mobiflow {

/// Splits one unquoted CSV record. Fields never contain separators in any of
/// the formats this project reads or writes.
std::vector<std::string_view> split_csv(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s);

/// Calls `row` for each data line after the header; `row` receives the split
/// fields and the 1-based line number. Returns the header fields.
std::vector<std::string> read_csv(const std::filesystem::path& path,
                                  const std::function<void(const std::vector<std::string_view>&, std::size_t)>& row);

/// Fixed-precision decimal rendering that is stable across runs.
std::string format_fixed(double value, int precision);

/// Writes to `<path>.tmp` and renames on commit so readers never observe a
/// half-written file.
class AtomicFile {
public:
    explicit AtomicFile(std::filesystem::path path);
    ~AtomicFile();

    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;

    std::ostream& stream() { return out_; }
    void commit();

private:
    std::filesystem::path path_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

/// Parses a non-negative integer or double, failing with Errc::malformed_line.
long long parse_int(std::string_view s, std::string_view what);
double parse_double(std::string_view s, std::string_view what);

} // namespace mobiflow
