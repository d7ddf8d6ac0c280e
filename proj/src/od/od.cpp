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
#include "od/od.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <algorithm>

namespace mobiflow {

ODMatrix::ODMatrix(std::string period_, Level level_, std::vector<std::string> regions_)
    : period(std::move(period_))
    , level(level_)
    , regions(std::move(regions_))
    , flows(regions.size() * regions.size(), 0)
{
    if (!std::is_sorted(regions.begin(), regions.end()) ||
        std::adjacent_find(regions.begin(), regions.end()) != regions.end()) {
        fail(Errc::invalid_argument, "OD regions must be sorted and unique");
    }
}

std::uint64_t ODMatrix::total() const
{
    std::uint64_t t = 0;
    for (auto f : flows) {
        t += f;
    }
    return t;
}

std::uint64_t ODMatrix::off_diagonal_total() const
{
    std::uint64_t t = total();
    for (std::size_t i = 0; i < size(); ++i) {
        t -= at(i, i);
    }
    return t;
}

std::size_t ODMatrix::index_of(const std::string& region) const
{
    auto it = std::lower_bound(regions.begin(), regions.end(), region);
    if (it == regions.end() || *it != region) {
        fail(Errc::unknown_region, "region '" + region + "' not in OD matrix");
    }
    return static_cast<std::size_t>(it - regions.begin());
}

std::vector<Stay> important_stays(std::span<const Stay> stays, double s_k)
{
    std::vector<Stay> out;
    std::copy_if(stays.begin(), stays.end(), std::back_inserter(out),
                 [s_k](const Stay& s) { return s.weight_s() >= s_k; });
    return out;
}

ODMatrix build_od(std::span<const Stay> stays, const CellRegistry& registry, Level level, const std::string& period,
                  double s_k)
{
    ODMatrix od(period, level, registry.regions(level));
    const Stay* prev = nullptr;
    for (const auto& s : stays) {
        if (s.level != level) {
            fail(Errc::level_mismatch, "stay level differs from the requested OD level");
        }
        if (prev != nullptr && prev->device != s.device) {
            prev = nullptr;
        }
        if (s.weight_s() < s_k) {
            continue;
        }
        if (prev != nullptr) {
            ++od.at(static_cast<std::size_t>(prev->region), static_cast<std::size_t>(s.region));
        }
        prev = &s;
    }
    return od;
}

MobilityGraph symmetrize(const ODMatrix& od)
{
    MobilityGraph g(od.regions);
    for (std::size_t m = 0; m < od.size(); ++m) {
        for (std::size_t n = m + 1; n < od.size(); ++n) {
            const std::uint64_t w = od.at(m, n) + od.at(n, m);
            if (w > 0) {
                g.add_weight(m, n, static_cast<double>(w));
            }
        }
    }
    return g;
}

ODMatrix aggregate_period(std::span<const ODMatrix> ods, const std::string& period)
{
    if (ods.empty()) {
        fail(Errc::empty_input, "no OD matrices to aggregate");
    }
    ODMatrix sum(period, ods.front().level, ods.front().regions);
    for (const auto& od : ods) {
        if (od.level != sum.level || od.regions != sum.regions) {
            fail(Errc::level_mismatch, "OD matrices of period '" + period + "' differ in level or regions");
        }
        for (std::size_t i = 0; i < sum.flows.size(); ++i) {
            sum.flows[i] += od.flows[i];
        }
    }
    return sum;
}

void write_od_csv(const std::filesystem::path& path, const ODMatrix& od)
{
    AtomicFile file(path);
    auto& out = file.stream();
    out << "origin,destination,count\n";
    for (std::size_t o = 0; o < od.size(); ++o) {
        for (std::size_t d = 0; d < od.size(); ++d) {
            if (od.at(o, d) > 0) {
                out << od.regions[o] << ',' << od.regions[d] << ',' << od.at(o, d) << '\n';
            }
        }
    }
    file.commit();
}

ODMatrix read_od_csv(const std::filesystem::path& path, Level level, std::vector<std::string> regions,
                     const std::string& period)
{
    ODMatrix od(period, level, std::move(regions));
    read_csv(path, [&](const std::vector<std::string_view>& f, std::size_t line) {
        if (f.size() != 3) {
            fail(Errc::malformed_line, path.string() + ":" + std::to_string(line) + ": expected origin,destination,count");
        }
        const long long c = parse_int(f[2], "count");
        if (c < 0) {
            fail(Errc::malformed_line, path.string() + ":" + std::to_string(line) + ": negative count");
        }
        od.at(od.index_of(std::string(f[0])), od.index_of(std::string(f[1]))) += static_cast<std::uint64_t>(c);
    });
    return od;
}

} // namespace mobiflow
