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
#include "epi/epi.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace mobiflow {

namespace {

// Exact counts of rank-sum subsets fit in 64 bits up to this pooled size.
constexpr std::size_t kExactCountLimit = 60;

struct Ranked {
    std::vector<long long> doubled_rank; // 2 x midrank, pooled order a then b
    double tie_term = 0.0;               // sum of t^3 - t over tie groups
};

Ranked rank_pooled(std::span<const double> a, std::span<const double> b)
{
    const std::size_t n = a.size() + b.size();
    std::vector<double> pooled;
    pooled.reserve(n);
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    for (double v : pooled) {
        if (std::isnan(v)) {
            fail(Errc::invalid_argument, "samples must not contain NaN");
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });

    Ranked r;
    r.doubled_rank.assign(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) {
            ++j;
        }
        // Ranks i+1 .. j+1 share the midrank (i + j + 2) / 2.
        const long long doubled = static_cast<long long>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) {
            r.doubled_rank[order[k]] = doubled;
        }
        const double t = static_cast<double>(j - i + 1);
        r.tie_term += t * t * t - t;
        i = j + 1;
    }
    return r;
}

double exact_p(const Ranked& r, std::size_t na, std::size_t nb, long long u2)
{
    const std::size_t n = na + nb;
    if (n > kExactCountLimit) {
        fail(Errc::invalid_argument, "exact Mann-Whitney supports at most 60 pooled observations");
    }
    long long max_sum = 0;
    for (long long v : r.doubled_rank) {
        max_sum += v;
    }
    const std::size_t width = static_cast<std::size_t>(max_sum) + 1;
    // counts[k * width + s]: subsets of size k with doubled rank sum s.
    std::vector<std::uint64_t> counts((na + 1) * width, 0);
    counts[0] = 1;
    for (std::size_t item = 0; item < n; ++item) {
        const std::size_t v = static_cast<std::size_t>(r.doubled_rank[item]);
        const std::size_t kmax = std::min(na, item + 1);
        for (std::size_t k = kmax; k >= 1; --k) {
            std::uint64_t* dst = &counts[k * width];
            const std::uint64_t* src = &counts[(k - 1) * width];
            for (std::size_t s = width - 1; s >= v; --s) {
                dst[s] += src[s - v];
                if (s == v) {
                    break;
                }
            }
        }
    }
    const long long base = static_cast<long long>(na * (na + 1));
    const long long mean2 = static_cast<long long>(na * nb);
    const long long dev_obs = std::llabs(u2 - mean2);
    std::uint64_t extreme = 0;
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < width; ++s) {
        const std::uint64_t c = counts[na * width + s];
        if (c == 0) {
            continue;
        }
        total += c;
        if (std::llabs(static_cast<long long>(s) - base - mean2) >= dev_obs) {
            extreme += c;
        }
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

double normal_p(const Ranked& r, std::size_t na, std::size_t nb, double u)
{
    const double n = static_cast<double>(na + nb);
    const double nanb = static_cast<double>(na) * static_cast<double>(nb);
    const double mu = nanb / 2.0;
    double var = nanb / 12.0 * (n + 1.0);
    if (n > 1.0) {
        var -= nanb / 12.0 * r.tie_term / (n * (n - 1.0));
    }
    if (!(var > 0.0)) {
        return 1.0;
    }
    const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
    return std::erfc(z / std::sqrt(2.0));
}

} // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b, MannWhitneyMethod method)
{
    if (a.empty() || b.empty()) {
        fail(Errc::empty_sample, "Mann-Whitney needs two non-empty samples");
    }
    const Ranked r = rank_pooled(a, b);
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    long long s2 = 0;
    for (std::size_t i = 0; i < na; ++i) {
        s2 += r.doubled_rank[i];
    }
    const long long u2 = s2 - static_cast<long long>(na * (na + 1));

    MannWhitneyResult out;
    out.u = static_cast<double>(u2) / 2.0;
    out.exact = method == MannWhitneyMethod::exact ||
                (method == MannWhitneyMethod::automatic && na + nb <= kExactMaxTotal);
    out.p = out.exact ? exact_p(r, na, nb, u2) : normal_p(r, na, nb, out.u);
    out.p = std::clamp(out.p, DBL_MIN, 1.0);
    return out;
}

} // namespace mobiflow
