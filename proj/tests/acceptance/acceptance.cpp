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
// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Thresholds and runtime limits are fixed here.

#include "core/calendar.hpp"
#include "core/error.hpp"
#include "core/geo.hpp"
#include "epi/epi.hpp"
#include "graph/graph.hpp"
#include "ingest/events.hpp"
#include "mobility/rog.hpp"
#include "od/od.hpp"
#include "pipeline/aggregates.hpp"
#include "pipeline/config.hpp"
#include "pipeline/pipeline.hpp"
#include "synthgen/generator.hpp"
#include "synthgen/planted.hpp"
#include "synthgen/rng.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

using namespace mobiflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void check(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v, int prec = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("mobiflow_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// ---------------------------------------------------------------- oracles

// Unit vector on the sphere.
struct Vec3 {
    long double x, y, z;
};

Vec3 to_vec(const GeoPoint& p)
{
    const long double lon = static_cast<long double>(p.longitude()) * 3.14159265358979323846264338327950288L / 180.0L;
    const long double lat = static_cast<long double>(p.latitude()) * 3.14159265358979323846264338327950288L / 180.0L;
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

// Great-circle distance through the chord length: 2 r asin(|a - b| / 2).
long double chord_distance(const GeoPoint& a, const GeoPoint& b)
{
    const Vec3 u = to_vec(a);
    const Vec3 v = to_vec(b);
    const long double c = std::sqrt((u.x - v.x) * (u.x - v.x) + (u.y - v.y) * (u.y - v.y) + (u.z - v.z) * (u.z - v.z));
    return 2.0L * 6371000.0L * std::asin(std::min(1.0L, c / 2.0L));
}

bool rel_close(long double got, long double want, long double tol)
{
    const long double scale = std::max(std::fabs(want), 1e-300L);
    return std::fabs(got - want) <= tol * scale || std::fabs(got - want) <= 1e-300L;
}

Outcome criterion_kernels()
{
    Outcome out;
    StreamRng rng(2024, 1);
    std::size_t worst_case = 0;
    long double worst = 0.0L;
    for (std::size_t trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(50);
        std::vector<WeightedSample> samples;
        std::vector<WeightedPoint> points;
        const double lon0 = rng.uniform(-170.0, 170.0);
        const double lat0 = rng.uniform(-70.0, 70.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = rng.uniform(0.0, 3600.0) + (i == 0 ? 1.0 : 0.0);
            samples.push_back({rng.uniform(-1e4, 1e4), w});
            points.push_back({GeoPoint(lon0 + rng.uniform(-2.0, 2.0), lat0 + rng.uniform(-2.0, 2.0)), w});
        }
        // weighted mean, straightforward long double sums
        long double sw = 0.0L, swx = 0.0L;
        for (const auto& s : samples) {
            sw += s.weight;
            swx += static_cast<long double>(s.weight) * s.value;
        }
        const long double wm = swx / sw;
        // centroid
        long double slon = 0.0L, slat = 0.0L;
        for (const auto& p : points) {
            slon += static_cast<long double>(p.weight) * p.point.longitude();
            slat += static_cast<long double>(p.weight) * p.point.latitude();
        }
        const GeoPoint center(static_cast<double>(slon / sw), static_cast<double>(slat / sw));
        // ROG against the chord-length distance
        long double sq = 0.0L;
        for (const auto& p : points) {
            const long double d = chord_distance(p.point, center);
            sq += static_cast<long double>(p.weight) * d * d;
        }
        const long double rog = std::sqrt(sq / sw);

        const GeoPoint c = time_weighted_centroid(points);
        const GeoPoint a = points[0].point;
        const GeoPoint b = points[n - 1].point;
        const long double hv = chord_distance(a, b);
        const double got_rog = radius_of_gyration(points);
        // mean absolute offsets of values around 1e4 may cancel; compare on the value scale
        const long double wm_scale = 1e4L;
        const bool ok_mean = std::fabs(weighted_mean(samples) - wm) <= 1e-9L * wm_scale;
        const bool ok_centroid = rel_close(c.longitude(), center.longitude(), 1e-9L) &&
                                 rel_close(c.latitude(), center.latitude(), 1e-9L);
        const bool ok_hav = a == b ? haversine_m(a, b) == 0.0 : rel_close(haversine_m(a, b), hv, 1e-9L);
        const bool ok_rog = rog == 0.0L ? got_rog < 1e-6 : rel_close(got_rog, rog, 1e-9L);
        if (!(ok_mean && ok_centroid && ok_hav && ok_rog)) {
            ++worst_case;
            worst = std::max(worst, std::fabs(static_cast<long double>(got_rog) - rog) / std::max(rog, 1.0L));
        }
    }
    out.check(worst_case == 0, std::to_string(worst_case) + " of 1000 random inputs disagree (worst ROG rel " +
                                   fmt(static_cast<double>(worst)) + ")");
    const GeoPoint p(16.37, 48.21);
    out.check(haversine_m(p, p) == 0.0, "haversine identity");
    const double antipodal = haversine_m(GeoPoint(0.0, 0.0), GeoPoint(180.0, 0.0));
    out.check(rel_close(antipodal, kPi * kEarthRadiusM, 1e-12L), "haversine antipodal = pi r");
    const double antipodal2 = haversine_m(GeoPoint(16.37, 48.21), GeoPoint(-163.63, -48.21));
    out.check(rel_close(antipodal2, kPi * kEarthRadiusM, 1e-9L), "haversine antipodal (Vienna) = pi r");
    out.note("1000 random inputs, tolerance 1e-9 relative");
    return out;
}

// ---------------------------------------------------------------- graphs

MobilityGraph random_graph(StreamRng& rng, std::size_t n, double density)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back(std::to_string(i));
    }
    MobilityGraph g(names);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.bernoulli(density)) {
                g.add_weight(i, j, rng.uniform(0.1, 10.0));
            }
        }
    }
    return g;
}

// Barrat's ordered double sum with the 1/2 factor.
double oracle_local(const MobilityGraph& g, std::size_t i)
{
    const std::size_t n = g.node_count();
    double s = 0.0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (g.weight(i, j) > 0.0) {
            s += g.weight(i, j);
            ++k;
        }
    }
    if (k < 2) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t h = 0; h < n; ++h) {
            if (j != h && g.weight(i, j) > 0.0 && g.weight(i, h) > 0.0 && g.weight(j, h) > 0.0) {
                sum += (g.weight(i, j) + g.weight(i, h)) / 2.0;
            }
        }
    }
    return sum / (s * static_cast<double>(k - 1));
}

// Every ordered triplet (j, v, h) centered at v, weight = mean of its two ties.
std::optional<double> oracle_global(const MobilityGraph& g)
{
    const std::size_t n = g.node_count();
    double closed = 0.0, total = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t h = 0; h < n; ++h) {
                if (j == h || j == v || h == v || !(g.weight(v, j) > 0.0) || !(g.weight(v, h) > 0.0)) {
                    continue;
                }
                const double w = (g.weight(v, j) + g.weight(v, h)) / 2.0;
                total += w;
                if (g.weight(j, h) > 0.0) {
                    closed += w;
                }
            }
        }
    }
    if (total == 0.0) {
        return std::nullopt;
    }
    return closed / total;
}

double oracle_modularity(const MobilityGraph& g, const std::vector<int>& c)
{
    const std::size_t n = g.node_count();
    std::vector<double> s(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            s[i] += g.weight(i, j);
        }
        two_m += s[i];
    }
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (c[i] == c[j]) {
                q += g.weight(i, j) - s[i] * s[j] / two_m;
            }
        }
    }
    return q / two_m;
}

Outcome criterion_graph_oracles()
{
    Outcome out;
    StreamRng rng(77, 2);
    std::size_t mismatches = 0;
    std::size_t graphs = 0;
    while (graphs < 200) {
        const std::size_t n = 2 + rng.below(9);
        const MobilityGraph g = random_graph(rng, n, rng.uniform(0.2, 0.9));
        if (g.total_strength() == 0.0) {
            continue;
        }
        ++graphs;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::fabs(local_clustering(g, i) - oracle_local(g, i)) > 1e-12) {
                ++mismatches;
            }
        }
        const auto want = oracle_global(g);
        try {
            const double got = global_clustering(g);
            if (!want || std::fabs(got - *want) > 1e-12) {
                ++mismatches;
            }
        }
        catch (const Error& e) {
            if (want || e.code() != Errc::no_triplets) {
                ++mismatches;
            }
        }
        std::vector<int> labels(n);
        for (auto& l : labels) {
            l = static_cast<int>(rng.below(3));
        }
        if (std::fabs(modularity(g, Partition::from_labels(labels)) - oracle_modularity(g, labels)) > 1e-12) {
            ++mismatches;
        }
    }
    out.check(mismatches == 0, std::to_string(mismatches) + " metric mismatches");

    auto named = [](std::size_t n) {
        std::vector<std::string> v;
        for (std::size_t i = 0; i < n; ++i) {
            v.push_back(std::to_string(i));
        }
        return v;
    };
    MobilityGraph tri(named(3));
    tri.add_weight(0, 1, 2.0);
    tri.add_weight(1, 2, 3.0);
    tri.add_weight(0, 2, 5.0);
    out.check(local_clustering(tri, 0) == 1.0 && local_clustering(tri, 1) == 1.0 && global_clustering(tri) == 1.0,
              "triangle anchors");
    MobilityGraph star(named(5));
    for (std::size_t i = 1; i < 5; ++i) {
        star.add_weight(0, i, static_cast<double>(i));
    }
    out.check(local_clustering(star, 0) == 0.0 && global_clustering(star) == 0.0, "star anchors");
    MobilityGraph path(named(4));
    path.add_weight(0, 1, 1.0);
    path.add_weight(1, 2, 1.0);
    path.add_weight(2, 3, 1.0);
    out.check(local_clustering(path, 1) == 0.0 && global_clustering(path) == 0.0, "path anchors");
    out.note("200 random graphs up to 10 nodes, exact to 1e-12");
    return out;
}

// Every set partition of n nodes as restricted growth strings.
void each_partition(std::size_t n, const std::function<void(const std::vector<int>&)>& fn)
{
    std::vector<int> a(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_label) {
        if (i == n) {
            fn(a);
            return;
        }
        for (int l = 0; l <= max_label + 1; ++l) {
            a[i] = l;
            rec(i + 1, std::max(max_label, l));
        }
    };
    a[0] = 0;
    rec(1, 0);
}

Outcome criterion_community_recovery()
{
    Outcome out;
    const PlantedGraph cliques = two_cliques_with_bridge();
    const CommunityResult r = greedy_communities(cliques.graph);
    double best_q = -1.0;
    std::vector<int> best;
    each_partition(cliques.graph.node_count(), [&](const std::vector<int>& labels) {
        const double q = oracle_modularity(cliques.graph, labels);
        if (q > best_q + 1e-12) {
            best_q = q;
            best = labels;
        }
    });
    out.check(r.partition.assignment == Partition::from_labels(cliques.blocks).assignment, "greedy splits the two cliques");
    out.check(Partition::from_labels(best).assignment == Partition::from_labels(cliques.blocks).assignment,
              "exhaustive optimum is the two cliques");
    out.check(std::fabs(r.modularity - best_q) < 1e-12, "greedy reaches the exhaustive optimum");

    const PlantedGraph planted = planted_block_graph(20, 8, 0.95, 2020);
    const CommunityResult pr = greedy_communities(planted.graph);
    const double agreement = block_agreement(planted.blocks, pr.partition.assignment);
    out.check(agreement >= 0.9, "planted agreement " + fmt(agreement) + " < 0.9");
    out.check(pr.partition.community_count == 20,
              "planted community count " + std::to_string(pr.partition.community_count) + " != 20");
    out.note("two cliques Q=" + fmt(r.modularity) + " (exhaustive " + fmt(best_q) + "); planted 20x8 at 95%: " +
             std::to_string(pr.partition.community_count) + " communities, agreement " + fmt(agreement));
    return out;
}

// ---------------------------------------------------------------- Mann-Whitney

// p by enumerating every assignment of pooled values to the first sample,
// U from direct pairwise comparison (doubled to stay integral).
double oracle_mw_p(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = pooled.size();
    const std::size_t na = a.size();
    auto doubled_u = [&](const std::vector<bool>& in_a) {
        long long u2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_a[i]) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (in_a[j]) {
                    continue;
                }
                u2 += pooled[i] > pooled[j] ? 2 : (pooled[i] == pooled[j] ? 1 : 0);
            }
        }
        return u2;
    };
    std::vector<bool> obs(n, false);
    for (std::size_t i = 0; i < na; ++i) {
        obs[i] = true;
    }
    const long long mean2 = static_cast<long long>(na * (n - na));
    const long long dev = std::llabs(doubled_u(obs) - mean2);
    std::uint64_t extreme = 0, total = 0;
    std::vector<bool> sel(n, false);
    std::fill(sel.begin(), sel.begin() + static_cast<long>(na), true);
    do {
        ++total;
        if (std::llabs(doubled_u(sel) - mean2) >= dev) {
            ++extreme;
        }
    } while (std::prev_permutation(sel.begin(), sel.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
}

Outcome criterion_mann_whitney()
{
    Outcome out;
    StreamRng rng(5, 3);
    std::size_t cases = 0, mismatches = 0;
    for (std::size_t na = 1; na <= 11; ++na) {
        for (std::size_t nb = 1; na + nb <= 12; ++nb) {
            for (int rep = 0; rep < 3; ++rep) {
                std::vector<double> a, b;
                // Small integer support forces ties in most draws.
                const std::uint64_t support = rep == 0 ? 4 : (rep == 1 ? 10 : 1000);
                for (std::size_t i = 0; i < na; ++i) {
                    a.push_back(static_cast<double>(rng.below(support)));
                }
                for (std::size_t i = 0; i < nb; ++i) {
                    b.push_back(static_cast<double>(rng.below(support)) + (rep == 2 ? 0.5 : 0.0));
                }
                ++cases;
                const auto r = mann_whitney_u(a, b);
                if (!r.exact || r.p != oracle_mw_p(a, b)) {
                    ++mismatches;
                }
            }
        }
    }
    out.check(mismatches == 0, std::to_string(mismatches) + " of " + std::to_string(cases) + " p-values differ");
    const std::vector<double> a{1, 2, 3}, b{10, 20, 30};
    const auto r = mann_whitney_u(a, b);
    out.check(r.u == 0.0 && r.p == 0.1, "{1,2,3} vs {10,20,30}: U=" + fmt(r.u) + " p=" + fmt(r.p, 17));
    out.note(std::to_string(cases) + " sample pairs with n_a+n_b <= 12, exact equality");
    return out;
}

// ---------------------------------------------------------------- scenarios

DayAggregates aggregate_in_memory(const Generator& gen, Date day, const PipelineConfig& cfg, const KeySchedule& keys)
{
    const DayPseudonymizer pz(keys, day);
    const LocalCalendar& cal = gen.calendar();
    EventCleaner cleaner(gen.registry(), cfg.policy, pz, cal.day_window(day));
    std::size_t line = 0;
    gen.emit_day(day, [&](const EmittedEvent& e) {
        cleaner.add(e.raw_id, e.ts, e.cell, e.kind, e.subscriber_class, ++line);
    });
    return aggregate_day(std::move(cleaner).finish(day), cfg, gen.registry(), cal);
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

Outcome criterion_lockdown()
{
    Outcome out;
    Scenario s;
    s.seed = 11;
    s.agents = 10000;
    s.first_day = Date(2020, 3, 1);
    s.last_day = Date(2020, 4, 11);
    s.phases = {{"I", Date(2020, 3, 1), Date(2020, 3, 11), 1.0, 1.0},
                {"II", Date(2020, 3, 12), Date(2020, 3, 14), 0.6, 0.6},
                {"III", Date(2020, 3, 15), Date(2020, 4, 11), 0.2, 0.3}};
    const Generator gen(s);

    PipelineConfig cfg;
    cfg.levels = {Level::political_area};
    cfg.od_levels = {Level::political_area};
    const KeySchedule keys = KeySchedule::from_master_secret("lockdown-acceptance");

    std::map<std::string, std::vector<double>> rogs;
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> small_share; // small, total
    std::map<std::string, std::vector<double>> daily_q;
    std::map<std::string, std::vector<ODMatrix>> ods;
    for (Date day : s.days()) {
        const std::string phase = s.phase_on(day).name;
        DayAggregates agg = aggregate_in_memory(gen, day, cfg, keys);
        std::vector<double> values;
        for (const auto& r : agg.rog) {
            values.push_back(r.rog_m);
        }
        const auto b = bucket_rog(values, day, cfg.buckets);
        small_share[phase].first += b.small;
        small_share[phase].second += b.total();
        auto& pool = rogs[phase];
        pool.insert(pool.end(), values.begin(), values.end());
        const ODMatrix& od = agg.od.at(Level::political_area);
        daily_q[phase].push_back(greedy_communities(symmetrize(od)).modularity);
        ods[phase].push_back(od);
    }

    const double med_i = median(rogs["I"]);
    const double med_iii = median(rogs["III"]);
    const double drop = 1.0 - med_iii / med_i;
    out.check(drop >= 0.5, "(a) median ROG drop " + fmt(drop) + " < 0.5");

    const double share_i = static_cast<double>(small_share["I"].first) / static_cast<double>(small_share["I"].second);
    const double share_iii =
        static_cast<double>(small_share["III"].first) / static_cast<double>(small_share["III"].second);
    out.check(share_iii >= 1.5 * share_i, "(b) small-bucket share rise " + fmt(share_iii / share_i) + " < 1.5");

    const double q_i = median(daily_q["I"]);
    const auto higher = static_cast<std::size_t>(
        std::count_if(daily_q["III"].begin(), daily_q["III"].end(), [&](double q) { return q > q_i; }));
    const double frac = static_cast<double>(higher) / static_cast<double>(daily_q["III"].size());
    out.check(frac >= 0.9, "(c) phase-III days above phase-I median modularity " + fmt(frac) + " < 0.9");

    const int c_i = greedy_communities(symmetrize(aggregate_period(ods["I"], "I"))).partition.community_count;
    const int c_iii = greedy_communities(symmetrize(aggregate_period(ods["III"], "III"))).partition.community_count;
    out.check(c_iii > c_i, "(d) community count " + std::to_string(c_i) + " -> " + std::to_string(c_iii));

    out.note("median ROG " + fmt(med_i) + " m -> " + fmt(med_iii) + " m (drop " + fmt(drop) + "); small share " +
             fmt(share_i) + " -> " + fmt(share_iii) + "; phase-I median Q " + fmt(q_i) + ", phase-III days above " +
             fmt(frac) + "; communities " + std::to_string(c_i) + " -> " + std::to_string(c_iii));
    return out;
}

Scenario outbreak_scenario()
{
    Scenario s;
    s.seed = 31;
    s.agents = 3000;
    s.first_day = Date(2020, 3, 1);
    s.last_day = Date(2020, 3, 28);
    s.phases = {{"all", s.first_day, s.last_day, 1.0, 1.0}};
    s.outbreak.seed_municipality = "M0031";
    s.outbreak.first_case = Date(2020, 3, 6);
    s.outbreak.lag_days = 8;
    s.outbreak.visit_first = Date(2020, 3, 2);
    s.outbreak.visit_last = Date(2020, 3, 6);
    s.outbreak.visitors_per_day = 12.0;
    return s;
}

Outcome criterion_epi_lag()
{
    Outcome out;
    const Scenario s = outbreak_scenario();
    const Generator gen(s);
    const fs::path dir = scratch_dir("epi");
    const InfectionSeries truth = gen.infections();
    write_infections_csv(dir / "infections.csv", truth);
    write_population_csv(dir / "population.csv", truth);

    PipelineConfig cfg;
    cfg.levels = {Level::municipality};
    cfg.od_levels = {Level::municipality};
    const KeySchedule keys = KeySchedule::from_master_secret("epi-acceptance");
    std::vector<ODMatrix> ods;
    for (Date d : date_range(s.outbreak.visit_first, s.outbreak.visit_last)) {
        ods.push_back(aggregate_in_memory(gen, d, cfg, keys).od.at(Level::municipality));
    }
    const InfectionSeries series = load_infection_series(dir / "infections.csv", dir / "population.csv");
    const auto arrivals = arrivals_from_seed(ods, s.outbreak.seed_municipality, s.outbreak.visit_first,
                                             s.outbreak.visit_last);
    std::set<std::string> universe;
    for (const auto& [m, pop] : series.population) {
        universe.insert(m);
    }
    const ExposureSplit split = split_exposure(arrivals, universe, s.outbreak.seed_municipality);
    const auto dates = s.days();
    const LagScan scan = lag_scan(split, cumulative_per_capita(series), dates, 0.01,
                                  first_case_date(series, s.outbreak.seed_municipality));
    out.check(scan.lag_days.has_value(), "no significant date");
    if (scan.lag_days) {
        out.check(std::abs(*scan.lag_days - 8) <= 1, "detected lag " + std::to_string(*scan.lag_days));
    }
    out.check(arrivals == gen.truth_arrivals(), "detected arrivals differ from the generator's");
    out.note("treatment " + std::to_string(split.treatment.size()) + ", control " +
             std::to_string(split.control.size()) + ", first p<0.01 on " +
             (scan.first_significant ? format_date(*scan.first_significant) : std::string("-")) + ", lag " +
             (scan.lag_days ? std::to_string(*scan.lag_days) : std::string("-")) + " days");
    fs::remove_all(dir);
    return out;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) {
            out[fs::relative(e.path(), dir).string()] = read_file(e.path());
        }
    }
    return out;
}

PipelineConfig generated_config(const fs::path& dir)
{
    return PipelineConfig::from_config(KeyValueFile::load(dir / "mobiflow.conf"));
}

Outcome criterion_determinism()
{
    Outcome out;
    Scenario s;
    s.seed = 5;
    s.agents = 2800;
    s.first_day = s.last_day = Date(2020, 3, 10);
    s.phases = {{"all", s.first_day, s.last_day, 1.0, 1.0}};
    s.noise = {0.03, 0.02, 0.01, 0.002, 0.002, 0.001};
    const fs::path dir = scratch_dir("determinism");
    const Generator gen(s);
    gen.write(dir);
    const fs::path events = dir / "events" / "2020-03-10.jsonl";
    const std::string raw = read_file(events);
    const auto lines = static_cast<std::size_t>(std::count(raw.begin(), raw.end(), '\n'));

    const PipelineConfig cfg = generated_config(dir);
    const Date day = s.first_day;
    run_day(cfg, day);
    const auto first = snapshot(cfg.day_dir(day));
    run_day(cfg, day);
    const auto second = snapshot(cfg.day_dir(day));
    out.check(first == second, "re-run of run_day is not byte-identical");

    const CellRegistry registry = load_registry(cfg);
    const DayEvents cleaned =
        parse_events(events, day, registry, cfg.policy, cfg.key_schedule(), cfg.calendar());
    const IngestReport& rep = cleaned.report;
    out.check(lines >= 1'000'000, "event file has only " + std::to_string(lines) + " lines");
    out.check(rep.read == lines, "read " + std::to_string(rep.read) + " != line count " + std::to_string(lines));
    out.check(rep.read == rep.kept + rep.filtered_by_policy + rep.quarantined(), "ingest conservation");

    // OD trip identity per level from the written stays, independently of build_od.
    for (Level level : cfg.od_levels) {
        const auto stays = read_stays_csv(cfg.day_dir(day) / stays_file_name(level), registry);
        std::map<Pseudonym, std::uint64_t> important;
        for (const auto& st : stays) {
            if (st.weight_s() >= cfg.sk) {
                ++important[st.device];
            }
        }
        std::uint64_t expected = 0;
        for (const auto& [dev, n] : important) {
            expected += n > 0 ? n - 1 : 0;
        }
        const ODMatrix od = read_od_csv(cfg.day_dir(day) / od_file_name(level), level, registry.regions(level),
                                        format_date(day));
        out.check(od.total() == expected, std::string("trip identity at ") + std::string(level_name(level)));
        out.check(od.flows == gen.truth_od(day, level).flows,
                  std::string("OD differs from generator truth at ") + std::string(level_name(level)));
    }
    out.note(std::to_string(lines) + " lines: kept " + std::to_string(rep.kept) + ", filtered " +
             std::to_string(rep.filtered_by_policy) + ", quarantined " + std::to_string(rep.quarantined()));
    fs::remove_all(dir);
    return out;
}

Outcome criterion_privacy()
{
    Outcome out;
    Scenario s;
    s.seed = 9;
    s.agents = 2000;
    s.first_day = Date(2020, 3, 16);
    s.last_day = Date(2020, 3, 17);
    s.phases = {{"all", s.first_day, s.last_day, 1.0, 1.0}};
    const fs::path dir = scratch_dir("privacy");
    const Generator gen(s);
    gen.write(dir);
    const PipelineConfig cfg = generated_config(dir);
    run_days(cfg, s.first_day, s.last_day);
    run_day(cfg, s.last_day);

    const KeySchedule keys = cfg.key_schedule();
    const DayPseudonymizer d1(keys, s.first_day);
    const DayPseudonymizer d2(keys, s.last_day);
    std::size_t same_agent = 0;
    std::set<Pseudonym> day1, day2;
    for (const auto& a : gen.agents()) {
        const Pseudonym p1 = d1(a.raw_id);
        const Pseudonym p2 = d2(a.raw_id);
        same_agent += p1 == p2 ? 1 : 0;
        day1.insert(p1);
        day2.insert(p2);
    }
    std::vector<Pseudonym> both;
    std::set_intersection(day1.begin(), day1.end(), day2.begin(), day2.end(), std::back_inserter(both));
    out.check(same_agent == 0, std::to_string(same_agent) + " agents keep their pseudonym across days");
    out.check(both.empty(), std::to_string(both.size()) + " tokens shared between days");
    out.check(day1.size() == gen.agents().size() && day2.size() == gen.agents().size(), "pseudonym collision within a day");

    // Pseudonyms seen in the aggregates must be the day's tokens.
    const auto stays = read_stays_csv(cfg.day_dir(s.first_day) / stays_file_name(Level::municipality),
                                      load_registry(cfg));
    bool known = !stays.empty();
    for (const auto& st : stays) {
        known = known && day1.count(st.device) > 0;
    }
    out.check(known, "aggregates carry tokens other than the day's pseudonyms");

    // No raw identifier may appear as a substring of any output file.
    std::unordered_set<std::string_view> ids;
    std::set<std::size_t> lengths;
    for (const auto& a : gen.agents()) {
        ids.insert(a.raw_id);
        lengths.insert(a.raw_id.size());
    }
    std::size_t leaks = 0;
    std::size_t scanned = 0;
    for (const auto& e : fs::recursive_directory_iterator(cfg.out)) {
        if (!e.is_regular_file()) {
            continue;
        }
        const std::string text = read_file(e.path());
        scanned += text.size();
        for (std::size_t len : lengths) {
            for (std::size_t i = 0; i + len <= text.size(); ++i) {
                if (ids.count(std::string_view(text).substr(i, len))) {
                    ++leaks;
                }
            }
        }
    }
    out.check(leaks == 0, std::to_string(leaks) + " raw identifiers found in outputs");
    out.note(std::to_string(gen.agents().size()) + " agents over 2 days, " + std::to_string(scanned / 1024) +
             " KiB of aggregates scanned");
    fs::remove_all(dir);
    return out;
}

struct Criterion {
    int id;
    const char* name;
    double limit_s; // 0: no runtime limit
    Outcome (*run)();
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria = {
        {1, "kernel oracles", 10.0, criterion_kernels},
        {2, "graph metric oracles", 30.0, criterion_graph_oracles},
        {3, "community recovery", 60.0, criterion_community_recovery},
        {4, "Mann-Whitney exactness", 60.0, criterion_mann_whitney},
        {5, "lock-down scenario end to end", 600.0, criterion_lockdown},
        {6, "outbreak lag detection", 60.0, criterion_epi_lag},
        {7, "pipeline determinism and conservation", 0.0, criterion_determinism},
        {8, "pseudonym privacy", 0.0, criterion_privacy},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        only.insert(std::atoi(argv[i]));
    }
    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        }
        catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0.0) {
            o.check(secs < c.limit_s, "runtime " + fmt(secs) + " s over the " + fmt(c.limit_s) + " s limit");
        }
        std::printf("%s criterion %d (%s) [%.1f s]: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
