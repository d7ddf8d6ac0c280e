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
#include "mobiflow/mobiflow.h"

#include "core/csv.hpp"
#include "core/error.hpp"
#include "epi/epi.hpp"
#include "graph/graph.hpp"
#include "mobility/rog.hpp"
#include "od/od.hpp"
#include "pipeline/pipeline.hpp"
#include "pipeline/reports.hpp"
#include "stays/stays.hpp"
#include "synthgen/generator.hpp"

#include <filesystem>
#include <new>
#include <string>

struct mf_pipeline {
    mobiflow::KeyValueFile kv;
    std::string scratch;
};

struct mf_graph {
    mobiflow::MobilityGraph graph;
};

namespace {

using namespace mobiflow;
namespace fs = std::filesystem;

thread_local std::string g_error;
thread_local std::string g_kind;

mf_status set_error(mf_status status, const char* kind, const std::string& message)
{
    g_kind = kind;
    g_error = message;
    return status;
}

template <class Fn>
mf_status guarded(Fn&& fn) noexcept
{
    try {
        fn();
        g_error.clear();
        g_kind.clear();
        return MF_OK;
    }
    catch (const Error& e) {
        const bool usage = e.code() == Errc::usage || e.code() == Errc::invalid_argument;
        return set_error(usage ? MF_ERR_USAGE : MF_ERR_DATA, errc_name(e.code()), e.what());
    }
    catch (const fs::filesystem_error& e) {
        return set_error(MF_ERR_DATA, "Io", e.what());
    }
    catch (const std::bad_alloc&) {
        return set_error(MF_ERR_INTERNAL, "OutOfMemory", "out of memory");
    }
    catch (const std::exception& e) {
        return set_error(MF_ERR_INTERNAL, "Internal", e.what());
    }
    catch (...) {
        return set_error(MF_ERR_INTERNAL, "Internal", "unknown failure");
    }
}

void need(const void* ptr, const char* what)
{
    if (ptr == nullptr) {
        fail(Errc::usage, std::string(what) + " must not be NULL");
    }
}

Date day_arg(const char* text, const char* what)
{
    need(text, what);
    return parse_date(text);
}

PipelineConfig config_of(const mf_pipeline* p)
{
    need(p, "pipeline");
    return PipelineConfig::from_config(p->kv);
}

std::vector<SignallingEvent> read_work_events(const fs::path& dir, const CellRegistry& registry)
{
    const fs::path events = dir / "events.csv";
    if (!fs::exists(events)) {
        fail(Errc::missing_input, "no cleaned events at " + events.string() + " (run ingest first)");
    }
    return read_events_csv(events, registry);
}

} // namespace

extern "C" {

const char* mf_last_error(void)
{
    return g_error.c_str();
}

const char* mf_last_error_kind(void)
{
    return g_kind.c_str();
}

const char* mf_version(void)
{
    return "0.1.0";
}

mf_status mf_pipeline_open(const char* config_path, mf_pipeline** out)
{
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        auto p = std::make_unique<mf_pipeline>();
        p->kv = config_path ? KeyValueFile::load(config_path) : KeyValueFile::parse("", "<string>");
        PipelineConfig::from_config(p->kv); // validate early
        *out = p.release();
    });
}

mf_status mf_pipeline_set(mf_pipeline* p, const char* key, const char* value)
{
    return guarded([&] {
        need(p, "pipeline");
        need(key, "key");
        need(value, "value");
        KeyValueFile next = p->kv;
        next.set(key, value);
        PipelineConfig::from_config(next);
        p->kv = std::move(next);
    });
}

mf_status mf_pipeline_append(mf_pipeline* p, const char* key, const char* value)
{
    return guarded([&] {
        need(p, "pipeline");
        need(key, "key");
        need(value, "value");
        KeyValueFile next = p->kv;
        next.append(key, value);
        PipelineConfig::from_config(next);
        p->kv = std::move(next);
    });
}

const char* mf_pipeline_get(mf_pipeline* p, const char* key)
{
    if (p == nullptr || key == nullptr) {
        return nullptr;
    }
    const auto v = p->kv.get(key);
    if (!v) {
        return nullptr;
    }
    p->scratch = *v;
    return p->scratch.c_str();
}

void mf_pipeline_close(mf_pipeline* p)
{
    delete p;
}

mf_status mf_run_day(mf_pipeline* p, const char* day)
{
    return guarded([&] { run_day(config_of(p), day_arg(day, "day")); });
}

mf_status mf_run_days(mf_pipeline* p, const char* first_day, const char* last_day)
{
    return guarded([&] {
        const Date first = day_arg(first_day, "first_day");
        const Date last = day_arg(last_day, "last_day");
        if (last < first) {
            fail(Errc::usage, "last_day precedes first_day");
        }
        run_days(config_of(p), first, last);
    });
}

mf_status mf_run_report(mf_pipeline* p, const char* kind, const char* first_day, const char* last_day,
                        const char* period)
{
    return guarded([&] {
        need(kind, "kind");
        ReportRequest req{kind, day_arg(first_day, "first_day"), day_arg(last_day, "last_day"),
                          period ? period : ""};
        run_report(config_of(p), req);
    });
}

mf_status mf_ingest(mf_pipeline* p, const char* events_path, const char* day, const char* out_dir)
{
    return guarded([&] {
        need(events_path, "events_path");
        need(out_dir, "out_dir");
        ingest_file(config_of(p), events_path, day_arg(day, "day"), out_dir);
    });
}

mf_status mf_stays(mf_pipeline* p, const char* in_dir, const char* level)
{
    return guarded([&] {
        need(in_dir, "in_dir");
        need(level, "level");
        const PipelineConfig cfg = config_of(p);
        const Level l = parse_level_or_throw(level);
        const CellRegistry registry = load_registry(cfg);
        const auto events = read_work_events(in_dir, registry);
        write_stays_csv(fs::path(in_dir) / stays_file_name(l), detect_all_stays(events, registry, l, cfg.gap_tolerance),
                        registry);
    });
}

mf_status mf_rog(mf_pipeline* p, const char* in_dir, const char* day, const char* out_dir)
{
    return guarded([&] {
        need(in_dir, "in_dir");
        need(out_dir, "out_dir");
        const Date d = day_arg(day, "day");
        const PipelineConfig cfg = config_of(p);
        const CellRegistry registry = load_registry(cfg);
        const LocalCalendar calendar = cfg.calendar();
        const auto events = read_work_events(in_dir, registry);
        const auto hours = calendar.hour_grid(d);
        const TimeWindow night = cfg.night.on(d, calendar);
        std::vector<DeviceDayRog> records;
        std::vector<double> values;
        for (auto run : device_runs(events)) {
            DeviceDayRog r = device_day_rog(run, registry, d, hours, cfg.hourly_mode);
            const auto stays = detect_stays(run, registry, Level::postcode, cfg.gap_tolerance);
            if (auto n = night_location(stays, night, registry)) {
                r.night_postcode = registry.region_name(Level::postcode, n->postcode);
            }
            values.push_back(r.rog_m);
            records.push_back(std::move(r));
        }
        fs::create_directories(out_dir);
        write_rog_csv(fs::path(out_dir) / kRogFile, records);
        const auto b = bucket_rog(values, d, cfg.buckets);
        AtomicFile f(fs::path(out_dir) / "buckets.csv");
        f.stream() << "day,small,medium,large\n"
                   << format_date(d) << ',' << b.small << ',' << b.medium << ',' << b.large << '\n';
        f.commit();
    });
}

mf_status mf_od(mf_pipeline* p, const char* in_dir, const char* level, const char* day)
{
    return guarded([&] {
        need(in_dir, "in_dir");
        need(level, "level");
        const Date d = day_arg(day, "day");
        const PipelineConfig cfg = config_of(p);
        const Level l = parse_level_or_throw(level);
        const CellRegistry registry = load_registry(cfg);
        const fs::path stays_path = fs::path(in_dir) / stays_file_name(l);
        const auto stays = fs::exists(stays_path)
                               ? read_stays_csv(stays_path, registry)
                               : detect_all_stays(read_work_events(in_dir, registry), registry, l, cfg.gap_tolerance);
        write_od_csv(fs::path(in_dir) / od_file_name(l), build_od(stays, registry, l, format_date(d), cfg.sk));
    });
}

mf_status mf_generate(const char* scenario_path, const char* out_dir)
{
    return guarded([&] {
        need(scenario_path, "scenario_path");
        need(out_dir, "out_dir");
        Generator(Scenario::load(scenario_path)).write(out_dir);
    });
}

mf_status mf_haversine_m(double lon_a, double lat_a, double lon_b, double lat_b, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = haversine_m(GeoPoint(lon_a, lat_a), GeoPoint(lon_b, lat_b));
    });
}

mf_status mf_radius_of_gyration(const double* lon, const double* lat, const double* weight, size_t n, double* out)
{
    return guarded([&] {
        need(out, "out");
        if (n > 0) {
            need(lon, "lon");
            need(lat, "lat");
            need(weight, "weight");
        }
        std::vector<WeightedPoint> pts;
        pts.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            pts.push_back({GeoPoint(lon[i], lat[i]), weight[i]});
        }
        *out = radius_of_gyration(pts);
    });
}

mf_status mf_mann_whitney(const double* a, size_t na, const double* b, size_t nb, double* u, double* p, int* exact)
{
    return guarded([&] {
        need(u, "u");
        need(p, "p");
        if (na > 0) {
            need(a, "a");
        }
        if (nb > 0) {
            need(b, "b");
        }
        const auto r = mann_whitney_u(std::span<const double>(a, na), std::span<const double>(b, nb));
        *u = r.u;
        *p = r.p;
        if (exact) {
            *exact = r.exact ? 1 : 0;
        }
    });
}

mf_status mf_graph_create(size_t nodes, mf_graph** out)
{
    return guarded([&] {
        need(out, "out");
        std::vector<std::string> names;
        names.reserve(nodes);
        for (size_t i = 0; i < nodes; ++i) {
            names.push_back(std::to_string(i));
        }
        *out = new mf_graph{MobilityGraph(std::move(names))};
    });
}

void mf_graph_destroy(mf_graph* g)
{
    delete g;
}

mf_status mf_graph_add_edge(mf_graph* g, size_t m, size_t n, double w)
{
    return guarded([&] {
        need(g, "graph");
        g->graph.add_weight(m, n, w);
    });
}

mf_status mf_graph_local_clustering(const mf_graph* g, size_t m, double* out)
{
    return guarded([&] {
        need(g, "graph");
        need(out, "out");
        *out = local_clustering(g->graph, m);
    });
}

mf_status mf_graph_global_clustering(const mf_graph* g, double* out)
{
    return guarded([&] {
        need(g, "graph");
        need(out, "out");
        *out = global_clustering(g->graph);
    });
}

mf_status mf_graph_modularity(const mf_graph* g, const int* assignment, double* out)
{
    return guarded([&] {
        need(g, "graph");
        need(assignment, "assignment");
        need(out, "out");
        const std::vector<int> labels(assignment, assignment + g->graph.node_count());
        *out = modularity(g->graph, Partition::from_labels(labels));
    });
}

mf_status mf_graph_communities(const mf_graph* g, int* assignment, int* community_count, double* modularity_out)
{
    return guarded([&] {
        need(g, "graph");
        need(assignment, "assignment");
        const auto r = greedy_communities(g->graph);
        std::copy(r.partition.assignment.begin(), r.partition.assignment.end(), assignment);
        if (community_count) {
            *community_count = r.partition.community_count;
        }
        if (modularity_out) {
            *modularity_out = r.modularity;
        }
    });
}

} // extern "C"
