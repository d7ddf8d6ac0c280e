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
// Command-line front end. Everything goes through the C API.

#include <mobiflow/mobiflow.h>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

struct PipelineDeleter {
    void operator()(mf_pipeline* p) const { mf_pipeline_close(p); }
};
using Pipeline = std::unique_ptr<mf_pipeline, PipelineDeleter>;

/// Thrown to unwind with a status after the message has been printed.
struct Exit {
    int code;
};

void check(mf_status status)
{
    if (status != MF_OK) {
        std::fprintf(stderr, "mobiflow: %s\n", mf_last_error());
        throw Exit{static_cast<int>(status)};
    }
}

[[noreturn]] void usage_error(const std::string& message)
{
    std::fprintf(stderr, "mobiflow: %s\n", message.c_str());
    throw Exit{MF_ERR_USAGE};
}

/// Options shared by the pipeline commands.
struct Common {
    std::string config;
    std::string cells;
    std::string secret;
    std::string day_keys;
    std::string out;
    std::vector<std::string> sets;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--config", config, "Pipeline configuration file");
        cmd->add_option("--cells", cells, "Cell registry CSV");
        cmd->add_option("--secret", secret, "Master secret for per-day pseudonym keys");
        cmd->add_option("--day-keys", day_keys, "CSV of explicit per-day keys (date,key_hex)");
        cmd->add_option("--set", sets, "Override a configuration entry, key=value (repeatable)");
    }

    Pipeline open() const
    {
        mf_pipeline* raw = nullptr;
        check(mf_pipeline_open(config.empty() ? nullptr : config.c_str(), &raw));
        Pipeline p(raw);
        set_path(p, "cells", cells);
        set(p, "secret", secret);
        set_path(p, "day_keys", day_keys);
        set_path(p, "out", out);
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                usage_error("--set expects key=value, got '" + kv + "'");
            }
            set(p, kv.substr(0, eq), kv.substr(eq + 1));
        }
        return p;
    }

    static void set(const Pipeline& p, const std::string& key, const std::string& value)
    {
        if (!value.empty()) {
            check(mf_pipeline_set(p.get(), key.c_str(), value.c_str()));
        }
    }

    /// Command-line paths are relative to the working directory, not to the
    /// configuration file.
    static void set_path(const Pipeline& p, const std::string& key, const std::string& value)
    {
        if (!value.empty()) {
            set(p, key, std::filesystem::absolute(value).string());
        }
    }
};

struct Range {
    std::string from;
    std::string to;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--from", from, "First day (defaults to first_day in the configuration)");
        cmd->add_option("--to", to, "Last day (defaults to last_day in the configuration)");
    }

    std::pair<std::string, std::string> resolve(const Pipeline& p) const
    {
        auto pick = [&](const std::string& given, const char* flag, const char* key) {
            if (!given.empty()) {
                return given;
            }
            const char* v = mf_pipeline_get(p.get(), key);
            if (v == nullptr) {
                usage_error(std::string("no ") + flag + " given and no '" + key + "' configured");
            }
            return std::string(v);
        };
        return {pick(from, "--from", "first_day"), pick(to, "--to", "last_day")};
    }
};

void ensure_od_level(const Pipeline& p, const std::string& level)
{
    const char* current = mf_pipeline_get(p.get(), "od_levels");
    std::string levels = current ? current : "federal_state,political_area,postcode,municipality";
    if (("," + levels + ",").find("," + level + ",") == std::string::npos) {
        levels += "," + level;
        check(mf_pipeline_set(p.get(), "od_levels", levels.c_str()));
    }
}

int run(int argc, char** argv)
{
    CLI::App app{"Mobility analytics over anonymized network signalling events"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mf_version()));

    // generate
    std::string scenario, gen_out;
    auto* generate = app.add_subcommand("generate", "Write a synthetic scenario (events, registry, truth tables)");
    generate->add_option("--scenario", scenario, "Scenario file")->required();
    generate->add_option("--out", gen_out, "Output directory")->required();
    std::string ignored_config;
    generate->add_option("--config", ignored_config, "Accepted for uniformity; unused");

    // ingest
    Common ingest_common;
    std::string events, day, ingest_out;
    auto* ingest = app.add_subcommand("ingest", "Clean and pseudonymize one day of events");
    ingest_common.add_to(ingest);
    ingest->add_option("--events", events, "JSON-lines events file")->required();
    ingest->add_option("--day", day, "Local day of the file (YYYY-MM-DD)")->required();
    ingest->add_option("--out", ingest_out, "Working directory for cleaned events")->required();

    // stays
    Common stays_common;
    std::string stays_in, stays_level;
    std::optional<double> gap;
    auto* stays = app.add_subcommand("stays", "Detect stays from cleaned events");
    stays_common.add_to(stays);
    stays->add_option("--in", stays_in, "Working directory written by ingest")->required();
    stays->add_option("--level", stays_level, "Spatial level")->required();
    stays->add_option("--gap-tolerance", gap, "Seconds");

    // rog
    Common rog_common;
    std::string rog_in, rog_day, rog_out, rog_buckets;
    auto* rog = app.add_subcommand("rog", "Radius of gyration and bucket counts");
    rog_common.add_to(rog);
    rog->add_option("--in", rog_in, "Working directory written by ingest")->required();
    rog->add_option("--day", rog_day, "Local day (YYYY-MM-DD)")->required();
    rog->add_option("--out", rog_out, "Output directory")->required();
    rog->add_option("--buckets", rog_buckets, "Bucket bounds in meters, e.g. 500,5000");

    // od
    Common od_common;
    std::string od_level, od_day, od_in;
    std::optional<double> sk;
    auto* od = app.add_subcommand("od", "Origin-destination matrix of one day");
    od_common.add_to(od);
    od->add_option("--out", od_common.out, "Aggregates directory");
    od->add_option("--level", od_level, "Spatial level")->required();
    od->add_option("--day", od_day, "Local day (YYYY-MM-DD)")->required();
    od->add_option("--sk", sk, "Important-stay threshold in seconds");
    od->add_option("--in", od_in, "Working directory (stage mode) instead of the configured pipeline");

    // ellipse
    Common ellipse_common;
    Range ellipse_range;
    std::string ellipse_level, ellipse_period;
    auto* ellipse = app.add_subcommand("ellipse", "Activity-space ellipses and travel statistics");
    ellipse_common.add_to(ellipse);
    ellipse_range.add_to(ellipse);
    ellipse->add_option("--out", ellipse_common.out, "Aggregates directory");
    ellipse->add_option("--level", ellipse_level, "Spatial level");
    ellipse->add_option("--period", ellipse_period, "Phase name");

    // graph
    Common graph_common;
    Range graph_range;
    std::string metric, graph_level;
    auto* graph = app.add_subcommand("graph", "Clustering, modularity and communities of the mobility graph");
    graph_common.add_to(graph);
    graph_range.add_to(graph);
    graph->add_option("--metric", metric, "local, global, modularity or communities")
        ->required()
        ->check(CLI::IsMember({"local", "global", "modularity", "communities"}));
    graph->add_option("--in", graph_common.out, "Aggregates directory holding the daily OD matrices");
    graph->add_option("--level", graph_level, "Spatial level");

    // epi
    Common epi_common;
    Range epi_range;
    std::string seed, infections, population, alpha, window, mode;
    auto* epi = app.add_subcommand("epi", "Treatment/control lag scan around an outbreak region");
    epi_common.add_to(epi);
    epi_range.add_to(epi);
    epi->add_option("--out", epi_common.out, "Aggregates directory");
    epi->add_option("--seed", seed, "Outbreak municipality");
    epi->add_option("--infections", infections, "CSV date,municipality,cumulative_cases");
    epi->add_option("--population", population, "CSV municipality,population");
    epi->add_option("--alpha", alpha, "Significance level");
    epi->add_option("--window", window, "Arrival window first,last");
    epi->add_option("--mode", mode, "cumulative or daily_new")->check(CLI::IsMember({"cumulative", "daily_new"}));

    // report
    Common report_common;
    Range report_range;
    std::string kind, report_period;
    auto* report = app.add_subcommand("report", "Emit a report table from daily aggregates");
    report_common.add_to(report);
    report_range.add_to(report);
    report->add_option("--out", report_common.out, "Aggregates directory");
    report->add_option("--kind", kind, "Report kind (or 'all')")->required();
    report->add_option("--period", report_period, "Restrict period reports to one phase");

    // run-all
    Common all_common;
    Range all_range;
    auto* run_all = app.add_subcommand("run-all", "Daily aggregates for every day, then all reports");
    all_common.add_to(run_all);
    all_range.add_to(run_all);
    run_all->add_option("--out", all_common.out, "Aggregates directory");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : MF_ERR_USAGE;
    }

    try {
        if (*generate) {
            check(mf_generate(scenario.c_str(), gen_out.c_str()));
        }
        else if (*ingest) {
            auto p = ingest_common.open();
            check(mf_ingest(p.get(), events.c_str(), day.c_str(), ingest_out.c_str()));
        }
        else if (*stays) {
            auto p = stays_common.open();
            if (gap) {
                Common::set(p, "gap_tolerance", std::to_string(*gap));
            }
            check(mf_stays(p.get(), stays_in.c_str(), stays_level.c_str()));
        }
        else if (*rog) {
            auto p = rog_common.open();
            Common::set(p, "buckets", rog_buckets);
            check(mf_rog(p.get(), rog_in.c_str(), rog_day.c_str(), rog_out.c_str()));
        }
        else if (*od) {
            auto p = od_common.open();
            if (sk) {
                Common::set(p, "sk", std::to_string(*sk));
            }
            if (!od_in.empty()) {
                check(mf_od(p.get(), od_in.c_str(), od_level.c_str(), od_day.c_str()));
            }
            else {
                ensure_od_level(p, od_level);
                check(mf_run_day(p.get(), od_day.c_str()));
            }
        }
        else if (*ellipse) {
            auto p = ellipse_common.open();
            if (!ellipse_level.empty()) {
                ensure_od_level(p, ellipse_level);
                Common::set(p, "ellipse_level", ellipse_level);
            }
            const auto [from, to] = ellipse_range.resolve(p);
            check(mf_run_report(p.get(), "ellipse", from.c_str(), to.c_str(),
                                ellipse_period.empty() ? nullptr : ellipse_period.c_str()));
        }
        else if (*graph) {
            auto p = graph_common.open();
            if (!graph_level.empty()) {
                ensure_od_level(p, graph_level);
                Common::set(p, "graph_level", graph_level);
            }
            const auto [from, to] = graph_range.resolve(p);
            const std::string k = metric == "local"    ? "local_clustering"
                                  : metric == "global" ? "global_clustering"
                                                       : metric;
            check(mf_run_report(p.get(), k.c_str(), from.c_str(), to.c_str(), nullptr));
        }
        else if (*epi) {
            auto p = epi_common.open();
            Common::set(p, "epi_seed", seed);
            Common::set_path(p, "infections", infections);
            Common::set_path(p, "population", population);
            Common::set(p, "alpha", alpha);
            Common::set(p, "epi_window", window);
            Common::set(p, "epi_mode", mode);
            const auto [from, to] = epi_range.resolve(p);
            check(mf_run_report(p.get(), "epi", from.c_str(), to.c_str(), nullptr));
        }
        else if (*report) {
            auto p = report_common.open();
            const auto [from, to] = report_range.resolve(p);
            check(mf_run_report(p.get(), kind.c_str(), from.c_str(), to.c_str(),
                                report_period.empty() ? nullptr : report_period.c_str()));
        }
        else if (*run_all) {
            auto p = all_common.open();
            const auto [from, to] = all_range.resolve(p);
            check(mf_run_days(p.get(), from.c_str(), to.c_str()));
            check(mf_run_report(p.get(), "all", from.c_str(), to.c_str(), nullptr));
        }
    }
    catch (const Exit& e) {
        return e.code;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    return run(argc, argv);
}
