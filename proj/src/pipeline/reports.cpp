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
#include "pipeline/reports.hpp"

#include "activityspace/ellipse.hpp"
#include "core/csv.hpp"
#include "core/error.hpp"
#include "epi/epi.hpp"
#include "graph/graph.hpp"
#include "mobility/rog.hpp"
#include "od/od.hpp"
#include "pipeline/aggregates.hpp"
#include "pipeline/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace mobiflow {

namespace fs = std::filesystem;

namespace {

std::string shortest(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

class ReportContext {
public:
    ReportContext(const PipelineConfig& config, const ReportRequest& request)
        : config_(config)
        , request_(request)
        , registry_(load_registry(config))
        , hash_(config.aggregate_hash())
    {
        std::error_code ec;
        fs::create_directories(config.reports_dir(), ec);
        if (ec) {
            fail(Errc::io, "cannot create " + config.reports_dir().string() + ": " + ec.message());
        }
    }

    const PipelineConfig& config() const { return config_; }
    const CellRegistry& registry() const { return registry_; }
    std::vector<Date> days() const { return date_range(request_.first, request_.last); }

    void require(Date day) const { require_day_aggregates(config_, day, hash_); }

    ODMatrix od(Date day, Level level) const
    {
        require(day);
        if (std::find(config_.od_levels.begin(), config_.od_levels.end(), level) == config_.od_levels.end()) {
            fail(Errc::missing_aggregates, std::string("no daily OD matrices at level ") + std::string(level_name(level)));
        }
        return read_od_csv(config_.day_dir(day) / od_file_name(level), level, registry_.regions(level),
                           format_date(day));
    }

    ODMatrix period_od(const Period& p, Level level) const
    {
        std::vector<ODMatrix> ods;
        for (Date d : date_range(p.first, p.last)) {
            ods.push_back(od(d, level));
        }
        return aggregate_period(ods, p.name);
    }

    std::vector<DeviceDayRog> rog(Date day) const
    {
        require(day);
        return read_rog_csv(config_.day_dir(day) / kRogFile);
    }

    std::vector<Period> periods() const
    {
        auto all = config_.periods_within(request_.first, request_.last);
        if (request_.period.empty()) {
            return all;
        }
        for (const auto& p : all) {
            if (p.name == request_.period) {
                return {p};
            }
        }
        fail(Errc::usage, "no phase named '" + request_.period + "' overlaps the requested range");
    }

    fs::path path(const std::string& stem) const
    {
        std::string name = stem + "_" + format_date(request_.first) + "_" + format_date(request_.last);
        if (!request_.period.empty()) {
            name += "_" + request_.period;
        }
        return config_.reports_dir() / (name + ".csv");
    }

private:
    const PipelineConfig& config_;
    const ReportRequest& request_;
    CellRegistry registry_;
    std::string hash_;
};

using Outputs = std::vector<fs::path>;

void buckets_report(const ReportContext& ctx, Outputs& outputs)
{
    AtomicFile f(ctx.path("buckets"));
    f.stream() << "day,small,medium,large\n";
    for (Date d : ctx.days()) {
        std::vector<double> values;
        for (const auto& r : ctx.rog(d)) {
            values.push_back(r.rog_m);
        }
        const auto b = bucket_rog(values, d, ctx.config().buckets);
        f.stream() << format_date(d) << ',' << b.small << ',' << b.medium << ',' << b.large << '\n';
    }
    f.commit();
    outputs.push_back(ctx.path("buckets"));
}

void hourly_report(const ReportContext& ctx, Outputs& outputs)
{
    AtomicFile f(ctx.path("hourly"));
    f.stream() << "day,hour,geomean_rog_m\n";
    for (Date d : ctx.days()) {
        const auto series = hourly_rog_series(ctx.rog(d));
        for (std::size_t h = 0; h < series.size(); ++h) {
            if (series[h]) {
                f.stream() << format_date(d) << ',' << h << ',' << format_fixed(*series[h], 3) << '\n';
            }
        }
    }
    f.commit();
    outputs.push_back(ctx.path("hourly"));
}

void relchange_report(const ReportContext& ctx, Outputs& outputs)
{
    const auto& cfg = ctx.config();
    if (!cfg.week_a || !cfg.week_b) {
        fail(Errc::usage, "relchange needs 'week_a' and 'week_b' in the configuration");
    }
    auto collect = [&](const Period& p) {
        std::vector<DeviceDayRog> out;
        for (Date d : date_range(p.first, p.last)) {
            auto r = ctx.rog(d);
            out.insert(out.end(), r.begin(), r.end());
        }
        return out;
    };
    const auto changes = regional_relative_change(collect(*cfg.week_a), collect(*cfg.week_b), cfg.min_devices);
    AtomicFile f(ctx.path("relchange"));
    f.stream() << "postcode,rel_change,flag\n";
    for (const auto& c : changes) {
        f.stream() << c.postcode << ',' << (c.flag == ChangeFlag::ok ? format_fixed(c.rel_change, 6) : "") << ','
                   << change_flag_name(c.flag) << '\n';
    }
    f.commit();
    outputs.push_back(ctx.path("relchange"));
}

void ellipse_report(const ReportContext& ctx, Outputs& outputs)
{
    const auto& cfg = ctx.config();
    const auto& reg = ctx.registry();
    const Level level = cfg.ellipse_level;
    const auto centroids = reg.region_centroids(level);
    std::vector<EllipseParams> ellipses;
    std::vector<TravelStats> travel;

    AtomicFile f(ctx.path("ellipse"));
    f.stream() << "region,period,major_m,minor_m,area_m2,azimuth_deg,shape_index,intra,inter,total_dist_m,mean_dist_m\n";
    for (const auto& period : ctx.periods()) {
        const ODMatrix od = ctx.period_od(period, level);
        for (std::size_t r = 0; r < od.size(); ++r) {
            const auto points = ellipse_points(od, centroids, r, cfg.ellipse_mode);
            const TravelStats t = travel_stats(od, centroids, od.regions[r]);
            travel.push_back(t);
            f.stream() << od.regions[r] << ',' << period.name << ',';
            if (points.empty()) {
                f.stream() << ",,,,,";
            }
            else {
                const auto e = fit_activity_ellipse(points, od.regions[r], period.name);
                ellipses.push_back(e);
                f.stream() << format_fixed(e.major_m, 3) << ',' << format_fixed(e.minor_m, 3) << ','
                           << format_fixed(e.area_m2, 1) << ',' << format_fixed(e.azimuth_deg, 3) << ','
                           << format_fixed(e.shape_index, 6) << ',';
            }
            f.stream() << t.intra_trips << ',' << t.inter_trips << ',' << format_fixed(t.total_distance_m, 3) << ','
                       << format_fixed(t.mean_distance_m, 3) << '\n';
        }
    }
    f.commit();
    outputs.push_back(ctx.path("ellipse"));

    if (level != Level::political_area) {
        return;
    }
    std::map<std::string, std::string> state_of;
    for (RegionId r = 0; r < static_cast<RegionId>(reg.regions(level).size()); ++r) {
        if (auto parent = reg.parent_region(level, r, Level::federal_state)) {
            state_of[reg.region_name(level, r)] = reg.region_name(Level::federal_state, *parent);
        }
    }
    const auto states = state_level_params(ellipses, travel, state_of);
    AtomicFile s(ctx.path("ellipse_states"));
    s.stream() << "state,period,areas,major_m,minor_m,area_m2,azimuth_deg,shape_index,intra,inter,total_dist_m,"
                  "mean_dist_m\n";
    for (const auto& p : states) {
        s.stream() << p.state << ',' << p.period << ',' << p.areas << ',' << format_fixed(p.major_m, 3) << ','
                   << format_fixed(p.minor_m, 3) << ',' << format_fixed(p.area_m2, 1) << ','
                   << format_fixed(p.azimuth_deg, 3) << ',' << format_fixed(p.shape_index, 6) << ','
                   << format_fixed(p.intra_trips, 3) << ',' << format_fixed(p.inter_trips, 3) << ','
                   << format_fixed(p.total_distance_m, 3) << ',' << format_fixed(p.mean_distance_m, 3) << '\n';
    }
    s.commit();
    outputs.push_back(ctx.path("ellipse_states"));
}

void global_clustering_report(const ReportContext& ctx, Outputs& outputs)
{
    AtomicFile f(ctx.path("global_clustering"));
    f.stream() << "day,global_clustering\n";
    for (Date d : ctx.days()) {
        const MobilityGraph g = symmetrize(ctx.od(d, ctx.config().graph_level));
        f.stream() << format_date(d) << ',';
        try {
            f.stream() << format_fixed(global_clustering(g), 9);
        }
        catch (const Error& e) {
            if (e.code() != Errc::no_triplets) {
                throw;
            }
        }
        f.stream() << '\n';
    }
    f.commit();
    outputs.push_back(ctx.path("global_clustering"));
}

void local_clustering_report(const ReportContext& ctx, Outputs& outputs)
{
    const auto& reg = ctx.registry();
    const Level level = ctx.config().graph_level;
    AtomicFile f(ctx.path("local_clustering"));
    f.stream() << "day,state,mean_local_clustering\n";
    for (Date d : ctx.days()) {
        const MobilityGraph g = symmetrize(ctx.od(d, level));
        std::map<std::string, std::pair<CompensatedSum, std::size_t>> by_state;
        for (std::size_t m = 0; m < g.node_count(); ++m) {
            const auto parent = reg.parent_region(level, static_cast<RegionId>(m), Level::federal_state);
            const std::string state = parent ? reg.region_name(Level::federal_state, *parent) : "";
            auto& acc = by_state[state];
            acc.first.add(local_clustering(g, m));
            ++acc.second;
        }
        for (const auto& [state, acc] : by_state) {
            f.stream() << format_date(d) << ',' << state << ','
                       << format_fixed(acc.first.value() / static_cast<double>(acc.second), 9) << '\n';
        }
    }
    f.commit();
    outputs.push_back(ctx.path("local_clustering"));
}

void modularity_report(const ReportContext& ctx, Outputs& outputs)
{
    const auto& cfg = ctx.config();
    std::optional<Partition> frozen;
    if (!cfg.freeze_partition.empty()) {
        const auto it = std::find_if(cfg.phases.begin(), cfg.phases.end(),
                                     [&](const Period& p) { return p.name == cfg.freeze_partition; });
        frozen = greedy_communities(symmetrize(ctx.period_od(*it, cfg.graph_level))).partition;
    }
    AtomicFile f(ctx.path("modularity"));
    f.stream() << "day,modularity\n";
    for (Date d : ctx.days()) {
        const MobilityGraph g = symmetrize(ctx.od(d, cfg.graph_level));
        f.stream() << format_date(d) << ',';
        if (g.total_strength() > 0.0) {
            const double q = frozen ? modularity(g, *frozen) : greedy_communities(g).modularity;
            f.stream() << format_fixed(q, 9);
        }
        f.stream() << '\n';
    }
    f.commit();
    outputs.push_back(ctx.path("modularity"));
}

void communities_report(const ReportContext& ctx, Outputs& outputs)
{
    AtomicFile f(ctx.path("communities"));
    f.stream() << "period,node,community\n";
    for (const auto& period : ctx.periods()) {
        const MobilityGraph g = symmetrize(ctx.period_od(period, ctx.config().graph_level));
        const auto result = greedy_communities(g);
        for (std::size_t m = 0; m < g.node_count(); ++m) {
            f.stream() << period.name << ',' << g.nodes()[m] << ',' << result.partition.assignment[m] << '\n';
        }
    }
    f.commit();
    outputs.push_back(ctx.path("communities"));
}

void epi_report(const ReportContext& ctx, Outputs& outputs)
{
    const auto& cfg = ctx.config();
    if (cfg.infections.empty() || cfg.population.empty() || cfg.epi_seed.empty() || !cfg.epi_window) {
        fail(Errc::usage, "epi needs 'infections', 'population', 'epi_seed' and 'epi_window'");
    }
    if (!fs::exists(cfg.infections) || !fs::exists(cfg.population)) {
        fail(Errc::missing_input, "infection or population file not found");
    }
    const InfectionSeries series = load_infection_series(cfg.infections, cfg.population);
    std::vector<ODMatrix> ods;
    for (Date d : date_range(cfg.epi_window->first, cfg.epi_window->last)) {
        ods.push_back(ctx.od(d, Level::municipality));
    }
    const auto arrivals = arrivals_from_seed(ods, cfg.epi_seed, cfg.epi_window->first, cfg.epi_window->last);
    std::set<std::string> universe;
    for (const auto& [m, pop] : series.population) {
        universe.insert(m);
    }
    const ExposureSplit split = split_exposure(arrivals, universe, cfg.epi_seed);
    const RateSeries rates =
        cfg.epi_mode == RateMode::cumulative ? cumulative_per_capita(series) : daily_new_per_capita(series);
    const auto dates = ctx.days();
    const LagScan scan = lag_scan(split, rates, dates, cfg.alpha, first_case_date(series, cfg.epi_seed));

    AtomicFile f(ctx.path("epi"));
    f.stream() << "date,p_value,u,median_treatment,median_control,significant\n";
    for (const auto& p : scan.points) {
        f.stream() << format_date(p.date) << ',' << shortest(p.p) << ',' << shortest(p.u) << ','
                   << shortest(p.median_treatment) << ',' << shortest(p.median_control) << ','
                   << (p.p < cfg.alpha ? 1 : 0) << '\n';
    }
    f.commit();
    outputs.push_back(ctx.path("epi"));

    AtomicFile s(ctx.path("epi_summary"));
    s.stream() << "seed,treatment,control,first_significant,lag_days,low_power\n"
               << cfg.epi_seed << ',' << split.treatment.size() << ',' << split.control.size() << ','
               << (scan.first_significant ? format_date(*scan.first_significant) : "") << ','
               << (scan.lag_days ? std::to_string(*scan.lag_days) : "") << ',' << (scan.low_power ? 1 : 0) << '\n';
    s.commit();
    outputs.push_back(ctx.path("epi_summary"));
}

using ReportFn = void (*)(const ReportContext&, Outputs&);

const std::map<std::string, ReportFn>& registry_of_reports()
{
    static const std::map<std::string, ReportFn> reports = {
        {"buckets", buckets_report},
        {"hourly", hourly_report},
        {"relchange", relchange_report},
        {"ellipse", ellipse_report},
        {"global_clustering", global_clustering_report},
        {"local_clustering", local_clustering_report},
        {"modularity", modularity_report},
        {"communities", communities_report},
        {"epi", epi_report},
    };
    return reports;
}

} // namespace

const std::vector<std::string>& report_kinds()
{
    static const std::vector<std::string> kinds = {"buckets",    "hourly",     "relchange",   "ellipse",
                                                   "global_clustering", "local_clustering", "modularity",
                                                   "communities", "epi",        "all"};
    return kinds;
}

std::vector<fs::path> run_report(const PipelineConfig& config, const ReportRequest& request)
{
    if (request.last < request.first) {
        fail(Errc::usage, "report range ends before it starts");
    }
    const auto& reports = registry_of_reports();
    std::vector<std::string> kinds;
    if (request.kind == "all") {
        for (const auto& [name, fn] : reports) {
            const bool relchange_ready = config.week_a && config.week_b;
            const bool epi_ready = !config.epi_seed.empty() && config.epi_window && !config.infections.empty() &&
                                   !config.population.empty();
            if ((name == "relchange" && !relchange_ready) || (name == "epi" && !epi_ready)) {
                continue;
            }
            kinds.push_back(name);
        }
    }
    else if (reports.count(request.kind)) {
        kinds.push_back(request.kind);
    }
    else {
        fail(Errc::usage, "unknown report kind '" + request.kind + "'");
    }
    const ReportContext ctx(config, request);
    for (Date d : ctx.days()) {
        ctx.require(d);
    }
    Outputs outputs;
    for (const auto& kind : kinds) {
        reports.at(kind)(ctx, outputs);
    }
    return outputs;
}

} // namespace mobiflow
