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

#include "epi/epi.hpp"
#include "ingest/events.hpp"
#include "ingest/registry.hpp"
#include "od/od.hpp"
#include "synthgen/rng.hpp"
#include "synthgen/scenario.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mobiflow {

struct Municipality {
    std::string name;
    std::size_t block;
    std::vector<CellIndex> cells;
    GeoPoint center;
    std::uint64_t population;
};

struct Agent {
    std::string raw_id;
    SubscriberClass subscriber_class;
    std::size_t home;
    CellIndex home_cell;
    std::size_t work;
    CellIndex work_cell;
    bool commuter;
};

/// Presence at one cell over [start, end). An agent-day is a gap-free
/// sequence of visits covering the local day.
struct Visit {
    CellIndex cell;
    Timestamp start;
    Timestamp end;
};

struct EmittedEvent {
    std::string_view raw_id;
    Timestamp ts;
    std::string_view cell;
    EventKind kind;
    SubscriberClass subscriber_class;
};

using EventSink = std::function<void(const EmittedEvent&)>;

class Generator {
public:
    /// Builds geography and agents. Throws InvalidScenario.
    explicit Generator(Scenario scenario);

    const Scenario& scenario() const noexcept { return scenario_; }
    const LocalCalendar& calendar() const noexcept { return calendar_; }
    const CellRegistry& registry() const noexcept { return *registry_; }
    const std::vector<Municipality>& municipalities() const noexcept { return municipalities_; }
    const std::vector<Agent>& agents() const noexcept { return agents_; }
    std::size_t block_count() const noexcept { return scenario_.blocks_x * scenario_.blocks_y; }

    /// Block of every region at `level`, by region index.
    std::vector<std::size_t> region_blocks(Level level) const;

    std::vector<Visit> plan_day(std::size_t agent, Date day) const;

    /// Timestamps emitted for one visit: its start, then every heartbeat
    /// strictly before its end.
    std::vector<Timestamp> emission_times(const Visit& v) const;

    /// Emits every well-formed event of `day` (including filtered subscriber
    /// classes, unknown cells and out-of-day timestamps when configured),
    /// agent by agent in time order.
    void emit_day(Date day, const EventSink& sink) const;

    /// The JSON-lines event file content of `day`, with malformed lines mixed in.
    std::string day_file(Date day) const;

    /// OD matrices implied by the visit plans of admitted (handset) agents.
    ODMatrix truth_od(Date day, Level level) const;
    std::map<Level, ODMatrix> truth_ods(Date day, const std::vector<Level>& levels) const;

    /// Municipalities receiving at least one trip from the outbreak seed
    /// during the visit window, according to the visit plans.
    std::map<std::string, std::uint64_t> truth_arrivals() const;

    /// Planted infection series; background-only when no outbreak is set.
    InfectionSeries infections() const;

    /// Writes cells.csv, events/<day>.jsonl, truth/ tables, infections.csv,
    /// population.csv, scenario.conf and a ready-to-use mobiflow.conf.
    void write(const std::filesystem::path& out_dir) const;

private:
    void build_geography();
    void build_agents();
    /// `within_state` keeps out-of-block picks inside the home state when it
    /// has other blocks.
    std::size_t pick_destination(StreamRng& rng, std::size_t home, double length, bool leave_block,
                                 bool within_state = false) const;

    Scenario scenario_;
    LocalCalendar calendar_;
    std::unique_ptr<CellRegistry> registry_;
    std::vector<Municipality> municipalities_;
    std::vector<std::size_t> muni_area_; // political area index per municipality
    std::vector<Agent> agents_;
    std::size_t seed_muni_ = static_cast<std::size_t>(-1);
};

} // namespace mobiflow
