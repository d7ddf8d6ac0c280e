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

#include "core/calendar.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace mobiflow {

/// Opaque 128-bit device token, valid for one calendar day only.
struct Pseudonym {
    std::array<std::uint8_t, 16> bytes{};

    std::string to_hex() const;
    static std::optional<Pseudonym> from_hex(std::string_view hex);

    friend auto operator<=>(const Pseudonym&, const Pseudonym&) = default;
};

struct PseudonymHash {
    std::size_t operator()(const Pseudonym& p) const noexcept;
};

using DayKey = std::array<std::uint8_t, 32>;

/// Source of the per-day pseudonymization keys. Keys are either listed
/// explicitly per day (CSV `date,key_hex`) or derived from a master secret
/// with HMAC-SHA256 over the ISO date.
class KeySchedule {
public:
    KeySchedule() = default;

    static KeySchedule from_master_secret(std::string secret);
    static KeySchedule load_csv(const std::filesystem::path& path);

    void set_day_key(Date day, const DayKey& key);

    /// Throws MissingDayKey when no key is provisioned for `day`.
    DayKey day_key(Date day) const;

private:
    std::string master_;
    std::map<std::string, DayKey> explicit_;
};

/// Truncated HMAC-SHA256(day_key(day), raw_id).
Pseudonym pseudonymize(std::string_view raw_id, Date day, const KeySchedule& keys);

/// Keyed hasher bound to one day's key; avoids re-deriving the key per event.
class DayPseudonymizer {
public:
    DayPseudonymizer(const KeySchedule& keys, Date day);
    Pseudonym operator()(std::string_view raw_id) const;

private:
    DayKey key_;
};

/// Lowercase hex SHA-256 digest of `data`.
std::string sha256_hex(std::string_view data);

} // namespace mobiflow
