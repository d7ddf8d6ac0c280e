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
#include "ingest/pseudonym.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <cstring>

namespace mobiflow {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c)
{
    if (c >= '0' && c <= '9') {
        return c - '0';
    }
    if (c >= 'a' && c <= 'f') {
        return c - 'a' + 10;
    }
    if (c >= 'A' && c <= 'F') {
        return c - 'A' + 10;
    }
    return -1;
}

template <std::size_t N>
std::string to_hex_string(const std::array<std::uint8_t, N>& bytes)
{
    std::string out(2 * N, '0');
    for (std::size_t i = 0; i < N; ++i) {
        out[2 * i] = kHexDigits[bytes[i] >> 4];
        out[2 * i + 1] = kHexDigits[bytes[i] & 0xF];
    }
    return out;
}

template <std::size_t N>
std::optional<std::array<std::uint8_t, N>> from_hex_string(std::string_view hex)
{
    if (hex.size() != 2 * N) {
        return std::nullopt;
    }
    std::array<std::uint8_t, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            return std::nullopt;
        }
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

DayKey hmac_sha256(const void* key, std::size_t key_len, std::string_view data)
{
    DayKey out{};
    unsigned int len = 0;
    if (HMAC(EVP_sha256(), key, static_cast<int>(key_len), reinterpret_cast<const unsigned char*>(data.data()),
             data.size(), out.data(), &len) == nullptr ||
        len != out.size()) {
        fail(Errc::io, "HMAC-SHA256 failed");
    }
    return out;
}

} // namespace

std::string Pseudonym::to_hex() const
{
    return to_hex_string(bytes);
}

std::optional<Pseudonym> Pseudonym::from_hex(std::string_view hex)
{
    auto b = from_hex_string<16>(hex);
    if (!b) {
        return std::nullopt;
    }
    return Pseudonym{*b};
}

std::size_t PseudonymHash::operator()(const Pseudonym& p) const noexcept
{
    std::size_t h;
    std::memcpy(&h, p.bytes.data(), sizeof(h));
    return h;
}

KeySchedule KeySchedule::from_master_secret(std::string secret)
{
    KeySchedule k;
    k.master_ = std::move(secret);
    return k;
}

KeySchedule KeySchedule::load_csv(const std::filesystem::path& path)
{
    KeySchedule k;
    read_csv(path, [&](const std::vector<std::string_view>& f, std::size_t line) {
        if (f.size() != 2) {
            fail(Errc::malformed_line, path.string() + ":" + std::to_string(line) + ": expected date,key_hex");
        }
        auto key = from_hex_string<32>(f[1]);
        if (!key) {
            fail(Errc::malformed_line, path.string() + ":" + std::to_string(line) + ": key must be 64 hex digits");
        }
        k.set_day_key(parse_date(f[0]), *key);
    });
    return k;
}

void KeySchedule::set_day_key(Date day, const DayKey& key)
{
    explicit_[format_date(day)] = key;
}

DayKey KeySchedule::day_key(Date day) const
{
    const std::string iso = format_date(day);
    if (auto it = explicit_.find(iso); it != explicit_.end()) {
        return it->second;
    }
    if (master_.empty()) {
        fail(Errc::missing_day_key, "no pseudonymization key provisioned for " + iso);
    }
    return hmac_sha256(master_.data(), master_.size(), "mobiflow-day-key:" + iso);
}

DayPseudonymizer::DayPseudonymizer(const KeySchedule& keys, Date day)
    : key_(keys.day_key(day))
{
}

Pseudonym DayPseudonymizer::operator()(std::string_view raw_id) const
{
    const DayKey mac = hmac_sha256(key_.data(), key_.size(), raw_id);
    Pseudonym p;
    std::memcpy(p.bytes.data(), mac.data(), p.bytes.size());
    return p;
}

Pseudonym pseudonymize(std::string_view raw_id, Date day, const KeySchedule& keys)
{
    return DayPseudonymizer(keys, day)(raw_id);
}

std::string sha256_hex(std::string_view data)
{
    std::array<std::uint8_t, SHA256_DIGEST_LENGTH> digest{};
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest.data());
    return to_hex_string(digest);
}

} // namespace mobiflow
