#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace exagg {

/// Seconds since the Unix epoch, UTC. Sub-second precision is truncated on
/// parse; all arrival arithmetic in this toolkit is done in whole seconds.
using UtcSeconds = std::int64_t;

inline constexpr std::int64_t kSecondsPerDay = 86400;

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

inline bool is_leap(std::int64_t y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline unsigned days_in_month(std::int64_t y, unsigned m) {
    static constexpr unsigned table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return table[m - 1];
}

inline bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, std::int64_t& out) {
    if (pos + len > s.size()) return false;
    std::int64_t v = 0;
    for (std::size_t i = 0; i < len; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace detail

/// Parses an RFC 3339 timestamp ("2011-07-13T08:30:00Z", offsets allowed,
/// fractional seconds truncated) or a bare date ("2011-07-13", taken as
/// midnight UTC). Returns nullopt on anything malformed.
inline std::optional<UtcSeconds> parse_rfc3339(std::string_view text) {
    std::int64_t year = 0, month = 0, day = 0;
    if (!detail::parse_fixed_uint(text, 0, 4, year)) return std::nullopt;
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    if (!detail::parse_fixed_uint(text, 5, 2, month)) return std::nullopt;
    if (!detail::parse_fixed_uint(text, 8, 2, day)) return std::nullopt;
    if (month < 1 || month > 12) return std::nullopt;
    if (day < 1 || day > detail::days_in_month(year, static_cast<unsigned>(month))) return std::nullopt;

    const std::int64_t date_part =
        detail::days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * kSecondsPerDay;

    if (text.size() == 10) return date_part;  // date only, midnight UTC

    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') return std::nullopt;
    std::int64_t hour = 0, minute = 0, second = 0;
    if (text.size() < 19 || text[13] != ':' || text[16] != ':') return std::nullopt;
    if (!detail::parse_fixed_uint(text, 11, 2, hour)) return std::nullopt;
    if (!detail::parse_fixed_uint(text, 14, 2, minute)) return std::nullopt;
    if (!detail::parse_fixed_uint(text, 17, 2, second)) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
    if (second == 60) second = 59;  // leap second, clamp

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) return std::nullopt;
    }

    std::int64_t offset_seconds = 0;
    if (pos >= text.size()) return std::nullopt;  // offset is mandatory
    const char c = text[pos];
    if (c == 'Z' || c == 'z') {
        ++pos;
    } else if (c == '+' || c == '-') {
        std::int64_t oh = 0, om = 0;
        if (pos + 6 > text.size() || text[pos + 3] != ':') return std::nullopt;
        if (!detail::parse_fixed_uint(text, pos + 1, 2, oh)) return std::nullopt;
        if (!detail::parse_fixed_uint(text, pos + 4, 2, om)) return std::nullopt;
        if (oh > 23 || om > 59) return std::nullopt;
        offset_seconds = (oh * 60 + om) * 60;
        if (c == '-') offset_seconds = -offset_seconds;
        pos += 6;
    } else {
        return std::nullopt;
    }
    if (pos != text.size()) return std::nullopt;

    return date_part + hour * 3600 + minute * 60 + second - offset_seconds;
}

/// Canonical "YYYY-MM-DDTHH:MM:SSZ" rendering.
inline std::string format_rfc3339(UtcSeconds t) {
    std::int64_t days = t / kSecondsPerDay;
    std::int64_t rem = t % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        --days;
    }
    std::int64_t year;
    unsigned month, day;
    detail::civil_from_days(days, year, month, day);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(year), month, day,
                  static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem % 3600) / 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

}  // namespace exagg
