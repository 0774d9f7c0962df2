#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace nrl {

// Calendar date. All engine I/O uses ISO-8601 YYYY-MM-DD.
struct Date {
    int year = 0;
    int month = 0; // 1..12
    int day = 0;   // 1..31

    auto operator<=>(const Date&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);
bool is_valid_date(const Date& d);

// Strict ISO-8601 parse; throws ParseError on malformed or impossible dates.
Date parse_date(const std::string& text);
std::string format_date(const Date& d);

// Days since 1970-01-01 (negative before). Used for day arithmetic.
std::int64_t to_epoch_days(const Date& d);
Date from_epoch_days(std::int64_t days);

// 0 = Monday .. 6 = Sunday.
int weekday(const Date& d);

// Sequence of weekdays (Mon-Fri) starting at `start`, `count` entries.
// Convenience for building synthetic trading calendars in tests and tools.
std::vector<Date> weekday_calendar(const Date& start, int count);

} // namespace nrl
