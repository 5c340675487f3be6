#include "concierge/timeutil.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace concierge::timeutil {

namespace {

using namespace std::chrono;

constexpr Timestamp kDay = 86400;

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return ec == std::errc{};
}

Timestamp days_to_seconds(sys_days d) { return static_cast<Timestamp>(d.time_since_epoch().count()) * kDay; }

sys_days to_days(Timestamp ts) {
  Timestamp days = ts / kDay;
  if (ts % kDay < 0) --days;
  return sys_days{std::chrono::days{days}};
}

}  // namespace

std::optional<Timestamp> parse(std::string_view s) {
  if (s.empty()) return std::nullopt;

  // epoch seconds
  {
    Timestamp value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return value;
  }

  int y, mo, d, h, mi, sec;
  if (!read_int(s, 0, 4, y) || s.size() < 19 || s[4] != '-' || !read_int(s, 5, 2, mo) || s[7] != '-' ||
      !read_int(s, 8, 2, d) || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') || !read_int(s, 11, 2, h) ||
      s[13] != ':' || !read_int(s, 14, 2, mi) || s[16] != ':' || !read_int(s, 17, 2, sec)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60) return std::nullopt;

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t digits = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == digits) return std::nullopt;
  }
  Timestamp offset = 0;
  if (pos >= s.size()) return std::nullopt;  // offset is mandatory in RFC 3339
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    int oh, om;
    if (!read_int(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' || !read_int(s, pos + 4, 2, om) ||
        oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset = (oh * 3600 + om * 60) * (s[pos] == '+' ? 1 : -1);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  return days_to_seconds(sys_days{ymd}) + h * 3600 + mi * 60 + sec - offset;
}

std::string format_rfc3339(Timestamp ts) {
  const sys_days day = to_days(ts);
  const year_month_day ymd{day};
  const Timestamp rem = ts - days_to_seconds(day);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60));
  return buf;
}

std::string format_date(Timestamp ts) { return format_rfc3339(ts).substr(0, 10); }

Timestamp floor_day(Timestamp ts) { return days_to_seconds(to_days(ts)); }

Timestamp floor_week(Timestamp ts) {
  const sys_days day = to_days(ts);
  const weekday wd{day};
  const unsigned since_monday = (wd.c_encoding() + 6) % 7;
  return days_to_seconds(day - std::chrono::days{since_monday});
}

Timestamp floor_month(Timestamp ts) {
  const year_month_day ymd{to_days(ts)};
  return days_to_seconds(sys_days{ymd.year() / ymd.month() / 1});
}

Timestamp next_month(Timestamp month_start) {
  const year_month_day ymd{to_days(month_start)};
  const year_month next = year_month{ymd.year(), ymd.month()} + months{1};
  return days_to_seconds(sys_days{next / 1});
}

Timestamp now() {
  return duration_cast<seconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace concierge::timeutil
