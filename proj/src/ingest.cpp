#include "occu/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "occu/error.hpp"

namespace occu {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(delim, pos);
        fields.push_back(trim(line.substr(pos, next == std::string_view::npos ? next : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return fields;
}

bool parse_int(std::string_view text, std::int64_t& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

// YYYY-MM-DDTHH:MM:SS with optional trailing Z.
bool parse_iso_utc(std::string_view text, std::int64_t& out) {
    if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) text.remove_suffix(1);
    if (text.size() != 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':' || text[16] != ':') {
        return false;
    }
    std::int64_t y, mo, d, h, mi, s;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) ||
        !parse_int(text.substr(8, 2), d) || !parse_int(text.substr(11, 2), h) ||
        !parse_int(text.substr(14, 2), mi) || !parse_int(text.substr(17, 2), s)) {
        return false;
    }
    using namespace std::chrono;
    const year_month_day ymd{year{static_cast<int>(y)}, month{static_cast<unsigned>(mo)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return false;
    out = sys_days{ymd}.time_since_epoch() / seconds{1} + h * 3600 + mi * 60 + s;
    return true;
}

bool is_header(std::string_view line) {
    const auto fields = split(line, ',');
    return fields.size() == 4 && fields[0] == "start" && fields[1] == "duration" && fields[2] == "device" &&
           fields[3] == "ap";
}

EpochSeconds floor_to(EpochSeconds t, EpochSeconds step) {
    auto q = t / step;
    if (t % step != 0 && t < 0) --q;
    return q * step;
}

EpochSeconds ceil_to(EpochSeconds t, EpochSeconds step) {
    const auto f = floor_to(t, step);
    return f == t ? t : f + step;
}

}  // namespace

Scope Scope::access_point(std::string ap_id) {
    if (ap_id.empty()) throw UsageError("access point scope requires a non-empty ap id");
    Scope s;
    s.ap_id_ = std::move(ap_id);
    return s;
}

Scope Scope::parse(const std::string& text) {
    if (text == "building") return building();
    if (text.rfind("ap:", 0) == 0) return access_point(text.substr(3));
    throw UsageError("invalid scope '" + text + "' (expected 'building' or 'ap:<id>')");
}

std::string Scope::to_string() const { return is_building() ? "building" : "ap:" + ap_id_; }

bool is_valid_scale(int scale_minutes) {
    return std::ranges::find(kScales, scale_minutes) != std::end(kScales);
}

void require_valid_scale(int scale_minutes) {
    if (!is_valid_scale(scale_minutes)) {
        throw UsageError("scale must be 15, 30 or 60 minutes, got " + std::to_string(scale_minutes));
    }
}

std::vector<double> OccupancySeries::values() const { return {counts.begin(), counts.end()}; }

std::vector<SessionRecord> parse_sessions(std::istream& source) {
    std::vector<SessionRecord> records;
    std::string raw;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(source, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) continue;
        if (!seen_content) {
            seen_content = true;
            if (is_header(line)) continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 4) {
            throw ParseError(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
        }
        SessionRecord rec;
        if (!parse_int(fields[0], rec.start) && !parse_iso_utc(fields[0], rec.start)) {
            throw ParseError(line_no, "invalid start time '" + std::string(fields[0]) + "'");
        }
        if (!parse_int(fields[1], rec.duration)) {
            throw ParseError(line_no, "invalid duration '" + std::string(fields[1]) + "'");
        }
        if (rec.duration < 0) throw ParseError(line_no, "negative duration");
        if (fields[2].empty()) throw ParseError(line_no, "empty device id");
        if (fields[3].empty()) throw ParseError(line_no, "empty ap id");
        rec.device_id = fields[2];
        rec.ap_id = fields[3];
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<SessionRecord> read_sessions_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open session log '" + path + "'");
    return parse_sessions(in);
}

void write_sessions(std::ostream& out, std::span<const SessionRecord> sessions) {
    out << "start,duration,device,ap\n";
    for (const auto& s : sessions) {
        out << s.start << ',' << s.duration << ',' << s.device_id << ',' << s.ap_id << '\n';
    }
}

OccupancySeries count_occupancy(std::span<const SessionRecord> sessions, int scale_minutes,
                                const Scope& scope, TimeRange range) {
    require_valid_scale(scale_minutes);
    const EpochSeconds step = EpochSeconds{scale_minutes} * 60;
    if (range.begin % step != 0 || range.end % step != 0) {
        throw UsageError("range [" + std::to_string(range.begin) + ", " + std::to_string(range.end) +
                         ") is not aligned to " + std::to_string(scale_minutes) + "-minute boundaries");
    }
    if (range.begin >= range.end) throw UsageError("empty or inverted time range");

    const auto n = static_cast<std::size_t>((range.end - range.begin) / step);
    OccupancySeries series{scale_minutes, scope, range.begin, std::vector<std::int64_t>(n, 0)};

    // (interval, device) pairs; distinct pairs are the counts.
    std::unordered_map<std::string_view, std::uint32_t> device_index;
    std::vector<std::pair<std::size_t, std::uint32_t>> presence;
    for (const auto& s : sessions) {
        if (s.duration <= 0) continue;
        if (!scope.is_building() && s.ap_id != scope.ap_id()) continue;
        const EpochSeconds lo = std::max(s.start, range.begin);
        const EpochSeconds hi = std::min(s.end(), range.end);
        if (lo >= hi) continue;
        const auto [it, inserted] =
            device_index.try_emplace(s.device_id, static_cast<std::uint32_t>(device_index.size()));
        const auto first = static_cast<std::size_t>((lo - range.begin) / step);
        const auto last = static_cast<std::size_t>((hi - range.begin - 1) / step);
        for (auto k = first; k <= last; ++k) presence.emplace_back(k, it->second);
    }
    std::ranges::sort(presence);
    const auto [tail_begin, tail_end] = std::ranges::unique(presence);
    presence.erase(tail_begin, tail_end);
    for (const auto& [k, dev] : presence) ++series.counts[k];
    return series;
}

TimeRange covering_range(std::span<const SessionRecord> sessions, int align_minutes) {
    const EpochSeconds step = EpochSeconds{align_minutes} * 60;
    bool any = false;
    EpochSeconds lo = 0, hi = 0;
    for (const auto& s : sessions) {
        const EpochSeconds end = std::max(s.end(), s.start + 1);
        lo = any ? std::min(lo, s.start) : s.start;
        hi = any ? std::max(hi, end) : end;
        any = true;
    }
    if (!any) return {};
    return {floor_to(lo, step), ceil_to(hi, step)};
}

std::vector<std::string> access_points(std::span<const SessionRecord> sessions) {
    std::vector<std::string> aps;
    std::unordered_set<std::string> seen;
    for (const auto& s : sessions) {
        if (seen.insert(s.ap_id).second) aps.push_back(s.ap_id);
    }
    return aps;
}

void write_series(std::ostream& out, const OccupancySeries& series) {
    for (std::size_t k = 0; k < series.counts.size(); ++k) {
        out << series.interval_start(k) << ',' << series.counts[k] << '\n';
    }
}

OccupancySeries read_series(std::istream& in, const Scope& scope, int fallback_scale) {
    std::vector<EpochSeconds> times;
    std::vector<std::int64_t> counts;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 2) throw ParseError(line_no, "expected 2 fields");
        std::int64_t t, c;
        if (!parse_int(fields[0], t)) {
            if (times.empty() && counts.empty()) continue;  // header
            throw ParseError(line_no, "invalid interval start '" + std::string(fields[0]) + "'");
        }
        if (!parse_int(fields[1], c) || c < 0) {
            throw ParseError(line_no, "invalid count '" + std::string(fields[1]) + "'");
        }
        times.push_back(t);
        counts.push_back(c);
    }
    int scale = fallback_scale;
    if (times.size() >= 2) {
        const auto step = times[1] - times[0];
        if (step <= 0 || step % 60 != 0) throw DataError("series rows are not in increasing time order");
        scale = static_cast<int>(step / 60);
    }
    require_valid_scale(scale);
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (times[k] - times[k - 1] != EpochSeconds{scale} * 60) {
            throw DataError("series has a gap or uneven spacing at row " + std::to_string(k + 1));
        }
    }
    OccupancySeries series{scale, scope, times.empty() ? 0 : times.front(), std::move(counts)};
    if (series.start % series.step_seconds() != 0) {
        throw DataError("series start is not aligned to its " + std::to_string(scale) + "-minute scale");
    }
    return series;
}

OccupancySeries read_series_file(const std::string& path, const Scope& scope, int fallback_scale) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open series file '" + path + "'");
    return read_series(in, scope, fallback_scale);
}

}  // namespace occu
