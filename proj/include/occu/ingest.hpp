#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace occu {

using EpochSeconds = std::int64_t;

/// One Wi-Fi association event.
struct SessionRecord {
    EpochSeconds start = 0;
    std::int64_t duration = 0;  // seconds, >= 0
    std::string device_id;
    std::string ap_id;

    EpochSeconds end() const { return start + duration; }
    bool operator==(const SessionRecord&) const = default;
};

/// Aggregation target: the whole building or a single access point.
class Scope {
public:
    static Scope building() { return Scope{}; }
    static Scope access_point(std::string ap_id);
    /// Parses "building" or "ap:<id>".
    static Scope parse(const std::string& text);

    bool is_building() const { return ap_id_.empty(); }
    const std::string& ap_id() const { return ap_id_; }
    /// Inverse of parse().
    std::string to_string() const;

    bool operator==(const Scope&) const = default;

private:
    Scope() = default;
    std::string ap_id_;
};

inline constexpr int kScales[] = {15, 30, 60};

bool is_valid_scale(int scale_minutes);
/// Throws UsageError unless scale is one of 15, 30, 60.
void require_valid_scale(int scale_minutes);

/// Half-open time range [begin, end).
struct TimeRange {
    EpochSeconds begin = 0;
    EpochSeconds end = 0;
};

/// Occupant counts over consecutive intervals of one scale.
/// Interval k covers [start + k*scale, start + (k+1)*scale).
struct OccupancySeries {
    int scale_minutes = 60;
    Scope scope = Scope::building();
    EpochSeconds start = 0;
    std::vector<std::int64_t> counts;

    EpochSeconds step_seconds() const { return EpochSeconds{scale_minutes} * 60; }
    EpochSeconds interval_start(std::size_t k) const {
        return start + static_cast<EpochSeconds>(k) * step_seconds();
    }
    EpochSeconds end() const { return interval_start(counts.size()); }
    std::vector<double> values() const;
};

/// Parses the 4-column session log (`start,duration,device,ap`). A header
/// line `start,duration,device,ap` is skipped when present, as are blank
/// lines. Start may be epoch seconds or an ISO-8601 UTC stamp
/// (`2016-01-15T10:00:00Z`); it is normalized to epoch seconds.
std::vector<SessionRecord> parse_sessions(std::istream& source);
std::vector<SessionRecord> read_sessions_file(const std::string& path);
void write_sessions(std::ostream& out, std::span<const SessionRecord> sessions);

/// Number of distinct devices present in each interval of `range`. A
/// session is present in an interval when [start, start+duration) overlaps
/// it with nonzero length. Building scope de-duplicates devices across APs.
OccupancySeries count_occupancy(std::span<const SessionRecord> sessions, int scale_minutes,
                                const Scope& scope, TimeRange range);

/// Smallest range aligned to `align_minutes` covering every session.
/// Empty input yields an empty range.
TimeRange covering_range(std::span<const SessionRecord> sessions, int align_minutes = 60);

/// Distinct AP ids in first-seen order.
std::vector<std::string> access_points(std::span<const SessionRecord> sessions);

/// Two-column series text: `interval_start_epoch,count`, one row per interval.
void write_series(std::ostream& out, const OccupancySeries& series);
/// Reads the two-column format. The scale is inferred from row spacing when
/// there are at least two rows, otherwise `fallback_scale` is used.
OccupancySeries read_series(std::istream& in, const Scope& scope, int fallback_scale = 60);
OccupancySeries read_series_file(const std::string& path, const Scope& scope, int fallback_scale = 60);

}  // namespace occu
