#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rugscope/model.hpp"
#include "rugscope/records.hpp"

namespace rugscope::monitor {

using Date = std::chrono::sys_days;

/// "YYYY-MM-DD". Throws Error(InvalidArgument).
Date parse_date(std::string_view text);
std::string format_date(Date date);
/// 00:00:00 UTC of `date`.
Timestamp midnight(Date date);

struct AlarmRecord {
    Address project;
    Date first_alarm_date;
    Date last_alarm_date;
    bool fired_logreg = false;  // ever fired, across all days
    bool fired_svm = false;
    double score_logreg = 0.0;  // scores of the latest firing day
    double score_svm = 0.0;
    int repeat_count = 1;

    bool operator==(const AlarmRecord&) const = default;
};

struct MonitorState {
    std::map<Address, AlarmRecord> alarms;
    std::optional<Date> last_run_date;

    bool operator==(const MonitorState&) const = default;
};

struct AlarmReport {
    Date date;
    std::size_t projects_scanned = 0;
    std::vector<AlarmRecord> new_alarms;
    std::vector<AlarmRecord> repeated_alarms;

    bool any() const noexcept { return !new_alarms.empty() || !repeated_alarms.empty(); }
};

struct DailyResult {
    AlarmReport report;
    MonitorState state;
};

/// Featurizes every launched project at midnight UTC of `date`, scores it with both models and
/// raises an alarm when either fires (logreg probability > 0.5 or SVM margin > 0).
/// Throws Error(SchemaMismatch) when a model was not trained on the canonical feature vector.
DailyResult run_daily(std::span<const ProjectTimeline> projects,
                      const learn::Model& logreg,
                      const learn::Model& svm,
                      Date date,
                      MonitorState state);

struct ReplayResult {
    MonitorState state;
    std::vector<AlarmReport> reports;  // one per day
};

/// run_daily for every day of [start, end].
ReplayResult replay(std::span<const ProjectTimeline> projects,
                    const learn::Model& logreg,
                    const learn::Model& svm,
                    Date start,
                    Date end,
                    MonitorState state);

std::string state_to_json(const MonitorState& state);
/// Throws Error(StateCorrupt).
MonitorState state_from_json(std::string_view text);
/// A missing file yields an empty state; an unreadable or malformed one throws Error(StateCorrupt).
MonitorState load_state(const std::filesystem::path& path);
void save_state(const std::filesystem::path& path, const MonitorState& state);

enum class ReportFormat { Jsonl, Csv, Text };
ReportFormat parse_report_format(std::string_view s);

/// Rows sorted by (report date, first alarm date, project).
std::string render_report(std::span<const AlarmReport> reports, ReportFormat format);
void emit_report(const std::filesystem::path& path, std::span<const AlarmReport> reports, ReportFormat format);

}  // namespace rugscope::monitor
