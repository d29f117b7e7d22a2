#include "rugscope/monitor.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rugscope/error.hpp"
#include "rugscope/features.hpp"
#include "rugscope/ingest.hpp"

namespace rugscope::monitor {

using nlohmann::json;
using namespace std::chrono;

namespace {
constexpr int kStateSchemaVersion = 1;
}

Date parse_date(std::string_view text) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = 0;
    const std::string s(text);
    if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3)
        throw Error(ErrorCode::InvalidArgument, "date '" + s + "' is not YYYY-MM-DD");
    const year_month_day ymd{year{y}, month{m}, day{d}};
    if (!ymd.ok()) throw Error(ErrorCode::InvalidArgument, "date '" + s + "' does not exist");
    return sys_days{ymd};
}

std::string format_date(Date date) {
    const year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

Timestamp midnight(Date date) { return duration_cast<seconds>(date.time_since_epoch()).count(); }

DailyResult run_daily(std::span<const ProjectTimeline> projects,
                      const learn::Model& logreg,
                      const learn::Model& svm,
                      Date date,
                      MonitorState state) {
    if (logreg.dim != features::kFeatureCount || svm.dim != features::kFeatureCount)
        throw Error(ErrorCode::SchemaMismatch, "models must take " + std::to_string(features::kFeatureCount) +
                                                   " features (logreg " + std::to_string(logreg.dim) + ", svm " +
                                                   std::to_string(svm.dim) + ")");
    const Timestamp cutoff = midnight(date);
    AlarmReport report;
    report.date = date;
    for (const auto& tl : projects) {
        if (tl.metadata.launch_timestamp > cutoff) continue;
        ++report.projects_scanned;
        const auto fv = features::featurize(tl, cutoff);
        const auto lr = learn::predict(logreg, fv);
        const auto sv = learn::predict(svm, fv);
        if (!lr.positive && !sv.positive) continue;

        auto it = state.alarms.find(tl.project());
        if (it == state.alarms.end()) {
            AlarmRecord rec;
            rec.project = tl.project();
            rec.first_alarm_date = date;
            rec.last_alarm_date = date;
            rec.fired_logreg = lr.positive;
            rec.fired_svm = sv.positive;
            rec.score_logreg = lr.score;
            rec.score_svm = sv.score;
            state.alarms.emplace(rec.project, rec);
            report.new_alarms.push_back(rec);
            continue;
        }
        auto& rec = it->second;
        if (date > rec.last_alarm_date) {
            ++rec.repeat_count;
            rec.last_alarm_date = date;
        }
        rec.fired_logreg = rec.fired_logreg || lr.positive;
        rec.fired_svm = rec.fired_svm || sv.positive;
        rec.score_logreg = lr.score;
        rec.score_svm = sv.score;
        report.repeated_alarms.push_back(rec);
    }
    if (!state.last_run_date || date > *state.last_run_date) state.last_run_date = date;
    return {std::move(report), std::move(state)};
}

ReplayResult replay(std::span<const ProjectTimeline> projects,
                    const learn::Model& logreg,
                    const learn::Model& svm,
                    Date start,
                    Date end,
                    MonitorState state) {
    if (end < start) throw Error(ErrorCode::InvalidArgument, "replay end date precedes start date");
    ReplayResult out;
    for (Date d = start; d <= end; d += days{1}) {
        auto daily = run_daily(projects, logreg, svm, d, std::move(state));
        state = std::move(daily.state);
        out.reports.push_back(std::move(daily.report));
    }
    out.state = std::move(state);
    return out;
}

// ---------------------------------------------------------------------------
// State persistence

namespace {

json models_fired(const AlarmRecord& r) {
    json m = json::array();
    if (r.fired_logreg) m.push_back("logreg");
    if (r.fired_svm) m.push_back("svm");
    return m;
}

json record_to_json(const AlarmRecord& r) {
    return {{"project", r.project.to_string()},
            {"first_alarm_date", format_date(r.first_alarm_date)},
            {"last_alarm_date", format_date(r.last_alarm_date)},
            {"models_fired", models_fired(r)},
            {"score_logreg", r.score_logreg},
            {"score_svm", r.score_svm},
            {"repeat_count", r.repeat_count}};
}

}  // namespace

std::string state_to_json(const MonitorState& state) {
    json alarms = json::array();
    for (const auto& [addr, rec] : state.alarms) alarms.push_back(record_to_json(rec));
    json doc{{"schema_version", kStateSchemaVersion},
             {"last_run_date", state.last_run_date ? json(format_date(*state.last_run_date)) : json(nullptr)},
             {"alarms", std::move(alarms)}};
    return doc.dump(1) + "\n";
}

MonitorState state_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        if (doc.at("schema_version").get<int>() != kStateSchemaVersion)
            throw Error(ErrorCode::StateCorrupt, "unsupported state schema version");
        MonitorState state;
        if (!doc.at("last_run_date").is_null()) state.last_run_date = parse_date(doc.at("last_run_date").get<std::string>());
        for (const auto& j : doc.at("alarms")) {
            AlarmRecord r;
            r.project = Address::from_hex(j.at("project").get<std::string>());
            r.first_alarm_date = parse_date(j.at("first_alarm_date").get<std::string>());
            r.last_alarm_date = parse_date(j.at("last_alarm_date").get<std::string>());
            for (const auto& m : j.at("models_fired")) {
                const auto name = m.get<std::string>();
                if (name == "logreg") r.fired_logreg = true;
                else if (name == "svm") r.fired_svm = true;
                else throw Error(ErrorCode::StateCorrupt, "unknown model '" + name + "' in state");
            }
            if (!r.fired_logreg && !r.fired_svm) throw Error(ErrorCode::StateCorrupt, "alarm without a firing model");
            r.score_logreg = j.at("score_logreg").get<double>();
            r.score_svm = j.at("score_svm").get<double>();
            r.repeat_count = j.at("repeat_count").get<int>();
            if (r.repeat_count < 1) throw Error(ErrorCode::StateCorrupt, "repeat_count below 1");
            if (!state.alarms.emplace(r.project, r).second)
                throw Error(ErrorCode::StateCorrupt, "duplicate project " + r.project.to_string());
        }
        return state;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::StateCorrupt, e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::StateCorrupt) throw;
        throw Error(ErrorCode::StateCorrupt, e.what());
    }
}

MonitorState load_state(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return {};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::StateCorrupt, "cannot read state file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return state_from_json(buf.str());
}

void save_state(const std::filesystem::path& path, const MonitorState& state) {
    ingest::write_text_file(path, state_to_json(state));
}

// ---------------------------------------------------------------------------
// Reports

ReportFormat parse_report_format(std::string_view s) {
    if (s == "jsonl") return ReportFormat::Jsonl;
    if (s == "csv") return ReportFormat::Csv;
    if (s == "text") return ReportFormat::Text;
    throw Error(ErrorCode::InvalidArgument, "unknown report format '" + std::string(s) + "'");
}

namespace {

struct Row {
    Date date;
    bool is_new = false;
    const AlarmRecord* record = nullptr;
};

std::vector<Row> sorted_rows(std::span<const AlarmReport> reports) {
    std::vector<Row> rows;
    for (const auto& r : reports) {
        for (const auto& a : r.new_alarms) rows.push_back({r.date, true, &a});
        for (const auto& a : r.repeated_alarms) rows.push_back({r.date, false, &a});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.date != b.date) return a.date < b.date;
        if (a.record->first_alarm_date != b.record->first_alarm_date)
            return a.record->first_alarm_date < b.record->first_alarm_date;
        return a.record->project < b.record->project;
    });
    return rows;
}

std::string models_cell(const AlarmRecord& r) {
    if (r.fired_logreg && r.fired_svm) return "logreg+svm";
    return r.fired_logreg ? "logreg" : "svm";
}

}  // namespace

std::string render_report(std::span<const AlarmReport> reports, ReportFormat format) {
    const auto rows = sorted_rows(reports);
    std::string out;
    switch (format) {
        case ReportFormat::Jsonl:
            for (const auto& row : rows) {
                json j = record_to_json(*row.record);
                j["date"] = format_date(row.date);
                j["status"] = row.is_new ? "new" : "repeat";
                out += j.dump() + "\n";
            }
            break;
        case ReportFormat::Csv:
            out = "date,status,project,first_alarm_date,models_fired,score_logreg,score_svm,repeat_count\n";
            for (const auto& row : rows) {
                const auto& r = *row.record;
                out += format_date(row.date) + "," + (row.is_new ? "new" : "repeat") + "," + r.project.to_string() +
                       "," + format_date(r.first_alarm_date) + "," + models_cell(r) + "," +
                       features::format_double(r.score_logreg) + "," + features::format_double(r.score_svm) + "," +
                       std::to_string(r.repeat_count) + "\n";
            }
            break;
        case ReportFormat::Text: {
            std::size_t total_new = 0;
            for (const auto& r : reports) {
                out += format_date(r.date) + ": scanned " + std::to_string(r.projects_scanned) + ", new " +
                       std::to_string(r.new_alarms.size()) + ", repeated " + std::to_string(r.repeated_alarms.size()) +
                       "\n";
                total_new += r.new_alarms.size();
            }
            out += "distinct new alarms: " + std::to_string(total_new) + "\n";
            for (const auto& row : rows) {
                if (!row.is_new) continue;
                out += "  " + format_date(row.date) + " " + row.record->project.to_string() + " [" +
                       models_cell(*row.record) + "]\n";
            }
            break;
        }
    }
    return out;
}

void emit_report(const std::filesystem::path& path, std::span<const AlarmReport> reports, ReportFormat format) {
    ingest::write_text_file(path, render_report(reports, format));
}

}  // namespace rugscope::monitor
