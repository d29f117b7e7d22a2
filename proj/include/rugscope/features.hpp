#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rugscope/records.hpp"

namespace rugscope::features {

inline constexpr std::size_t kTimeSeriesFeatureCount = 9;
inline constexpr std::size_t kEventFeatureCount = 14;
inline constexpr std::size_t kTradeFeatureCount = 30;
inline constexpr std::size_t kFeatureCount = kTimeSeriesFeatureCount + kEventFeatureCount + kTradeFeatureCount;

/// Value of any feature whose records or denominator are absent.
inline constexpr double kMissing = -1.0;

/// Canonical order: time-series, then transfer-log, then secondary-market features.
const std::array<std::string_view, kFeatureCount>& feature_names();

/// [launch, cutoff]; records after `end` are invisible.
struct FeatureWindow {
    Timestamp start = 0;
    Timestamp end = 0;
};

struct FeatureVector {
    Address project;
    Timestamp cutoff = 0;
    std::array<double, kFeatureCount> values{};
};

/// Mean offset of the activities from the first one, as a fraction of first-to-last span.
/// Only timestamps inside the window count. -1 with fewer than two activities or a zero span.
double activity_concentration(std::span<const Timestamp> timestamps, const FeatureWindow& window);

std::array<double, kTimeSeriesFeatureCount> extract_time_series_features(const ProjectTimeline& timeline,
                                                                         const FeatureWindow& window);
std::array<double, kEventFeatureCount> extract_event_features(const ProjectTimeline& timeline,
                                                              const FeatureWindow& window);
std::array<double, kTradeFeatureCount> extract_trade_features(const ProjectTimeline& timeline,
                                                              const FeatureWindow& window);

/// Throws Error(CutoffBeforeLaunch).
FeatureVector featurize(const ProjectTimeline& timeline, Timestamp cutoff);

// CSV: header "project,cutoff,<feature names...>", one row per vector.
std::string csv_header();
std::string to_csv_row(const FeatureVector& fv);
void write_csv(const std::filesystem::path& path, const std::vector<FeatureVector>& rows);
std::vector<FeatureVector> read_csv(std::istream& in);
std::vector<FeatureVector> read_csv(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace rugscope::features
