#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rugscope/records.hpp"

namespace rugscope::detector {

struct PricePoint {
    TokenId token_id = 0;
    double price_usd = 0.0;  // > 0
    Timestamp timestamp = 0;
};

/// Chronological trade prices across every token of one project.
using PriceSequence = std::vector<PricePoint>;

enum class Checker { Profit, Price, Liveness, Social };
std::string_view to_string(Checker c);

struct CheckResult {
    Checker checker = Checker::Profit;
    bool triggered = false;
    std::vector<std::string> evidence;
};

struct DetectionReport {
    Address project;
    std::array<CheckResult, 4> checks;  // Profit, Price, Liveness, Social
    bool rug_pull = false;
    Timestamp analysis_time = 0;
};

struct DetectorConfig {
    double drawdown_threshold = 0.99;
    double recovery_threshold = 0.01;
    double liveness_threshold = 0.99;
    int inactivity_days = 30;
};

/// drawdown_i together with the index j > i of the trough realizing it.
struct Drawdown {
    double value = 0.0;
    std::size_t trough = 0;
};

/// Triggered by any Ether sent straight to the project, any creator fee, or any paid mint.
CheckResult check_profit(const ProjectTimeline& timeline);

/// Projects trades onto price points, dropping zero-price trades. Input order is kept.
PriceSequence price_sequence(const std::vector<TradeRecord>& trades);

/// drawdown_i = max_{j>i} (p_i - p_j) / p_i, computed with one suffix-minimum pass.
/// Length is |seq| - 1. Throws Error(EmptySequence) for an empty sequence.
std::vector<double> drawdown_sequence(const PriceSequence& seq);

/// As drawdown_sequence, also reporting the earliest trough index attaining each value.
std::vector<Drawdown> drawdowns_with_troughs(const PriceSequence& seq);

/// max_{k>j, same token} (p_k - p_j) / p_j; 0 when the trough token never trades again.
/// Throws Error(IndexOutOfRange) for j >= |seq|.
double recovery(const PriceSequence& seq, std::size_t j);

CheckResult check_price(const PriceSequence& seq, double drawdown_threshold = 0.99, double recovery_threshold = 0.01);

/// (N1 - N2) / N1 with N1 = transfers in the first 30 days after the first mint and
/// N2 = transfers in the 30 days ending at `asof`.
/// Throws Error(NoMint) or Error(TooYoung) when the project is under 60 days old at `asof`.
double liveness(const ProjectTimeline& timeline, Timestamp asof);

CheckResult check_liveness(const ProjectTimeline& timeline, Timestamp asof, double threshold = 0.99);

CheckResult check_social(const ProjectTimeline& timeline, Timestamp asof, int inactivity_days = 30);

/// Runs all four checkers; the verdict is their conjunction.
DetectionReport detect_rug_pull(const ProjectTimeline& timeline, Timestamp asof, const DetectorConfig& config = {});

std::string report_to_json_line(const DetectionReport& report);

}  // namespace rugscope::detector
