#include "rugscope/detector.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "rugscope/error.hpp"

namespace rugscope::detector {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

CheckResult make_result(Checker c) {
    CheckResult r;
    r.checker = c;
    return r;
}

}  // namespace

std::string_view to_string(Checker c) {
    switch (c) {
        case Checker::Profit: return "profit";
        case Checker::Price: return "price";
        case Checker::Liveness: return "liveness";
        case Checker::Social: return "social";
    }
    return "?";
}

CheckResult check_profit(const ProjectTimeline& timeline) {
    auto result = make_result(Checker::Profit);
    if (!timeline.direct_payments.empty()) {
        Wei total = 0;
        for (const auto& p : timeline.direct_payments) total += p.amount_wei;
        const auto& first = timeline.direct_payments.front();
        result.evidence.push_back(std::to_string(timeline.direct_payments.size()) + " direct payment(s) totalling " +
                                  wei_to_string(total) + " wei; first from " + first.from.to_string() + " at " +
                                  std::to_string(first.timestamp));
    }
    std::size_t fee_trades = 0;
    double fees = 0.0;
    for (const auto& t : timeline.trades) {
        if (t.creator_fee_usd > 0.0) {
            ++fee_trades;
            fees += t.creator_fee_usd;
        }
    }
    if (fee_trades > 0)
        result.evidence.push_back("creator fee of " + fmt_double(fees) + " USD over " + std::to_string(fee_trades) +
                                  " trade(s)");
    std::size_t paid_mints = 0;
    Wei mint_fees = 0;
    for (const auto& ct : timeline.transfers) {
        if (ct.kind == TransferKind::Mint && ct.event.value_wei > 0) {
            ++paid_mints;
            mint_fees += ct.event.value_wei;
        }
    }
    if (paid_mints > 0)
        result.evidence.push_back(std::to_string(paid_mints) + " paid mint(s) collecting " + wei_to_string(mint_fees) +
                                  " wei");
    result.triggered = !result.evidence.empty();
    return result;
}

PriceSequence price_sequence(const std::vector<TradeRecord>& trades) {
    PriceSequence seq;
    seq.reserve(trades.size());
    for (const auto& t : trades)
        if (t.price_usd > 0.0) seq.push_back({t.token_id, t.price_usd, t.timestamp});
    return seq;
}

std::vector<Drawdown> drawdowns_with_troughs(const PriceSequence& seq) {
    if (seq.empty()) throw Error(ErrorCode::EmptySequence, "drawdown of an empty price sequence");
    const std::size_t n = seq.size();
    std::vector<Drawdown> out(n - 1);
    // Right-to-left scan keeping the minimum of seq[i+1..]; `<=` moves ties to the earliest index.
    std::size_t trough = n - 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        const double p = seq[i].price_usd;
        out[i] = {(p - seq[trough].price_usd) / p, trough};
        if (seq[i].price_usd <= seq[trough].price_usd) trough = i;
    }
    return out;
}

std::vector<double> drawdown_sequence(const PriceSequence& seq) {
    auto dd = drawdowns_with_troughs(seq);
    std::vector<double> out;
    out.reserve(dd.size());
    for (const auto& d : dd) out.push_back(d.value);
    return out;
}

double recovery(const PriceSequence& seq, std::size_t j) {
    if (j >= seq.size())
        throw Error(ErrorCode::IndexOutOfRange,
                    "trough index " + std::to_string(j) + " outside sequence of " + std::to_string(seq.size()));
    const auto& trough = seq[j];
    bool traded_again = false;
    double best = 0.0;
    for (std::size_t k = j + 1; k < seq.size(); ++k) {
        if (seq[k].token_id != trough.token_id) continue;
        const double r = (seq[k].price_usd - trough.price_usd) / trough.price_usd;
        best = traded_again ? std::max(best, r) : r;
        traded_again = true;
    }
    return traded_again ? best : 0.0;
}

CheckResult check_price(const PriceSequence& seq, double drawdown_threshold, double recovery_threshold) {
    auto result = make_result(Checker::Price);
    if (seq.size() < 2) return result;

    const auto dd = drawdowns_with_troughs(seq);
    std::map<std::size_t, double> troughs;  // trough index -> recovery
    std::size_t qualifying = 0;
    double worst = 0.0;
    for (const auto& d : dd) {
        if (d.value > drawdown_threshold) {
            ++qualifying;
            worst = std::max(worst, d.value);
            if (!troughs.contains(d.trough)) troughs.emplace(d.trough, recovery(seq, d.trough));
        }
    }
    if (qualifying == 0) return result;

    for (const auto& [j, rec] : troughs) {
        if (rec > recovery_threshold) return result;
    }
    result.triggered = true;
    result.evidence.push_back(std::to_string(qualifying) + " drawdown(s) above " + fmt_double(drawdown_threshold) +
                              ", largest " + fmt_double(worst));
    for (const auto& [j, rec] : troughs) {
        result.evidence.push_back("trough token " + std::to_string(seq[j].token_id) + " at " +
                                  std::to_string(seq[j].timestamp) + " price " + fmt_double(seq[j].price_usd) +
                                  " USD, recovery " + fmt_double(rec));
    }
    return result;
}

double liveness(const ProjectTimeline& timeline, Timestamp asof) {
    const auto first_mint = std::find_if(timeline.transfers.begin(), timeline.transfers.end(),
                                         [](const ClassifiedTransfer& t) { return t.kind == TransferKind::Mint; });
    if (first_mint == timeline.transfers.end())
        throw Error(ErrorCode::NoMint, "project " + timeline.project().to_string() + " has no mint");
    const Timestamp start = first_mint->event.timestamp;
    if (asof - start < 2 * kMonthSeconds)
        throw Error(ErrorCode::TooYoung, "project " + timeline.project().to_string() + " is under 60 days old");

    std::size_t n1 = 0;
    std::size_t n2 = 0;
    for (const auto& t : timeline.transfers) {
        const Timestamp ts = t.event.timestamp;
        if (ts > asof) break;
        if (ts >= start && ts < start + kMonthSeconds) ++n1;
        if (ts > asof - kMonthSeconds) ++n2;
    }
    return (static_cast<double>(n1) - static_cast<double>(n2)) / static_cast<double>(n1);
}

CheckResult check_liveness(const ProjectTimeline& timeline, Timestamp asof, double threshold) {
    auto result = make_result(Checker::Liveness);
    try {
        const double value = liveness(timeline, asof);
        if (value > threshold) {
            result.triggered = true;
            result.evidence.push_back("liveness " + fmt_double(value) + " exceeds " + fmt_double(threshold));
        } else {
            result.evidence.push_back("liveness " + fmt_double(value));
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::TooYoung)
            result.evidence.push_back("too young: first mint less than 60 days before analysis time");
        else if (e.code() == ErrorCode::NoMint)
            result.evidence.push_back("no mint event");
        else
            throw;
    }
    return result;
}

CheckResult check_social(const ProjectTimeline& timeline, Timestamp asof, int inactivity_days) {
    auto result = make_result(Checker::Social);
    // Latest observation per platform that is not after `asof`.
    std::map<SocialPlatform, const SocialSnapshot*> latest;
    for (const auto& s : timeline.social) {
        if (s.snapshot_timestamp > asof) continue;
        auto& slot = latest[s.platform];
        if (!slot || slot->snapshot_timestamp <= s.snapshot_timestamp) slot = &s;
    }
    const Timestamp inactivity = static_cast<Timestamp>(inactivity_days) * kSecondsPerDay;
    for (const auto& [platform, snap] : latest) {
        const std::string where = std::string(to_string(platform)) + " snapshot at " +
                                  std::to_string(snap->snapshot_timestamp);
        if (snap->status != SocialStatus::Active) {
            result.evidence.push_back(where + ": " + std::string(to_string(snap->status)));
        } else if (platform == SocialPlatform::Twitter && snap->last_post_timestamp &&
                   asof - *snap->last_post_timestamp >= inactivity) {
            result.evidence.push_back(where + ": no post since " + std::to_string(*snap->last_post_timestamp));
        }
    }
    result.triggered = !result.evidence.empty();
    return result;
}

DetectionReport detect_rug_pull(const ProjectTimeline& timeline, Timestamp asof, const DetectorConfig& config) {
    DetectionReport report;
    report.project = timeline.project();
    report.analysis_time = asof;
    report.checks[0] = check_profit(timeline);
    report.checks[1] = check_price(price_sequence(timeline.trades), config.drawdown_threshold, config.recovery_threshold);
    report.checks[2] = check_liveness(timeline, asof, config.liveness_threshold);
    report.checks[3] = check_social(timeline, asof, config.inactivity_days);
    report.rug_pull = std::all_of(report.checks.begin(), report.checks.end(),
                                  [](const CheckResult& c) { return c.triggered; });
    return report;
}

std::string report_to_json_line(const DetectionReport& report) {
    nlohmann::json checks = nlohmann::json::object();
    for (const auto& c : report.checks)
        checks[std::string(to_string(c.checker))] = {{"triggered", c.triggered}, {"evidence", c.evidence}};
    nlohmann::json j{{"project", report.project.to_string()},
                     {"analysis_time", report.analysis_time},
                     {"rug_pull", report.rug_pull},
                     {"checks", std::move(checks)}};
    return j.dump();
}

}  // namespace rugscope::detector
