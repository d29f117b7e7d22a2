#include "rugscope/oracles.hpp"

#include <algorithm>
#include <set>

namespace rugscope::oracle {

std::vector<double> oracle_drawdown(const std::vector<double>& prices) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) {
        double best = -1e300;
        for (std::size_t j = i + 1; j < prices.size(); ++j) best = std::max(best, (prices[i] - prices[j]) / prices[i]);
        out.push_back(best);
    }
    return out;
}

double oracle_recovery(const std::vector<double>& prices, const std::vector<TokenId>& tokens, std::size_t j) {
    bool any = false;
    double best = 0;
    for (std::size_t k = j + 1; k < prices.size(); ++k) {
        if (tokens[k] != tokens[j]) continue;
        const double r = (prices[k] - prices[j]) / prices[j];
        best = any ? std::max(best, r) : r;
        any = true;
    }
    return best;
}

std::map<std::pair<Address, Address>, std::size_t> oracle_wash_pairs(const std::vector<TradeRecord>& trades,
                                                                     std::size_t threshold) {
    // Every unordered pair of participants, counted by a full scan of the trade list.
    std::set<Address> parties;
    for (const auto& t : trades) parties.insert({t.buyer, t.seller});
    std::map<std::pair<Address, Address>, std::size_t> out;
    for (auto a = parties.begin(); a != parties.end(); ++a) {
        for (auto b = std::next(a); b != parties.end(); ++b) {
            std::size_t n = 0;
            for (const auto& t : trades)
                if ((t.buyer == *a && t.seller == *b) || (t.buyer == *b && t.seller == *a)) ++n;
            if (n > threshold) out[{*a, *b}] = n;
        }
    }
    return out;
}

std::size_t oracle_levenshtein(const std::u32string& a, const std::u32string& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[a.size()][b.size()];
}

namespace {

constexpr double kMissing = -1.0;
constexpr Timestamp kDay = 86400;

double ratio(double num, double den) { return den > 0 ? num / den : kMissing; }

double concentration(const std::vector<Timestamp>& ts) {
    if (ts.size() < 2) return kMissing;
    const Timestamp lo = *std::min_element(ts.begin(), ts.end());
    const Timestamp hi = *std::max_element(ts.begin(), ts.end());
    if (lo == hi) return kMissing;
    long double sum = 0;
    for (auto t : ts) sum += static_cast<long double>(t - lo);
    return static_cast<double>(sum / ts.size() / static_cast<long double>(hi - lo));
}

void day_features(std::vector<double>& out, const std::vector<TradeRecord>& day, double n_trade, double volume,
                  double avg, double users) {
    double v = 0;
    std::set<Address> u;
    for (const auto& t : day) {
        v += t.price_usd;
        u.insert(t.buyer);
        u.insert(t.seller);
    }
    const double n = static_cast<double>(day.size());
    out.push_back(n);
    out.push_back(ratio(n, n_trade));
    out.push_back(v);
    out.push_back(ratio(v, volume));
    const double day_avg = day.empty() ? kMissing : v / n;
    out.push_back(day_avg);
    out.push_back(!day.empty() && avg > 0 ? day_avg / avg : kMissing);
    out.push_back(static_cast<double>(u.size()));
    out.push_back(ratio(static_cast<double>(u.size()), users));
}

}  // namespace

features::FeatureVector oracle_features(const ProjectTimeline& tl, Timestamp cutoff) {
    const Timestamp launch = tl.metadata.launch_timestamp;
    auto inside = [&](Timestamp t) { return t >= launch && t <= cutoff; };

    std::vector<ClassifiedTransfer> transfers;
    for (const auto& t : tl.transfers)
        if (inside(t.event.timestamp)) transfers.push_back(t);
    std::vector<TradeRecord> trades;
    for (const auto& t : tl.trades)
        if (inside(t.timestamp)) trades.push_back(t);

    std::vector<double> out;

    // time series
    std::vector<Timestamp> all, mint, swap, burn, trade;
    for (const auto& t : transfers) {
        all.push_back(t.event.timestamp);
        if (t.kind == TransferKind::Mint) mint.push_back(t.event.timestamp);
        if (t.kind == TransferKind::Swap) swap.push_back(t.event.timestamp);
        if (t.kind == TransferKind::Burn) burn.push_back(t.event.timestamp);
    }
    for (const auto& t : trades) trade.push_back(t.timestamp);
    out.push_back(mint.empty() ? kMissing : static_cast<double>(*std::min_element(mint.begin(), mint.end()) - launch));
    out.push_back(concentration(all));
    out.push_back(concentration(mint));
    out.push_back(concentration(swap));
    out.push_back(concentration(burn));
    out.push_back(concentration(trade));

    // busiest 24 hours: the earliest anchor with the most trades in [t, t + 1 day)
    std::vector<TradeRecord> busiest;
    for (const auto& anchor : trades) {
        std::vector<TradeRecord> window;
        for (const auto& t : trades)
            if (t.timestamp >= anchor.timestamp && t.timestamp < anchor.timestamp + kDay) window.push_back(t);
        if (window.size() > busiest.size()) busiest = window;
    }

    if (trades.empty()) {
        out.insert(out.end(), {kMissing, kMissing, kMissing});
    } else {
        std::size_t top = 0, floor = 0;
        for (std::size_t i = 0; i < trades.size(); ++i) {
            if (trades[i].price_usd > trades[top].price_usd) top = i;
            if (trades[i].price_usd < trades[floor].price_usd) floor = i;
        }
        const Timestamp first = trades.front().timestamp, last = trades.back().timestamp;
        auto pos = [&](Timestamp t) {
            return last == first ? kMissing : static_cast<double>(t - first) / static_cast<double>(last - first);
        };
        out.push_back(pos(trades[top].timestamp));
        out.push_back(pos(trades[floor].timestamp));
        std::vector<Timestamp> bt;
        for (const auto& t : busiest) bt.push_back(t.timestamp);
        out.push_back(concentration(bt));
    }

    // transfer logs
    std::set<Address> a_all, a_mint, a_swap, a_burn;
    for (const auto& t : transfers) {
        const auto& e = t.event;
        for (const auto& a : {e.from, e.to})
            if (!a.is_null() && a != Address::dead()) a_all.insert(a);
        if (t.kind == TransferKind::Mint) a_mint.insert(e.to);
        if (t.kind == TransferKind::Swap) a_swap.insert({e.from, e.to});
        if (t.kind == TransferKind::Burn) a_burn.insert(e.from);
    }
    const double n = static_cast<double>(transfers.size());
    out.insert(out.end(), {n, double(mint.size()), double(swap.size()), double(burn.size()), ratio(mint.size(), n),
                           ratio(swap.size(), n), ratio(burn.size(), n), double(a_all.size()), double(a_mint.size()),
                           double(a_swap.size()), double(a_burn.size()), ratio(a_mint.size(), a_all.size()),
                           ratio(a_swap.size(), a_all.size()), ratio(a_burn.size(), a_all.size())});

    // trades
    const double n_trade = static_cast<double>(trades.size());
    double volume = 0;
    std::set<Address> users, buyers, sellers;
    for (const auto& t : trades) {
        volume += t.price_usd;
        users.insert(t.buyer);
        users.insert(t.seller);
        buyers.insert(t.buyer);
        sellers.insert(t.seller);
    }
    const double avg = trades.empty() ? kMissing : volume / n_trade;
    double beyond = 0, below = 0, top = kMissing, floor = kMissing;
    for (const auto& t : trades) {
        beyond += t.price_usd > avg;
        below += t.price_usd < avg;
        top = std::max(top, t.price_usd);
        floor = floor == kMissing ? t.price_usd : std::min(floor, t.price_usd);
    }
    const double u = static_cast<double>(users.size());
    out.insert(out.end(), {n_trade, volume, avg, beyond, below, ratio(beyond, n_trade), ratio(below, n_trade), top,
                           floor, u, double(buyers.size()), double(sellers.size()), ratio(buyers.size(), u),
                           ratio(sellers.size(), u)});
    day_features(out, busiest, n_trade, volume, avg, u);
    std::vector<TradeRecord> recent;
    for (const auto& t : trades)
        if (t.timestamp > cutoff - kDay) recent.push_back(t);
    day_features(out, recent, n_trade, volume, avg, u);

    features::FeatureVector fv;
    fv.project = tl.project();
    fv.cutoff = cutoff;
    std::copy(out.begin(), out.end(), fv.values.begin());
    return fv;
}

}  // namespace rugscope::oracle
