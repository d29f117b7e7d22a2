#include "rugscope/features.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rugscope/error.hpp"
#include "rugscope/ingest.hpp"

namespace rugscope::features {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kNames{
    // time series
    "T_launch_and_mint",
    "P_transfer",
    "P_mint",
    "P_swap",
    "P_burn",
    "P_trade",
    "P_top_price",
    "P_floor_price",
    "P_highest_24h_trade",
    // token transfer logs
    "N_transfer",
    "N_mint",
    "N_swap",
    "N_burn",
    "RN_mint_transfer",
    "RN_swap_transfer",
    "RN_burn_transfer",
    "A_all",
    "A_mint",
    "A_swap",
    "A_burn",
    "RA_mint_all",
    "RA_swap_all",
    "RA_burn_all",
    // secondary market trades
    "N_trade",
    "V_volume",
    "V_average_price",
    "N_beyond_average",
    "N_below_average",
    "RN_beyond_average",
    "RN_below_average",
    "V_top_price",
    "V_floor_price",
    "U_all",
    "U_buyer",
    "U_seller",
    "RU_buyer_all",
    "RU_seller_all",
    "N_highest_24h_trade",
    "RN_highest_24h_trade",
    "V_highest_24h_volume",
    "RV_highest_24h_volume",
    "V_highest_24h_average_price",
    "RV_highest_24h_average_price",
    "U_highest_24h_user",
    "RU_highest_24h_user",
    "N_recent_24h_trade",
    "RN_recent_24h_trade",
    "V_recent_24h_volume",
    "RV_recent_24h_volume",
    "V_recent_24h_average_price",
    "RV_recent_24h_average_price",
    "U_recent_24h_user",
    "RU_recent_24h_user",
};

double ratio(double num, double den) { return den > 0.0 ? num / den : kMissing; }

/// Records visible in the window: a prefix of a time-sorted list.
template <typename Record, typename TimeOf>
std::span<const Record> visible(const std::vector<Record>& records, Timestamp end, TimeOf time_of) {
    auto it = std::upper_bound(records.begin(), records.end(), end,
                               [&](Timestamp t, const Record& r) { return t < time_of(r); });
    return {records.data(), static_cast<std::size_t>(it - records.begin())};
}

std::span<const ClassifiedTransfer> visible_transfers(const ProjectTimeline& tl, const FeatureWindow& w) {
    return visible(tl.transfers, w.end, [](const ClassifiedTransfer& t) { return t.event.timestamp; });
}

std::span<const TradeRecord> visible_trades(const ProjectTimeline& tl, const FeatureWindow& w) {
    return visible(tl.trades, w.end, [](const TradeRecord& t) { return t.timestamp; });
}

/// Position of `t` within [first, last] of the trade span; -1 on a degenerate span.
double position_in_span(Timestamp t, Timestamp first, Timestamp last) {
    if (last <= first) return kMissing;
    return static_cast<double>(t - first) / static_cast<double>(last - first);
}

/// Half-open index range [begin, end) of trades inside the busiest 24-hour window.
/// Windows are anchored at each trade timestamp; ties keep the earliest anchor.
std::pair<std::size_t, std::size_t> busiest_day(std::span<const TradeRecord> trades) {
    std::size_t best_begin = 0;
    std::size_t best_end = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < trades.size(); ++i) {
        if (j < i) j = i;
        while (j < trades.size() && trades[j].timestamp < trades[i].timestamp + kSecondsPerDay) ++j;
        if (j - i > best_end - best_begin) {
            best_begin = i;
            best_end = j;
        }
    }
    return {best_begin, best_end};
}

struct DayStats {
    double n = 0;
    double volume = 0;
    double users = 0;
};

DayStats day_stats(std::span<const TradeRecord> trades) {
    DayStats s;
    std::unordered_set<Address> users;
    for (const auto& t : trades) {
        s.n += 1;
        s.volume += t.price_usd;
        users.insert(t.buyer);
        users.insert(t.seller);
    }
    s.users = static_cast<double>(users.size());
    return s;
}

/// Appends the eight per-day statistics for one 24-hour slice.
template <typename Out>
void append_day(Out& out, const DayStats& day, double n_trade, double volume, double avg_price, double users) {
    out.push_back(day.n);
    out.push_back(ratio(day.n, n_trade));
    out.push_back(day.volume);
    out.push_back(ratio(day.volume, volume));
    const double day_avg = day.n > 0 ? day.volume / day.n : kMissing;
    out.push_back(day_avg);
    out.push_back(day.n > 0 && avg_price > 0 ? day_avg / avg_price : kMissing);
    out.push_back(day.users);
    out.push_back(ratio(day.users, users));
}

template <std::size_t N>
struct FixedBuffer {
    std::array<double, N> values{};
    std::size_t size = 0;
    void push_back(double v) { values.at(size++) = v; }
};

}  // namespace

const std::array<std::string_view, kFeatureCount>& feature_names() { return kNames; }

double activity_concentration(std::span<const Timestamp> timestamps, const FeatureWindow& window) {
    std::size_t n = 0;
    Timestamp first = 0;
    Timestamp last = 0;
    for (Timestamp t : timestamps) {
        if (t < window.start || t > window.end) continue;
        if (n == 0 || t < first) first = t;
        if (n == 0 || t > last) last = t;
        ++n;
    }
    if (n < 2 || last == first) return kMissing;
    __int128 offset_sum = 0;
    for (Timestamp t : timestamps)
        if (t >= window.start && t <= window.end) offset_sum += t - first;
    const double mean = static_cast<double>(offset_sum) / static_cast<double>(n);
    return mean / static_cast<double>(last - first);
}

std::array<double, kTimeSeriesFeatureCount> extract_time_series_features(const ProjectTimeline& timeline,
                                                                         const FeatureWindow& window) {
    const auto transfers = visible_transfers(timeline, window);
    const auto trades = visible_trades(timeline, window);

    std::vector<Timestamp> all, mint, swap, burn, trade;
    for (const auto& t : transfers) {
        all.push_back(t.event.timestamp);
        switch (t.kind) {
            case TransferKind::Mint: mint.push_back(t.event.timestamp); break;
            case TransferKind::Swap: swap.push_back(t.event.timestamp); break;
            case TransferKind::Burn: burn.push_back(t.event.timestamp); break;
        }
    }
    for (const auto& t : trades) trade.push_back(t.timestamp);

    std::array<double, kTimeSeriesFeatureCount> out{};
    out[0] = mint.empty() ? kMissing : static_cast<double>(mint.front() - timeline.metadata.launch_timestamp);
    out[1] = activity_concentration(all, window);
    out[2] = activity_concentration(mint, window);
    out[3] = activity_concentration(swap, window);
    out[4] = activity_concentration(burn, window);
    out[5] = activity_concentration(trade, window);
    out[6] = kMissing;
    out[7] = kMissing;
    out[8] = kMissing;
    if (!trades.empty()) {
        const Timestamp first = trades.front().timestamp;
        const Timestamp last = trades.back().timestamp;
        // max_element/min_element return the first of equal elements.
        auto top = std::max_element(trades.begin(), trades.end(),
                                    [](const TradeRecord& a, const TradeRecord& b) { return a.price_usd < b.price_usd; });
        auto floor = std::min_element(trades.begin(), trades.end(), [](const TradeRecord& a, const TradeRecord& b) {
            return a.price_usd < b.price_usd;
        });
        out[6] = position_in_span(top->timestamp, first, last);
        out[7] = position_in_span(floor->timestamp, first, last);
        const auto [b, e] = busiest_day(trades);
        out[8] = activity_concentration(std::span<const Timestamp>(trade).subspan(b, e - b), window);
    }
    return out;
}

std::array<double, kEventFeatureCount> extract_event_features(const ProjectTimeline& timeline,
                                                              const FeatureWindow& window) {
    const auto transfers = visible_transfers(timeline, window);
    double n_mint = 0, n_swap = 0, n_burn = 0;
    std::unordered_set<Address> all, mint, swap, burn;
    auto participant = [&](const Address& a) {
        if (!a.is_burn_sink()) all.insert(a);
    };
    for (const auto& t : transfers) {
        const auto& e = t.event;
        participant(e.from);
        participant(e.to);
        switch (t.kind) {
            case TransferKind::Mint:
                n_mint += 1;
                mint.insert(e.to);
                break;
            case TransferKind::Swap:
                n_swap += 1;
                swap.insert(e.from);
                swap.insert(e.to);
                break;
            case TransferKind::Burn:
                n_burn += 1;
                burn.insert(e.from);
                break;
        }
    }
    const double n = static_cast<double>(transfers.size());
    const double a_all = static_cast<double>(all.size());
    const double a_mint = static_cast<double>(mint.size());
    const double a_swap = static_cast<double>(swap.size());
    const double a_burn = static_cast<double>(burn.size());
    return {n,
            n_mint,
            n_swap,
            n_burn,
            ratio(n_mint, n),
            ratio(n_swap, n),
            ratio(n_burn, n),
            a_all,
            a_mint,
            a_swap,
            a_burn,
            ratio(a_mint, a_all),
            ratio(a_swap, a_all),
            ratio(a_burn, a_all)};
}

std::array<double, kTradeFeatureCount> extract_trade_features(const ProjectTimeline& timeline,
                                                              const FeatureWindow& window) {
    const auto trades = visible_trades(timeline, window);
    FixedBuffer<kTradeFeatureCount> out;

    const double n_trade = static_cast<double>(trades.size());
    double volume = 0.0;
    double top = kMissing;
    double floor = kMissing;
    std::unordered_set<Address> users, buyers, sellers;
    for (const auto& t : trades) {
        volume += t.price_usd;
        top = (top == kMissing) ? t.price_usd : std::max(top, t.price_usd);
        floor = (floor == kMissing) ? t.price_usd : std::min(floor, t.price_usd);
        users.insert(t.buyer);
        users.insert(t.seller);
        buyers.insert(t.buyer);
        sellers.insert(t.seller);
    }
    const double avg = trades.empty() ? kMissing : volume / n_trade;
    double beyond = 0, below = 0;
    for (const auto& t : trades) {
        if (t.price_usd > avg) beyond += 1;
        if (t.price_usd < avg) below += 1;
    }
    const double u_all = static_cast<double>(users.size());

    out.push_back(n_trade);
    out.push_back(volume);
    out.push_back(avg);
    out.push_back(beyond);
    out.push_back(below);
    out.push_back(ratio(beyond, n_trade));
    out.push_back(ratio(below, n_trade));
    out.push_back(top);
    out.push_back(floor);
    out.push_back(u_all);
    out.push_back(static_cast<double>(buyers.size()));
    out.push_back(static_cast<double>(sellers.size()));
    out.push_back(ratio(static_cast<double>(buyers.size()), u_all));
    out.push_back(ratio(static_cast<double>(sellers.size()), u_all));

    const auto [b, e] = busiest_day(trades);
    append_day(out, day_stats(trades.subspan(b, e - b)), n_trade, volume, avg, u_all);

    auto recent_begin = std::upper_bound(trades.begin(), trades.end(), window.end - kSecondsPerDay,
                                         [](Timestamp t, const TradeRecord& r) { return t < r.timestamp; });
    const auto recent = trades.subspan(static_cast<std::size_t>(recent_begin - trades.begin()));
    append_day(out, day_stats(recent), n_trade, volume, avg, u_all);

    return out.values;
}

FeatureVector featurize(const ProjectTimeline& timeline, Timestamp cutoff) {
    if (cutoff < timeline.metadata.launch_timestamp)
        throw Error(ErrorCode::CutoffBeforeLaunch, "cutoff " + std::to_string(cutoff) + " precedes launch of " +
                                                       timeline.project().to_string());
    const FeatureWindow window{timeline.metadata.launch_timestamp, cutoff};
    FeatureVector fv;
    fv.project = timeline.project();
    fv.cutoff = cutoff;
    auto it = fv.values.begin();
    for (double v : extract_time_series_features(timeline, window)) *it++ = v;
    for (double v : extract_event_features(timeline, window)) *it++ = v;
    for (double v : extract_trade_features(timeline, window)) *it++ = v;
    return fv;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_header() {
    std::string h = "project,cutoff";
    for (auto name : kNames) {
        h += ',';
        h += name;
    }
    return h;
}

std::string to_csv_row(const FeatureVector& fv) {
    std::string row = fv.project.to_string() + "," + std::to_string(fv.cutoff);
    for (double v : fv.values) {
        row += ',';
        row += format_double(v);
    }
    return row;
}

void write_csv(const std::filesystem::path& path, const std::vector<FeatureVector>& rows) {
    std::string out = csv_header() + "\n";
    for (const auto& r : rows) out += to_csv_row(r) + "\n";
    ingest::write_text_file(path, out);
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        cells.push_back(line.substr(pos, comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return cells;
}

template <typename T>
T parse_number(std::string_view cell, std::size_t line) {
    T v{};
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw ParseError(line, "not a number: '" + std::string(cell) + "'");
    return v;
}

}  // namespace

std::vector<FeatureVector> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return {};
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header()) throw ParseError(1, "feature CSV header does not match the canonical feature list");
    std::vector<FeatureVector> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != kFeatureCount + 2)
            throw ParseError(line_no, "expected " + std::to_string(kFeatureCount + 2) + " columns");
        FeatureVector fv;
        auto addr = Address::parse(cells[0]);
        if (!addr) throw ParseError(line_no, "invalid project address");
        fv.project = *addr;
        fv.cutoff = parse_number<Timestamp>(cells[1], line_no);
        for (std::size_t i = 0; i < kFeatureCount; ++i) fv.values[i] = parse_number<double>(cells[i + 2], line_no);
        rows.push_back(fv);
    }
    return rows;
}

std::vector<FeatureVector> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_csv(in);
}

}  // namespace rugscope::features
