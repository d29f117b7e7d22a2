#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rugscope/error.hpp"
#include "rugscope/features.hpp"
#include "rugscope/oracles.hpp"
#include "rugscope/rng.hpp"
#include "support.hpp"

using namespace rugscope;
using namespace rugscope::features;
using namespace testing;

namespace {

double value(const FeatureVector& fv, std::string_view name) {
    const auto& names = feature_names();
    const auto it = std::find(names.begin(), names.end(), name);
    REQUIRE(it != names.end());
    return fv.values[static_cast<std::size_t>(it - names.begin())];
}

ProjectTimeline random_timeline(Rng& rng) {
    Fixture f;
    const int n_tokens = static_cast<int>(rng.between(1, 30));
    Timestamp t = kLaunch + rng.between(0, 3600);
    for (int i = 1; i <= n_tokens; ++i) {
        f.transfers.push_back(mint(static_cast<TokenId>(i), addr(static_cast<unsigned>(rng.between(1, 8))), t));
        if (rng.chance(0.3)) t += rng.between(0, 3 * kDay);
    }
    const int n_trades = static_cast<int>(rng.between(0, 80));
    for (int i = 0; i < n_trades; ++i) {
        t += rng.between(0, kDay);
        const auto s = static_cast<unsigned>(rng.between(1, 8));
        auto b = static_cast<unsigned>(rng.between(1, 8));
        if (b == s) b = s % 8 + 1;
        const auto id = static_cast<TokenId>(rng.between(1, n_tokens));
        f.transfers.push_back(transfer(id, addr(s), addr(b), t));
        f.trades.push_back(trade(id, addr(b), addr(s), std::round(rng.uniform(0.5, 500.0) * 100) / 100, t));
        if (rng.chance(0.05)) f.transfers.push_back(transfer(id, addr(b), Address::dead(), t + 1));
    }
    return f.build();
}

}  // namespace

TEST_CASE("feature names are unique and the vector is fixed length") {
    const auto& names = feature_names();
    CHECK(names.size() == kFeatureCount);
    std::vector<std::string_view> sorted(names.begin(), names.end());
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    CHECK(csv_header().rfind("project,cutoff,T_launch_and_mint", 0) == 0);
}

TEST_CASE("activity_concentration") {
    const FeatureWindow w{0, 100};
    const std::vector<Timestamp> even{0, 50, 100};
    CHECK(activity_concentration(even, w) == doctest::Approx(0.5));
    const std::vector<Timestamp> late{0, 100, 100, 100};
    CHECK(activity_concentration(late, w) == doctest::Approx(0.75));
    const std::vector<Timestamp> one{10};
    CHECK(activity_concentration(one, w) == kMissing);
    const std::vector<Timestamp> same{10, 10, 10};
    CHECK(activity_concentration(same, w) == kMissing);
    const std::vector<Timestamp> outside{0, 50, 500};
    CHECK(activity_concentration(outside, w) == doctest::Approx(0.5));  // 500 is invisible
}

TEST_CASE("featurize a small project by hand") {
    Fixture f;
    f.transfers = {mint(1, addr(1), kLaunch + 100),
                   mint(2, addr(2), kLaunch + 100),
                   transfer(1, addr(1), addr(3), kLaunch + 1000),
                   transfer(2, addr(2), Address::dead(), kLaunch + 2000)};
    f.trades = {trade(1, addr(3), addr(1), 30, kLaunch + 1000), trade(1, addr(4), addr(3), 10, kLaunch + 3000),
                trade(1, addr(3), addr(4), 20, kLaunch + 5000)};
    const auto fv = featurize(f.build(), kLaunch + 5000);

    CHECK(value(fv, "T_launch_and_mint") == 100);
    CHECK(value(fv, "N_transfer") == 4);
    CHECK(value(fv, "N_mint") == 2);
    CHECK(value(fv, "N_swap") == 1);
    CHECK(value(fv, "N_burn") == 1);
    CHECK(value(fv, "RN_mint_transfer") == 0.5);
    CHECK(value(fv, "A_all") == 3);  // sinks are not participants
    CHECK(value(fv, "A_swap") == 2);
    CHECK(value(fv, "N_trade") == 3);
    CHECK(value(fv, "V_volume") == 60);
    CHECK(value(fv, "V_average_price") == 20);
    CHECK(value(fv, "N_beyond_average") == 1);
    CHECK(value(fv, "N_below_average") == 1);
    CHECK(value(fv, "V_top_price") == 30);
    CHECK(value(fv, "V_floor_price") == 10);
    CHECK(value(fv, "U_all") == 3);
    CHECK(value(fv, "U_buyer") == 2);
    CHECK(value(fv, "U_seller") == 3);
    CHECK(value(fv, "P_top_price") == 0.0);
    CHECK(value(fv, "P_floor_price") == 0.5);
    CHECK(value(fv, "N_highest_24h_trade") == 3);
    CHECK(value(fv, "N_recent_24h_trade") == 3);
}

TEST_CASE("no trades leaves market features at the missing value") {
    Fixture f;
    f.transfers = {mint(1, addr(1), kLaunch)};
    const auto fv = featurize(f.build(), kLaunch + kDay);
    CHECK(value(fv, "N_trade") == 0);
    CHECK(value(fv, "V_average_price") == kMissing);
    CHECK(value(fv, "RN_beyond_average") == kMissing);
    CHECK(value(fv, "P_top_price") == kMissing);
    CHECK(value(fv, "P_transfer") == kMissing);
    for (double v : fv.values) CHECK(std::isfinite(v));
}

TEST_CASE("cutoff before launch throws") {
    Fixture f;
    f.transfers = {mint(1, addr(1), kLaunch)};
    try {
        featurize(f.build(), kLaunch - 1);
        FAIL("expected CutoffBeforeLaunch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CutoffBeforeLaunch);
    }
}

TEST_CASE("features match the oracle and ignore the future") {
    Rng rng(2024);
    for (int rep = 0; rep < 100; ++rep) {
        const auto tl = random_timeline(rng);
        const Timestamp last = std::max(tl.transfers.back().event.timestamp,
                                        tl.trades.empty() ? Timestamp{0} : tl.trades.back().timestamp);
        const Timestamp cutoff = rng.between(tl.metadata.launch_timestamp, last + kDay);
        const auto fv = featurize(tl, cutoff);
        const auto expected = oracle::oracle_features(tl, cutoff);
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            INFO(feature_names()[i]);
            CHECK(fv.values[i] == doctest::Approx(expected.values[i]).epsilon(1e-12));
        }

        // Appending records after the cutoff changes nothing.
        auto later = tl;
        const Timestamp after = last + 2 * kDay;  // keeps the lists sorted
        later.trades.push_back(trade(1, addr(1), addr(2), 1e6, after));
        later.transfers.push_back({transfer(1, addr(2), addr(1), after), TransferKind::Swap});
        CHECK(featurize(later, cutoff).values == fv.values);
    }
}

TEST_CASE("csv round trip is exact") {
    Rng rng(3);
    std::vector<FeatureVector> rows;
    for (int i = 0; i < 10; ++i) {
        const auto tl = random_timeline(rng);
        rows.push_back(featurize(tl, tl.metadata.launch_timestamp + 10 * kDay));
    }
    std::ostringstream out;
    out << csv_header() << '\n';
    for (const auto& r : rows) out << to_csv_row(r) << '\n';
    std::istringstream in(out.str());
    const auto back = read_csv(in);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].project == rows[i].project);
        CHECK(back[i].cutoff == rows[i].cutoff);
        CHECK(back[i].values == rows[i].values);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-1) == "-1");
}
