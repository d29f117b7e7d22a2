#include <doctest.h>

#include <algorithm>

#include "rugscope/error.hpp"
#include "rugscope/levenshtein.hpp"
#include "rugscope/oracles.hpp"
#include "rugscope/rng.hpp"
#include "rugscope/tricks.hpp"
#include "support.hpp"

using namespace rugscope;
using namespace rugscope::tricks;
using namespace testing;

namespace {

ApprovalEvent approval(Address owner, Address op, ApprovalScope scope, bool granted, Timestamp t) {
    return {kProject, owner, op, scope, granted, t};
}

std::vector<TradeRecord> pair_trades(Address a, Address b, int n, Timestamp start) {
    std::vector<TradeRecord> out;
    for (int i = 0; i < n; ++i)
        out.push_back(i % 2 ? trade(1, a, b, 10, start + i) : trade(1, b, a, 10, start + i));
    return out;
}

template <typename T>
T evidence(const std::optional<TrickFinding>& f) {
    REQUIRE(f.has_value());
    return std::get<T>(f->evidence);
}

}  // namespace

TEST_CASE("hidden mint") {
    Fixture f;
    f.meta = metadata(8390);
    for (TokenId i = 1; i <= 8879; ++i) f.transfers.push_back(mint(i, addr(1), kLaunch + 1));
    const auto e = evidence<HiddenMintEvidence>(detect_hidden_mint(f.build()));
    CHECK(e.circulating == 8879);
    CHECK(e.declared == 8390);

    Fixture exact;
    exact.meta = metadata(100);
    for (TokenId i = 1; i <= 100; ++i) exact.transfers.push_back(mint(i, addr(1), kLaunch + 1));
    CHECK_FALSE(detect_hidden_mint(exact.build()).has_value());

    // Burns bring circulation back under the cap.
    Fixture burned = exact;
    burned.transfers.push_back(mint(101, addr(1), kLaunch + 2));
    burned.transfers.push_back(transfer(101, addr(1), Address::dead(), kLaunch + 3));
    CHECK_FALSE(detect_hidden_mint(burned.build()).has_value());

    Fixture multi;
    multi.meta = metadata(10, TokenStandard::ERC1155);
    multi.transfers = {mint(1, addr(1), kLaunch)};
    try {
        detect_hidden_mint(multi.build());
        FAIL("expected NotApplicable");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NotApplicable);
    }
    Fixture unknown;
    unknown.transfers = {mint(1, addr(1), kLaunch)};
    try {
        detect_hidden_mint(unknown.build());
        FAIL("expected MissingSupply");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::MissingSupply);
    }
}

TEST_CASE("approval graph replay") {
    const Address a = addr(1), b = addr(2);
    auto g = build_approval_graph({approval(a, b, ApprovalScope::all(), true, 10)});
    CHECK(g.is_authorized(a, b, 99, 11));
    CHECK(g.is_authorized(a, b, 99, 10));
    CHECK_FALSE(g.is_authorized(a, b, 99, 9));
    CHECK_FALSE(g.is_authorized(b, a, 99, 11));

    g = build_approval_graph(
        {approval(a, b, ApprovalScope::all(), true, 10), approval(a, b, ApprovalScope::all(), false, 20)});
    CHECK_FALSE(g.is_authorized(a, b, 1, 21));
    CHECK(g.is_authorized(a, b, 1, 15));

    CHECK_FALSE(build_approval_graph({}).is_authorized(a, b, 1, 100));

    g = build_approval_graph({approval(a, b, ApprovalScope::single(5), true, 10),
                              approval(a, b, ApprovalScope::single(6), true, 10),
                              approval(a, b, ApprovalScope::single(5), false, 30)});
    CHECK(g.is_authorized(a, b, 5, 20));
    CHECK_FALSE(g.is_authorized(a, b, 7, 20));
    CHECK_FALSE(g.is_authorized(a, b, 5, 31));
    CHECK(g.is_authorized(a, b, 6, 31));
}

TEST_CASE("a later grant never changes an earlier answer") {
    Rng rng(5);
    const Address a = addr(1), b = addr(2);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<ApprovalEvent> events;
        Timestamp t = 0;
        for (int i = 0; i < 8; ++i) {
            t += rng.between(0, 5);
            auto scope = rng.chance(0.4) ? ApprovalScope::all() : ApprovalScope::single(rng.below(3));
            events.push_back(approval(a, b, scope, rng.chance(0.6), t));
        }
        const Timestamp probe = rng.between(0, t);
        const auto before = build_approval_graph(events);
        events.push_back(approval(a, b, ApprovalScope::all(), true, probe + 1));
        const auto after = build_approval_graph(events);
        for (TokenId tok = 0; tok < 3; ++tok)
            CHECK(before.is_authorized(a, b, tok, probe) == after.is_authorized(a, b, tok, probe));
    }
}

TEST_CASE("unapproved transfers") {
    const Address owner = addr(1), op = addr(2), buyer = addr(3);
    Fixture f;
    f.transfers = {mint(1, owner, kLaunch), transfer(1, owner, buyer, kLaunch + 100, 0, op)};
    auto tl = f.build();
    const auto e = evidence<UnapprovedTransferEvidence>(detect_unapproved_transfers(tl, build_approval_graph({})));
    REQUIRE(e.transfers.size() == 1);
    CHECK(e.transfers[0].initiator == op);

    f.approvals = {approval(owner, op, ApprovalScope::all(), true, kLaunch + 50)};
    tl = f.build();
    CHECK_FALSE(detect_unapproved_transfers(tl, build_approval_graph(tl.approvals)).has_value());

    // No operator field: self-initiated, never flagged.
    Fixture self;
    self.transfers = {mint(1, owner, kLaunch), transfer(1, owner, buyer, kLaunch + 100)};
    CHECK_FALSE(detect_unapproved_transfers(self.build(), build_approval_graph({})).has_value());

    Fixture batch;
    batch.transfers.push_back(mint(1, owner, kLaunch));
    for (int i = 0; i < 1310; ++i)
        batch.transfers.push_back(transfer(1, i % 2 ? buyer : owner, i % 2 ? owner : buyer, kLaunch + 10 + i, 0, op));
    const auto be =
        evidence<UnapprovedTransferEvidence>(detect_unapproved_transfers(batch.build(), build_approval_graph({})));
    CHECK(be.transfers.size() == 1310);
}

TEST_CASE("uri replacement") {
    Fixture f;
    f.transfers = {mint(1, addr(1), kLaunch)};
    CHECK_FALSE(detect_uri_replacement(f.build()).has_value());

    for (int i = 0; i < 155; ++i)
        f.uri_changes.push_back({kProject, static_cast<TokenId>(i), "ipfs://new/" + std::to_string(i), kLaunch + i, kCreator});
    const auto e = evidence<UriReplacementEvidence>(detect_uri_replacement(f.build()));
    CHECK(e.replaced_tokens == 155);
    CHECK(e.replacements == 155);
    CHECK(e.initiators == std::vector<Address>{kCreator});

    f.uri_changes.push_back({kProject, 0, "ipfs://new/0", kLaunch + 1000, kCreator});  // identical rewrite
    CHECK(evidence<UriReplacementEvidence>(detect_uri_replacement(f.build())).replacements == 155);
}

TEST_CASE("mint fee withdraw") {
    Fixture f;
    f.transfers = {mint(1, addr(1), kLaunch, 50'000'000'000'000'000ULL)};
    CHECK_FALSE(detect_mint_fee_withdraw(f.build()).has_value());
    f.withdrawals = {{kProject, static_cast<Wei>(2645'820'000'000'000'000ULL) * 1000, kCreator, kLaunch + 10}};
    const auto e = evidence<MintFeeWithdrawEvidence>(detect_mint_fee_withdraw(f.build()));
    CHECK(e.withdrawal_count == 1);
    CHECK(wei_to_string(e.total_withdrawn) == "2645820000000000000000");

    Fixture free_mint = f;
    free_mint.transfers = {mint(1, addr(1), kLaunch)};
    CHECK_FALSE(detect_mint_fee_withdraw(free_mint.build()).has_value());
}

TEST_CASE("levenshtein ratio") {
    CHECK(levenshtein_ratio("Azuki", "Azuki") == 1.0);
    CHECK(levenshtein_ratio("abc", "") == 0.0);
    CHECK(levenshtein_ratio("", "") == 1.0);
    CHECK(levenshtein_ratio("MUSHROHMS", "MUSHROOMS") == doctest::Approx(17.0 / 18.0).epsilon(1e-15));
    CHECK(levenshtein_ratio("kitten", "sitting") == levenshtein_ratio("sitting", "kitten"));
    // Scalar values, not bytes: one substituted non-ASCII character costs one edit.
    CHECK(levenshtein_distance(decode_utf8("caf\xc3\xa9"), decode_utf8("cafe")) == 1);
    CHECK(decode_utf8("\xff").size() == 1);
}

TEST_CASE("counterfeit tiers") {
    const std::vector<std::string> refs{"Bored Ape Yacht Club", "  Azuki  "};
    const auto id = evidence<CounterfeitEvidence>(detect_counterfeit("Azuki", refs));
    CHECK(id.identical.size() == 1);

    // 25 + 25 characters, four substitutions: ratio 46/50 = 0.92.
    const std::string ref = "abcdefghijklmnopqrstuvwxy";
    const std::string fake = "abcdefghijklmnopqrstuWXYZ";
    CHECK(levenshtein_ratio(fake, ref) == doctest::Approx(0.92));
    const auto med = evidence<CounterfeitEvidence>(detect_counterfeit(fake, {ref}));
    CHECK(med.medium.size() == 1);
    CHECK(med.high.empty());
    CHECK(med.identical.empty());

    CHECK_FALSE(detect_counterfeit("Totally Different", refs).has_value());
    // Case-sensitive: four substitutions over 40 characters is exactly 0.90.
    const auto lower = evidence<CounterfeitEvidence>(detect_counterfeit("bored ape yacht club", refs));
    CHECK(lower.identical.empty());
    CHECK(lower.medium.size() == 1);
    CHECK_THROWS_AS(detect_counterfeit("x", {}), Error);
}

TEST_CASE("wash trading threshold") {
    const Address a = addr(1), b = addr(2);
    CHECK_FALSE(detect_wash_trading(pair_trades(a, b, 10, kLaunch)).has_value());
    const auto e = evidence<WashTradingEvidence>(detect_wash_trading(pair_trades(a, b, 11, kLaunch)));
    REQUIRE(e.pairs.size() == 1);
    CHECK(e.pairs[0].count == 11);
    CHECK(e.pairs[0].a_to_b + e.pairs[0].b_to_a == 11);
    CHECK(e.pairs[0].volume_usd == doctest::Approx(110));
    CHECK(e.flagged_trades == 11);
}

TEST_CASE("wash trading matches the pair-enumeration oracle and ignores order") {
    Rng rng(99);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<TradeRecord> trades;
        const auto n = rng.between(0, 300);
        for (int i = 0; i < n; ++i) {
            const auto x = static_cast<unsigned>(rng.between(1, 6));
            auto y = static_cast<unsigned>(rng.between(1, 6));
            if (y == x) y = x % 6 + 1;
            trades.push_back(trade(1, addr(x), addr(y), rng.uniform(1, 100), kLaunch + i));
        }
        const auto expected = oracle::oracle_wash_pairs(trades, 10);
        auto check = [&](const std::vector<TradeRecord>& ts) {
            const auto f = detect_wash_trading(ts);
            std::map<std::pair<Address, Address>, std::size_t> got;
            if (f)
                for (const auto& p : std::get<WashTradingEvidence>(f->evidence).pairs) got[{p.a, p.b}] = p.count;
            CHECK(got == expected);
        };
        check(trades);
        rng.shuffle(trades);
        check(trades);
    }
}

TEST_CASE("middleman reselling") {
    const Address m = addr(9);
    Fixture f;
    for (TokenId i = 1; i <= 696; ++i) f.transfers.push_back(mint(i, m, kLaunch + 1));
    CHECK_FALSE(detect_middleman_reselling(f.build()).has_value());

    f.payments = {{kProject, 100, addr(3), kLaunch + 5}, {kProject, 50, m, kLaunch + 6}};
    const auto e = evidence<MiddlemanEvidence>(detect_middleman_reselling(f.build()));
    CHECK(e.middleman == m);
    CHECK(e.mint_count == 696);
    CHECK(e.payment_count == 1);
    CHECK(e.payment_total == 100);

    f.transfers.push_back(mint(697, addr(4), kLaunch + 2));
    CHECK_FALSE(detect_middleman_reselling(f.build()).has_value());
}

TEST_CASE("creator fee") {
    Fixture f;
    f.transfers = {mint(1, addr(1), kLaunch)};
    f.trades = {trade(1, addr(2), addr(1), 10, kLaunch + 1, 2.0), trade(1, addr(1), addr(2), 10, kLaunch + 2, 3.0)};
    const auto e = evidence<CreatorFeeEvidence>(detect_creator_fee(f.build()));
    CHECK(e.total_usd == 5.0);
    CHECK(e.trade_count == 2);

    f.trades = {trade(1, addr(2), addr(1), 10, kLaunch + 1, 0.0)};
    CHECK_FALSE(detect_creator_fee(f.build()).has_value());

    f.trades = {trade(1, addr(2), addr(1), 1e7, kLaunch + 1, 1.486e6)};
    CHECK(detect_creator_fee(f.build()).has_value());
    TrickConfig wyvern;
    wyvern.creator_fee_wyvern_only = true;
    CHECK_FALSE(detect_creator_fee(f.build(), wyvern).has_value());  // the fixture trade is on Seaport
}

TEST_CASE("analyze_tricks aggregates categories") {
    Fixture f;
    f.transfers = {mint(1, addr(1), kLaunch, 1000)};
    auto tl = f.build();
    auto r = analyze_tricks(tl, {"Something Else"});
    CHECK(r.findings.empty());
    CHECK_FALSE(r.explicit_any);
    CHECK_FALSE(r.implicit_any);

    f.withdrawals = {{kProject, 500, kCreator, kLaunch + 5}};
    f.uri_changes = {{kProject, 1, "ipfs://x", kLaunch + 6, kCreator}};
    r = analyze_tricks(f.build(), {});
    CHECK(r.explicit_any);
    CHECK(r.implicit_any);
    CHECK(r.findings.size() == 2);

    Fixture wash;
    wash.transfers = {mint(1, addr(1), kLaunch)};
    wash.trades = pair_trades(addr(1), addr(2), 12, kLaunch + 1);
    r = analyze_tricks(wash.build(), {});
    CHECK(r.implicit_any);
    CHECK_FALSE(r.explicit_any);
    REQUIRE(r.findings.size() == 1);
    CHECK(r.findings[0].trick == TrickKind::WashTrading);
}
