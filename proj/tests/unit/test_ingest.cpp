#include <doctest.h>

#include <sstream>

#include "rugscope/error.hpp"
#include "rugscope/ingest.hpp"
#include "support.hpp"

using namespace rugscope;
using namespace testing;

namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

std::size_t parse_error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        ingest::parse_transfers(in);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

const std::string kValid =
    R"({"project":"0x1111111111111111111111111111111111111111","token_id":1,"from":"0x0000000000000000000000000000000000000000","to":"0xaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa","quantity":1,"value_wei":0,"timestamp":1650000600,"tx_hash":"0x01","standard":"erc721"})";

}  // namespace

TEST_CASE("address parsing normalizes case and rejects bad lengths") {
    auto a = Address::parse("0xABCDEFabcdef0000000000000000000000000001");
    REQUIRE(a);
    CHECK(a->to_string() == "0xabcdefabcdef0000000000000000000000000001");
    CHECK(Address::parse("0xabcdefabcdef000000000000000000000000001") == std::nullopt);
    CHECK(Address::parse("abcdefabcdef00000000000000000000000000001") == std::nullopt);
    CHECK(Address::parse("0xabcdefabcdef0000000000000000000000000g01") == std::nullopt);
    CHECK(*Address::parse("0x000000000000000000000000000000000000dEaD") == Address::dead());
    CHECK(Address::dead().is_burn_sink());
    CHECK(Address::null().is_burn_sink());
    CHECK_FALSE(addr(1).is_burn_sink());
}

TEST_CASE("wei amounts beyond 64 bits survive text conversion") {
    const Wei max = ~static_cast<Wei>(0);
    CHECK(wei_to_string(max) == "340282366920938463463374607431768211455");
    CHECK(parse_wei("340282366920938463463374607431768211455") == max);
    CHECK(parse_wei("340282366920938463463374607431768211456") == std::nullopt);
    CHECK(parse_wei("12a") == std::nullopt);
    CHECK(wei_to_string(0) == "0");
}

TEST_CASE("classify_transfer") {
    CHECK(ingest::classify_transfer(mint(1, addr(1), kLaunch)) == TransferKind::Mint);
    CHECK(ingest::classify_transfer(transfer(1, addr(1), Address::dead(), kLaunch)) == TransferKind::Burn);
    CHECK(ingest::classify_transfer(transfer(1, addr(1), Address::null(), kLaunch)) == TransferKind::Burn);
    CHECK(ingest::classify_transfer(transfer(1, addr(1), addr(2), kLaunch)) == TransferKind::Swap);
    CHECK(code_of([] { ingest::classify_transfer(transfer(1, addr(1), addr(1), kLaunch)); }) ==
          ErrorCode::MalformedEvent);
    CHECK(code_of([] { ingest::classify_transfer(transfer(1, Address::null(), Address::dead(), kLaunch)); }) ==
          ErrorCode::MalformedEvent);
}

TEST_CASE("parse_transfers basics") {
    std::istringstream empty("");
    CHECK(ingest::parse_transfers(empty).empty());

    std::istringstream three(kValid + "\n" + kValid + "\n" + kValid + "\n");
    CHECK(ingest::parse_transfers(three).size() == 3);

    std::string bad = kValid;
    bad.replace(bad.find("0xaaaa"), 42, "0x" + std::string(39, 'a'));  // 39 hex digits
    CHECK(parse_error_line(kValid + "\n" + bad + "\n") == 2);
    CHECK(parse_error_line("\n\n" + bad) == 3);
    CHECK(code_of([] { ingest::parse_transfers(std::filesystem::path("/nonexistent/transfers.jsonl")); }) ==
          ErrorCode::Io);
}

TEST_CASE("per-type validation") {
    const std::string p = "0x1111111111111111111111111111111111111111";
    const std::string a = "0xaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa";
    const std::string b = "0xbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb";
    std::istringstream negative(R"({"project":")" + p + R"(","token_id":1,"buyer":")" + a + R"(","seller":")" + b +
                                R"(","price_usd":-0.5,"timestamp":5,"market":"other"})");
    CHECK_THROWS_AS(ingest::parse_trades(negative), ParseError);

    std::istringstream revoke(R"({"project":")" + p + R"(","owner":")" + a + R"(","operator":")" + b +
                              R"(","scope":"all","granted":false,"timestamp":5})");
    const auto approvals = ingest::parse_approvals(revoke);
    REQUIRE(approvals.size() == 1);
    CHECK_FALSE(approvals[0].granted);
    CHECK(approvals[0].scope.is_all());

    std::istringstream no_supply(R"({"project":")" + p + R"(","name":"X","creator":")" + a +
                                 R"(","launch_timestamp":5,"standard":"erc721"})");
    const auto meta = ingest::parse_metadata(no_supply);
    REQUIRE(meta.size() == 1);
    CHECK_FALSE(meta[0].declared_total_supply.has_value());
}

TEST_CASE("build_timeline sorts stably and validates") {
    Fixture f;
    f.transfers = {mint(2, addr(2), kLaunch + 20), mint(1, addr(1), kLaunch + 10), mint(3, addr(3), kLaunch + 20)};
    const auto tl = f.build();
    REQUIRE(tl.transfers.size() == 3);
    CHECK(tl.transfers[0].event.token_id == 1);
    CHECK(tl.transfers[1].event.token_id == 2);  // equal timestamps keep file order
    CHECK(tl.transfers[2].event.token_id == 3);
    CHECK(tl.transfers[0].kind == TransferKind::Mint);

    Fixture one;
    one.transfers = {mint(1, addr(1), kLaunch)};
    CHECK(one.build().transfers.size() == 1);

    Fixture mismatch = one;
    auto t = trade(1, addr(2), addr(1), 5, kLaunch + 1);
    t.project = addr(0xbad);
    mismatch.trades = {t};
    CHECK(code_of([&] { mismatch.build(); }) == ErrorCode::ProjectMismatch);

    Fixture empty;
    CHECK(code_of([&] { empty.build(); }) == ErrorCode::EmptyTimeline);

    Fixture early;
    early.transfers = {mint(1, addr(1), kLaunch - 1)};
    CHECK(code_of([&] { early.build(); }) == ErrorCode::MalformedEvent);
}

TEST_CASE("manifest loads the valid fixture project") {
    const auto manifest = ingest::load_manifest(std::filesystem::path(RUGSCOPE_FIXTURES) / "valid" / "manifest.json");
    const auto timelines = ingest::load_timelines(manifest);
    REQUIRE(timelines.size() == 1);
    const auto& tl = timelines[0];
    CHECK(tl.metadata.name == "Mushrooms Club");
    CHECK(tl.transfers.size() == 6);
    CHECK(tl.transfers[3].event.operator_address.has_value());
    CHECK(tl.transfers[2].event.token_id == 3);  // "0x3"
    CHECK(tl.transfers[5].event.value_wei == ~static_cast<Wei>(0));
    CHECK(tl.trades.size() == 2);
    CHECK(tl.trades[1].creator_fee_usd == 0.0);  // optional field defaults to zero
    CHECK(tl.social.size() == 2);
    CHECK(tl.withdrawals.size() == 1);
    CHECK(tl.direct_payments.size() == 1);
    CHECK(tl.uri_changes.size() == 1);
}

TEST_CASE("write_manifest keeps paths relative to the manifest directory") {
    const auto dir = std::filesystem::temp_directory_path() / "rugscope_manifest_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir / "p");
    ingest::Manifest m;
    m.base_dir = dir;
    m.projects.push_back({addr(1), "p/metadata.jsonl", "p/transfers.jsonl", std::nullopt, std::nullopt, std::nullopt,
                          std::nullopt, std::nullopt, std::nullopt});
    ingest::write_manifest(dir / "manifest.json", m);
    const auto back = ingest::load_manifest(dir / "manifest.json");
    REQUIRE(back.projects.size() == 1);
    CHECK(back.projects[0].metadata == std::filesystem::path("p/metadata.jsonl"));
    CHECK_FALSE(back.projects[0].trades.has_value());
    std::filesystem::remove_all(dir);
}
