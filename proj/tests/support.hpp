#pragma once

#include <string>
#include <vector>

#include "rugscope/ingest.hpp"
#include "rugscope/records.hpp"

namespace testing {

using namespace rugscope;

inline Address addr(unsigned n) {
    Address::Bytes b{};
    b[0] = 0xa0;
    b[18] = static_cast<std::uint8_t>(n >> 8);
    b[19] = static_cast<std::uint8_t>(n);
    return Address(b);
}

inline const Address kProject = addr(0xf00);
inline const Address kCreator = addr(0xc00);
inline constexpr Timestamp kLaunch = 1'650'000'000;
inline constexpr Timestamp kDay = 86'400;

inline ProjectMetadata metadata(std::optional<std::uint64_t> supply = std::nullopt,
                                TokenStandard standard = TokenStandard::ERC721) {
    return {kProject, "Fixture", kCreator, kLaunch, supply, standard};
}

inline TransferEvent transfer(TokenId id, Address from, Address to, Timestamp t, Wei value = 0,
                              std::optional<Address> op = std::nullopt) {
    return {kProject, id, from, to, 1, value, t, "0x" + std::to_string(t), TokenStandard::ERC721, op};
}

inline TransferEvent mint(TokenId id, Address to, Timestamp t, Wei value = 0) {
    return transfer(id, Address::null(), to, t, value);
}

inline TradeRecord trade(TokenId id, Address buyer, Address seller, double price, Timestamp t, double fee = 0.0) {
    return {kProject, id, buyer, seller, price, t, Market::OpenSeaSeaport, fee};
}

/// Small mutable bundle that builds a validated timeline on demand.
struct Fixture {
    ProjectMetadata meta = metadata();
    std::vector<TransferEvent> transfers;
    std::vector<TradeRecord> trades;
    std::vector<ApprovalEvent> approvals;
    std::vector<SocialSnapshot> social;
    std::vector<UriChange> uri_changes;
    std::vector<Withdrawal> withdrawals;
    std::vector<DirectPayment> payments;

    ProjectTimeline build() const {
        return ingest::build_timeline(meta, transfers, trades, approvals, social, uri_changes, withdrawals, payments);
    }
};

}  // namespace testing
