#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rugscope/address.hpp"

namespace rugscope {

/// Unix seconds, UTC.
using Timestamp = std::int64_t;
/// Native-currency amount. Real withdrawals exceed 2^64 wei, hence 128 bits.
using Wei = unsigned __int128;
using TokenId = std::uint64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;
inline constexpr Timestamp kMonthSeconds = 30 * kSecondsPerDay;
inline constexpr Wei kWeiPerEther = static_cast<Wei>(1'000'000'000'000'000'000ULL);

std::string wei_to_string(Wei value);
std::optional<Wei> parse_wei(std::string_view decimal);
double wei_to_ether(Wei value);

enum class TokenStandard { ERC721, ERC1155 };
enum class TransferKind { Mint, Burn, Swap };
enum class Market { OpenSeaSeaport, OpenSeaWyvern, LooksRare, X2Y2, Other };
enum class SocialPlatform { Twitter, Discord, Instagram, Website };
enum class SocialStatus { Active, Suspended, Deleted, InviteExpired, ServerDown };

std::string_view to_string(TokenStandard v);
std::string_view to_string(TransferKind v);
std::string_view to_string(Market v);
std::string_view to_string(SocialPlatform v);
std::string_view to_string(SocialStatus v);

std::optional<TokenStandard> parse_token_standard(std::string_view s);
std::optional<Market> parse_market(std::string_view s);
std::optional<SocialPlatform> parse_social_platform(std::string_view s);
std::optional<SocialStatus> parse_social_status(std::string_view s);

struct TransferEvent {
    Address project;
    TokenId token_id = 0;
    Address from;
    Address to;
    std::uint64_t quantity = 1;
    Wei value_wei = 0;
    Timestamp timestamp = 0;
    std::string tx_hash;
    TokenStandard standard = TokenStandard::ERC721;
    /// Transaction initiator when it differs from `from` (transferFrom by an operator).
    std::optional<Address> operator_address;

    bool operator==(const TransferEvent&) const = default;
};

struct TradeRecord {
    Address project;
    TokenId token_id = 0;
    Address buyer;
    Address seller;
    double price_usd = 0.0;
    Timestamp timestamp = 0;
    Market market = Market::Other;
    double creator_fee_usd = 0.0;

    bool operator==(const TradeRecord&) const = default;
};

struct ApprovalScope {
    /// nullopt means approval for all tokens (setApprovalForAll).
    std::optional<TokenId> token_id;

    bool is_all() const noexcept { return !token_id.has_value(); }
    static ApprovalScope all() { return {}; }
    static ApprovalScope single(TokenId id) { return {id}; }

    bool operator==(const ApprovalScope&) const = default;
};

struct ApprovalEvent {
    Address project;
    Address owner;
    Address operator_address;
    ApprovalScope scope;
    bool granted = true;
    Timestamp timestamp = 0;

    bool operator==(const ApprovalEvent&) const = default;
};

struct SocialSnapshot {
    Address project;
    SocialPlatform platform = SocialPlatform::Twitter;
    SocialStatus status = SocialStatus::Active;
    std::optional<Timestamp> last_post_timestamp;
    Timestamp snapshot_timestamp = 0;

    bool operator==(const SocialSnapshot&) const = default;
};

struct ProjectMetadata {
    Address project;
    std::string name;
    Address creator;
    Timestamp launch_timestamp = 0;
    std::optional<std::uint64_t> declared_total_supply;
    TokenStandard standard = TokenStandard::ERC721;

    bool operator==(const ProjectMetadata&) const = default;
};

struct UriChange {
    Address project;
    TokenId token_id = 0;
    std::string new_uri;
    Timestamp timestamp = 0;
    Address initiator;

    bool operator==(const UriChange&) const = default;
};

struct Withdrawal {
    Address project;
    Wei amount_wei = 0;
    Address to;
    Timestamp timestamp = 0;

    bool operator==(const Withdrawal&) const = default;
};

struct DirectPayment {
    Address project;
    Wei amount_wei = 0;
    Address from;
    Timestamp timestamp = 0;

    bool operator==(const DirectPayment&) const = default;
};

struct ClassifiedTransfer {
    TransferEvent event;
    TransferKind kind = TransferKind::Swap;
};

/// One project's complete activity, each list sorted by timestamp (stable).
/// Immutable once built; see ingest::build_timeline.
struct ProjectTimeline {
    ProjectMetadata metadata;
    std::vector<ClassifiedTransfer> transfers;
    std::vector<TradeRecord> trades;
    std::vector<ApprovalEvent> approvals;
    std::vector<UriChange> uri_changes;
    std::vector<Withdrawal> withdrawals;
    std::vector<DirectPayment> direct_payments;
    std::vector<SocialSnapshot> social;

    const Address& project() const noexcept { return metadata.project; }
};

}  // namespace rugscope
