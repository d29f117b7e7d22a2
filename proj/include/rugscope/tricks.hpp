#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rugscope/records.hpp"

namespace rugscope::tricks {

enum class TrickKind {
    // explicit: backdoors in the contract
    HiddenMint,
    UnapprovedTransfer,
    UriReplacement,
    // implicit: market manipulation
    MintFeeWithdraw,
    Counterfeit,
    WashTrading,
    MiddlemanReselling,
    BonusCreatorFee,
};

std::string_view to_string(TrickKind kind);
bool is_explicit(TrickKind kind);

struct HiddenMintEvidence {
    std::uint64_t circulating = 0;
    std::uint64_t declared = 0;
};

struct FlaggedTransfer {
    std::string tx_hash;
    TokenId token_id = 0;
    Address owner;
    Address initiator;
    Timestamp timestamp = 0;
};

struct UnapprovedTransferEvidence {
    std::vector<FlaggedTransfer> transfers;
};

struct UriReplacementEvidence {
    std::size_t replaced_tokens = 0;
    std::size_t replacements = 0;
    std::vector<Address> initiators;  // sorted, unique
};

struct MintFeeWithdrawEvidence {
    Wei total_withdrawn = 0;
    std::size_t withdrawal_count = 0;
    Wei mint_fees = 0;
};

struct NameMatch {
    std::string reference;
    double ratio = 0.0;
};

struct CounterfeitEvidence {
    std::string name;
    std::vector<NameMatch> identical;
    std::vector<NameMatch> high;
    std::vector<NameMatch> medium;
};

struct PairStat {
    Address a;  // a < b
    Address b;
    std::size_t count = 0;
    std::size_t a_to_b = 0;  // trades where a sold to b
    std::size_t b_to_a = 0;
    double volume_usd = 0.0;
};

struct WashTradingEvidence {
    std::vector<PairStat> pairs;
    std::size_t flagged_trades = 0;
};

struct MiddlemanEvidence {
    Address middleman;
    std::size_t mint_count = 0;
    Wei payment_total = 0;
    std::size_t payment_count = 0;
};

struct CreatorFeeEvidence {
    double total_usd = 0.0;
    std::size_t trade_count = 0;
};

using TrickEvidence = std::variant<HiddenMintEvidence,
                                   UnapprovedTransferEvidence,
                                   UriReplacementEvidence,
                                   MintFeeWithdrawEvidence,
                                   CounterfeitEvidence,
                                   WashTradingEvidence,
                                   MiddlemanEvidence,
                                   CreatorFeeEvidence>;

struct TrickFinding {
    TrickKind trick = TrickKind::HiddenMint;
    TrickEvidence evidence;
};

struct TrickReport {
    Address project;
    std::vector<TrickFinding> findings;
    bool explicit_any = false;
    bool implicit_any = false;
};

struct TrickConfig {
    std::size_t wash_threshold = 10;
    double ratio_high = 0.95;
    double ratio_medium = 0.90;
    /// Count creator fees only from OpenSea Wyvern trades.
    bool creator_fee_wyvern_only = false;
};

/// Owner -> operator authorizations replayed in time order.
class ApprovalGraph {
public:
    void add(const ApprovalEvent& event);
    bool is_authorized(const Address& owner, const Address& op, TokenId token, Timestamp at) const;
    std::size_t edge_count() const noexcept { return edges_.size(); }

private:
    struct Entry {
        ApprovalScope scope;
        bool granted = true;
        Timestamp timestamp = 0;
    };
    std::map<std::pair<Address, Address>, std::vector<Entry>> edges_;
};

/// Unordered address pair -> trade count and volume, keyed by (min, max).
using TradePairGraph = std::map<std::pair<Address, Address>, PairStat>;

/// Circulating supply (minted minus burned units) above the declared maximum.
/// Throws Error(NotApplicable) for ERC-1155 and Error(MissingSupply) without a declared supply.
std::optional<TrickFinding> detect_hidden_mint(const ProjectTimeline& timeline);

ApprovalGraph build_approval_graph(const std::vector<ApprovalEvent>& approvals);

/// Swaps moved by an operator that the owner had not authorized at that moment.
std::optional<TrickFinding> detect_unapproved_transfers(const ProjectTimeline& timeline, const ApprovalGraph& graph);

std::optional<TrickFinding> detect_uri_replacement(const ProjectTimeline& timeline);

/// Paid mints followed by any withdrawal of the collected funds.
std::optional<TrickFinding> detect_mint_fee_withdraw(const ProjectTimeline& timeline);

/// Throws Error(EmptyReferenceList).
std::optional<TrickFinding> detect_counterfeit(std::string_view name,
                                               const std::vector<std::string>& reference_names,
                                               const TrickConfig& config = {});

TradePairGraph build_trade_pair_graph(const std::vector<TradeRecord>& trades);

/// Pairs with more than `config.wash_threshold` trades between them.
std::optional<TrickFinding> detect_wash_trading(const std::vector<TradeRecord>& trades, const TrickConfig& config = {});

std::optional<TrickFinding> detect_middleman_reselling(const ProjectTimeline& timeline);

std::optional<TrickFinding> detect_creator_fee(const ProjectTimeline& timeline, const TrickConfig& config = {});

TrickReport analyze_tricks(const ProjectTimeline& timeline,
                           const std::vector<std::string>& reference_names,
                           const TrickConfig& config = {});

std::string report_to_json_line(const TrickReport& report);

}  // namespace rugscope::tricks
