#include "rugscope/tricks.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "rugscope/error.hpp"
#include "rugscope/levenshtein.hpp"
#include "rugscope/serialization.hpp"

namespace rugscope::tricks {

using nlohmann::json;

std::string_view to_string(TrickKind kind) {
    switch (kind) {
        case TrickKind::HiddenMint: return "hidden_mint";
        case TrickKind::UnapprovedTransfer: return "unapproved_transfer";
        case TrickKind::UriReplacement: return "uri_replacement";
        case TrickKind::MintFeeWithdraw: return "mint_fee_withdraw";
        case TrickKind::Counterfeit: return "counterfeit";
        case TrickKind::WashTrading: return "wash_trading";
        case TrickKind::MiddlemanReselling: return "middleman_reselling";
        case TrickKind::BonusCreatorFee: return "bonus_creator_fee";
    }
    return "?";
}

bool is_explicit(TrickKind kind) {
    return kind == TrickKind::HiddenMint || kind == TrickKind::UnapprovedTransfer || kind == TrickKind::UriReplacement;
}

std::optional<TrickFinding> detect_hidden_mint(const ProjectTimeline& timeline) {
    const auto& meta = timeline.metadata;
    if (meta.standard == TokenStandard::ERC1155)
        throw Error(ErrorCode::NotApplicable, "hidden mint check does not apply to ERC-1155 collections");
    if (!meta.declared_total_supply)
        throw Error(ErrorCode::MissingSupply, "project " + meta.project.to_string() + " declares no total supply");

    std::uint64_t minted = 0;
    std::uint64_t burned = 0;
    for (const auto& t : timeline.transfers) {
        if (t.kind == TransferKind::Mint) minted += t.event.quantity;
        if (t.kind == TransferKind::Burn) burned += t.event.quantity;
    }
    const std::uint64_t circulating = minted > burned ? minted - burned : 0;
    if (circulating <= *meta.declared_total_supply) return std::nullopt;
    return TrickFinding{TrickKind::HiddenMint, HiddenMintEvidence{circulating, *meta.declared_total_supply}};
}

void ApprovalGraph::add(const ApprovalEvent& event) {
    edges_[{event.owner, event.operator_address}].push_back({event.scope, event.granted, event.timestamp});
}

bool ApprovalGraph::is_authorized(const Address& owner, const Address& op, TokenId token, Timestamp at) const {
    auto it = edges_.find({owner, op});
    if (it == edges_.end()) return false;
    bool all = false;
    std::set<TokenId> tokens;
    for (const auto& e : it->second) {
        if (e.timestamp > at) continue;
        if (e.scope.is_all()) {
            all = e.granted;
        } else if (e.granted) {
            tokens.insert(*e.scope.token_id);
        } else {
            tokens.erase(*e.scope.token_id);
        }
    }
    return all || tokens.contains(token);
}

ApprovalGraph build_approval_graph(const std::vector<ApprovalEvent>& approvals) {
    // Entries are replayed in insertion order; stable-sort so equal timestamps keep file order.
    std::vector<const ApprovalEvent*> ordered;
    ordered.reserve(approvals.size());
    for (const auto& a : approvals) ordered.push_back(&a);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const ApprovalEvent* x, const ApprovalEvent* y) { return x->timestamp < y->timestamp; });
    ApprovalGraph graph;
    for (const auto* a : ordered) graph.add(*a);
    return graph;
}

std::optional<TrickFinding> detect_unapproved_transfers(const ProjectTimeline& timeline, const ApprovalGraph& graph) {
    UnapprovedTransferEvidence evidence;
    for (const auto& t : timeline.transfers) {
        if (t.kind != TransferKind::Swap) continue;
        const auto& e = t.event;
        if (!e.operator_address || *e.operator_address == e.from) continue;
        if (!graph.is_authorized(e.from, *e.operator_address, e.token_id, e.timestamp))
            evidence.transfers.push_back({e.tx_hash, e.token_id, e.from, *e.operator_address, e.timestamp});
    }
    if (evidence.transfers.empty()) return std::nullopt;
    return TrickFinding{TrickKind::UnapprovedTransfer, std::move(evidence)};
}

std::optional<TrickFinding> detect_uri_replacement(const ProjectTimeline& timeline) {
    std::map<TokenId, const std::string*> current;
    std::set<TokenId> replaced;
    std::set<Address> initiators;
    std::size_t replacements = 0;
    for (const auto& change : timeline.uri_changes) {
        auto& slot = current[change.token_id];
        if (slot && *slot == change.new_uri) continue;
        slot = &change.new_uri;
        ++replacements;
        replaced.insert(change.token_id);
        initiators.insert(change.initiator);
    }
    if (replacements == 0) return std::nullopt;
    return TrickFinding{TrickKind::UriReplacement,
                        UriReplacementEvidence{replaced.size(), replacements, {initiators.begin(), initiators.end()}}};
}

std::optional<TrickFinding> detect_mint_fee_withdraw(const ProjectTimeline& timeline) {
    Wei mint_fees = 0;
    for (const auto& t : timeline.transfers)
        if (t.kind == TransferKind::Mint) mint_fees += t.event.value_wei;
    if (mint_fees == 0 || timeline.withdrawals.empty()) return std::nullopt;
    MintFeeWithdrawEvidence evidence;
    evidence.mint_fees = mint_fees;
    evidence.withdrawal_count = timeline.withdrawals.size();
    for (const auto& w : timeline.withdrawals) evidence.total_withdrawn += w.amount_wei;
    return TrickFinding{TrickKind::MintFeeWithdraw, evidence};
}

namespace {

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<TrickFinding> detect_counterfeit(std::string_view name,
                                               const std::vector<std::string>& reference_names,
                                               const TrickConfig& config) {
    if (reference_names.empty()) throw Error(ErrorCode::EmptyReferenceList, "no reference names to compare against");
    CounterfeitEvidence evidence;
    const auto candidate = trim(name);
    evidence.name = std::string(candidate);
    for (const auto& ref : reference_names) {
        const auto reference = trim(ref);
        if (reference == candidate) {
            evidence.identical.push_back({std::string(reference), 1.0});
            continue;
        }
        const double ratio = levenshtein_ratio(candidate, reference);
        if (ratio >= config.ratio_high)
            evidence.high.push_back({std::string(reference), ratio});
        else if (ratio >= config.ratio_medium)
            evidence.medium.push_back({std::string(reference), ratio});
    }
    if (evidence.identical.empty() && evidence.high.empty() && evidence.medium.empty()) return std::nullopt;
    return TrickFinding{TrickKind::Counterfeit, std::move(evidence)};
}

TradePairGraph build_trade_pair_graph(const std::vector<TradeRecord>& trades) {
    TradePairGraph graph;
    for (const auto& t : trades) {
        const bool seller_first = t.seller < t.buyer;
        const Address& lo = seller_first ? t.seller : t.buyer;
        const Address& hi = seller_first ? t.buyer : t.seller;
        auto& stat = graph[{lo, hi}];
        stat.a = lo;
        stat.b = hi;
        ++stat.count;
        ++(seller_first ? stat.a_to_b : stat.b_to_a);
        stat.volume_usd += t.price_usd;
    }
    return graph;
}

std::optional<TrickFinding> detect_wash_trading(const std::vector<TradeRecord>& trades, const TrickConfig& config) {
    WashTradingEvidence evidence;
    for (const auto& [key, stat] : build_trade_pair_graph(trades)) {
        if (stat.count > config.wash_threshold) {
            evidence.pairs.push_back(stat);
            evidence.flagged_trades += stat.count;
        }
    }
    if (evidence.pairs.empty()) return std::nullopt;
    return TrickFinding{TrickKind::WashTrading, std::move(evidence)};
}

std::optional<TrickFinding> detect_middleman_reselling(const ProjectTimeline& timeline) {
    std::optional<Address> recipient;
    std::size_t mints = 0;
    for (const auto& t : timeline.transfers) {
        if (t.kind != TransferKind::Mint) continue;
        if (recipient && *recipient != t.event.to) return std::nullopt;
        recipient = t.event.to;
        ++mints;
    }
    if (!recipient) return std::nullopt;
    MiddlemanEvidence evidence;
    evidence.middleman = *recipient;
    evidence.mint_count = mints;
    for (const auto& p : timeline.direct_payments) {
        if (p.from == *recipient || p.from == timeline.metadata.creator) continue;
        evidence.payment_total += p.amount_wei;
        ++evidence.payment_count;
    }
    if (evidence.payment_count == 0) return std::nullopt;
    return TrickFinding{TrickKind::MiddlemanReselling, evidence};
}

std::optional<TrickFinding> detect_creator_fee(const ProjectTimeline& timeline, const TrickConfig& config) {
    CreatorFeeEvidence evidence;
    for (const auto& t : timeline.trades) {
        if (config.creator_fee_wyvern_only && t.market != Market::OpenSeaWyvern) continue;
        if (t.creator_fee_usd > 0.0) {
            evidence.total_usd += t.creator_fee_usd;
            ++evidence.trade_count;
        }
    }
    if (evidence.total_usd <= 0.0) return std::nullopt;
    return TrickFinding{TrickKind::BonusCreatorFee, evidence};
}

TrickReport analyze_tricks(const ProjectTimeline& timeline,
                           const std::vector<std::string>& reference_names,
                           const TrickConfig& config) {
    TrickReport report;
    report.project = timeline.project();
    auto add = [&](std::optional<TrickFinding> f) {
        if (f) report.findings.push_back(std::move(*f));
    };
    try {
        add(detect_hidden_mint(timeline));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotApplicable && e.code() != ErrorCode::MissingSupply) throw;
    }
    add(detect_unapproved_transfers(timeline, build_approval_graph(timeline.approvals)));
    add(detect_uri_replacement(timeline));
    add(detect_mint_fee_withdraw(timeline));
    if (!reference_names.empty()) add(detect_counterfeit(timeline.metadata.name, reference_names, config));
    add(detect_wash_trading(timeline.trades, config));
    add(detect_middleman_reselling(timeline));
    add(detect_creator_fee(timeline, config));
    for (const auto& f : report.findings) {
        if (is_explicit(f.trick))
            report.explicit_any = true;
        else
            report.implicit_any = true;
    }
    return report;
}

// ---------------------------------------------------------------------------

namespace {

json matches_to_json(const std::vector<NameMatch>& ms) {
    json out = json::array();
    for (const auto& m : ms) out.push_back({{"reference", m.reference}, {"ratio", m.ratio}});
    return out;
}

struct EvidenceToJson {
    json operator()(const HiddenMintEvidence& e) const {
        return {{"circulating", e.circulating}, {"declared", e.declared}};
    }
    json operator()(const UnapprovedTransferEvidence& e) const {
        json list = json::array();
        for (const auto& t : e.transfers)
            list.push_back({{"tx_hash", t.tx_hash},
                            {"token_id", t.token_id},
                            {"owner", t.owner},
                            {"initiator", t.initiator},
                            {"timestamp", t.timestamp}});
        return {{"count", e.transfers.size()}, {"transfers", std::move(list)}};
    }
    json operator()(const UriReplacementEvidence& e) const {
        return {{"replaced_tokens", e.replaced_tokens}, {"replacements", e.replacements}, {"initiators", e.initiators}};
    }
    json operator()(const MintFeeWithdrawEvidence& e) const {
        return {{"total_withdrawn_wei", wei_to_json(e.total_withdrawn)},
                {"withdrawal_count", e.withdrawal_count},
                {"mint_fees_wei", wei_to_json(e.mint_fees)}};
    }
    json operator()(const CounterfeitEvidence& e) const {
        return {{"name", e.name},
                {"identical", matches_to_json(e.identical)},
                {"high", matches_to_json(e.high)},
                {"medium", matches_to_json(e.medium)}};
    }
    json operator()(const WashTradingEvidence& e) const {
        json pairs = json::array();
        for (const auto& p : e.pairs)
            pairs.push_back({{"a", p.a},
                             {"b", p.b},
                             {"count", p.count},
                             {"a_to_b", p.a_to_b},
                             {"b_to_a", p.b_to_a},
                             {"volume_usd", p.volume_usd}});
        return {{"pair_count", e.pairs.size()}, {"flagged_trades", e.flagged_trades}, {"pairs", std::move(pairs)}};
    }
    json operator()(const MiddlemanEvidence& e) const {
        return {{"middleman", e.middleman},
                {"mint_count", e.mint_count},
                {"payment_total_wei", wei_to_json(e.payment_total)},
                {"payment_count", e.payment_count}};
    }
    json operator()(const CreatorFeeEvidence& e) const {
        return {{"total_usd", e.total_usd}, {"trade_count", e.trade_count}};
    }
};

}  // namespace

std::string report_to_json_line(const TrickReport& report) {
    json findings = json::array();
    for (const auto& f : report.findings)
        findings.push_back({{"trick", std::string(to_string(f.trick))},
                            {"category", is_explicit(f.trick) ? "explicit" : "implicit"},
                            {"evidence", std::visit(EvidenceToJson{}, f.evidence)}});
    json j{{"project", report.project},
           {"explicit_any", report.explicit_any},
           {"implicit_any", report.implicit_any},
           {"findings", std::move(findings)}};
    return j.dump();
}

}  // namespace rugscope::tricks
