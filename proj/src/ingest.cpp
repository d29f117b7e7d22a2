#include "rugscope/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "rugscope/error.hpp"
#include "rugscope/serialization.hpp"

namespace rugscope::ingest {

using nlohmann::json;
namespace fs = std::filesystem;

TransferKind classify_transfer(const TransferEvent& event) {
    if (event.from == event.to)
        throw Error(ErrorCode::MalformedEvent, "transfer " + event.tx_hash + " has from == to");
    if (event.from.is_null()) {
        if (event.to.is_burn_sink())
            throw Error(ErrorCode::MalformedEvent, "transfer " + event.tx_hash + " mints straight into a burn address");
        return TransferKind::Mint;
    }
    if (event.to.is_burn_sink()) return TransferKind::Burn;
    return TransferKind::Swap;
}

namespace {

template <typename Record>
std::vector<Record> parse_lines(std::istream& in) {
    std::vector<Record> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            out.push_back(json::parse(line).get<Record>());
        } catch (const json::exception& e) {
            throw ParseError(line_no, e.what());
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (in.bad()) throw Error(ErrorCode::Io, "read failure");
    return out;
}

template <typename Record>
std::vector<Record> parse_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    try {
        return parse_lines<Record>(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.reason());
    }
}

template <typename Record>
std::string dump(const Record& r) {
    return json(r).dump();
}

template <typename Record>
void stable_sort_by_time(std::vector<Record>& v) {
    std::stable_sort(v.begin(), v.end(), [](const Record& a, const Record& b) { return a.timestamp < b.timestamp; });
}

template <typename Record>
void check_project(const std::vector<Record>& records, const Address& project, const char* what) {
    for (const auto& r : records) {
        if (r.project != project)
            throw Error(ErrorCode::ProjectMismatch, std::string(what) + " record for " + r.project.to_string() +
                                                        " in timeline of " + project.to_string());
    }
}

template <typename Record>
void check_not_before_launch(const std::vector<Record>& records, Timestamp launch, const char* what) {
    for (const auto& r : records) {
        if (r.timestamp < launch)
            throw Error(ErrorCode::MalformedEvent,
                        std::string(what) + " at " + std::to_string(r.timestamp) + " precedes project launch");
    }
}

}  // namespace

std::vector<TransferEvent> parse_transfers(std::istream& in) { return parse_lines<TransferEvent>(in); }
std::vector<TradeRecord> parse_trades(std::istream& in) { return parse_lines<TradeRecord>(in); }
std::vector<ApprovalEvent> parse_approvals(std::istream& in) { return parse_lines<ApprovalEvent>(in); }
std::vector<SocialSnapshot> parse_social(std::istream& in) { return parse_lines<SocialSnapshot>(in); }
std::vector<ProjectMetadata> parse_metadata(std::istream& in) { return parse_lines<ProjectMetadata>(in); }
std::vector<UriChange> parse_uri_changes(std::istream& in) { return parse_lines<UriChange>(in); }
std::vector<Withdrawal> parse_withdrawals(std::istream& in) { return parse_lines<Withdrawal>(in); }
std::vector<DirectPayment> parse_direct_payments(std::istream& in) { return parse_lines<DirectPayment>(in); }

std::vector<TransferEvent> parse_transfers(const fs::path& p) { return parse_file<TransferEvent>(p); }
std::vector<TradeRecord> parse_trades(const fs::path& p) { return parse_file<TradeRecord>(p); }
std::vector<ApprovalEvent> parse_approvals(const fs::path& p) { return parse_file<ApprovalEvent>(p); }
std::vector<SocialSnapshot> parse_social(const fs::path& p) { return parse_file<SocialSnapshot>(p); }
std::vector<ProjectMetadata> parse_metadata(const fs::path& p) { return parse_file<ProjectMetadata>(p); }
std::vector<UriChange> parse_uri_changes(const fs::path& p) { return parse_file<UriChange>(p); }
std::vector<Withdrawal> parse_withdrawals(const fs::path& p) { return parse_file<Withdrawal>(p); }
std::vector<DirectPayment> parse_direct_payments(const fs::path& p) { return parse_file<DirectPayment>(p); }

std::string serialize(const TransferEvent& r) { return dump(r); }
std::string serialize(const TradeRecord& r) { return dump(r); }
std::string serialize(const ApprovalEvent& r) { return dump(r); }
std::string serialize(const SocialSnapshot& r) { return dump(r); }
std::string serialize(const ProjectMetadata& r) { return dump(r); }
std::string serialize(const UriChange& r) { return dump(r); }
std::string serialize(const Withdrawal& r) { return dump(r); }
std::string serialize(const DirectPayment& r) { return dump(r); }

void write_text_file(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << contents;
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

ProjectTimeline build_timeline(ProjectMetadata metadata,
                               std::vector<TransferEvent> transfers,
                               std::vector<TradeRecord> trades,
                               std::vector<ApprovalEvent> approvals,
                               std::vector<SocialSnapshot> social,
                               std::vector<UriChange> uri_changes,
                               std::vector<Withdrawal> withdrawals,
                               std::vector<DirectPayment> direct_payments) {
    const Address project = metadata.project;
    check_project(transfers, project, "transfer");
    check_project(trades, project, "trade");
    check_project(approvals, project, "approval");
    check_project(social, project, "social");
    check_project(uri_changes, project, "uri_change");
    check_project(withdrawals, project, "withdrawal");
    check_project(direct_payments, project, "direct_payment");
    if (transfers.empty())
        throw Error(ErrorCode::EmptyTimeline, "project " + project.to_string() + " has no transfer events");

    const Timestamp launch = metadata.launch_timestamp;
    check_not_before_launch(transfers, launch, "transfer");
    check_not_before_launch(trades, launch, "trade");
    check_not_before_launch(approvals, launch, "approval");
    check_not_before_launch(uri_changes, launch, "uri_change");
    check_not_before_launch(withdrawals, launch, "withdrawal");
    check_not_before_launch(direct_payments, launch, "direct_payment");

    stable_sort_by_time(transfers);
    stable_sort_by_time(trades);
    stable_sort_by_time(approvals);
    stable_sort_by_time(uri_changes);
    stable_sort_by_time(withdrawals);
    stable_sort_by_time(direct_payments);
    std::stable_sort(social.begin(), social.end(), [](const SocialSnapshot& a, const SocialSnapshot& b) {
        return a.snapshot_timestamp < b.snapshot_timestamp;
    });

    ProjectTimeline tl;
    tl.metadata = std::move(metadata);
    tl.transfers.reserve(transfers.size());
    for (auto& e : transfers) {
        const auto kind = classify_transfer(e);
        tl.transfers.push_back({std::move(e), kind});
    }
    tl.trades = std::move(trades);
    tl.approvals = std::move(approvals);
    tl.uri_changes = std::move(uri_changes);
    tl.withdrawals = std::move(withdrawals);
    tl.direct_payments = std::move(direct_payments);
    tl.social = std::move(social);
    return tl;
}

// ---------------------------------------------------------------------------
// Manifest
//
// {"version": 1, "projects": {"0x..": {"metadata": "a/metadata.jsonl", "transfers": "a/transfers.jsonl", ...}}}

namespace {

constexpr int kManifestVersion = 1;

fs::path relative_if_inside(const fs::path& p, const fs::path& base) {
    const auto abs = fs::absolute(p).lexically_normal();
    auto rel = abs.lexically_relative(fs::absolute(base).lexically_normal());
    if (rel.empty() || *rel.begin() == "..") return abs;
    return rel;
}

std::optional<fs::path> optional_path(const json& entry, const char* key) {
    auto it = entry.find(key);
    if (it == entry.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw Error(ErrorCode::InvalidArgument, std::string("manifest field '") + key + "' must be a path");
    return fs::path(it->get<std::string>());
}

fs::path resolve(const Manifest& m, const fs::path& p) { return p.is_absolute() ? p : m.base_dir / p; }

}  // namespace

Manifest load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open manifest " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, "manifest " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("projects") || !doc["projects"].is_object())
        throw Error(ErrorCode::InvalidArgument, "manifest " + path.string() + " lacks a 'projects' object");
    if (doc.value("version", kManifestVersion) != kManifestVersion)
        throw Error(ErrorCode::InvalidArgument, "unsupported manifest version");

    Manifest m;
    m.base_dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    for (const auto& [key, entry] : doc["projects"].items()) {
        ManifestEntry e;
        e.project = Address::from_hex(key);
        auto metadata = optional_path(entry, "metadata");
        auto transfers = optional_path(entry, "transfers");
        if (!metadata || !transfers)
            throw Error(ErrorCode::InvalidArgument, "manifest entry " + key + " needs metadata and transfers");
        e.metadata = *metadata;
        e.transfers = *transfers;
        e.trades = optional_path(entry, "trades");
        e.approvals = optional_path(entry, "approvals");
        e.social = optional_path(entry, "social");
        e.uri_changes = optional_path(entry, "uri_changes");
        e.withdrawals = optional_path(entry, "withdrawals");
        e.direct_payments = optional_path(entry, "direct_payments");
        m.projects.push_back(std::move(e));
    }
    return m;
}

void write_manifest(const fs::path& path, const Manifest& manifest) {
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    json projects = json::object();
    for (const auto& e : manifest.projects) {
        json entry;
        auto put = [&](const char* key, const fs::path& p) {
            entry[key] = relative_if_inside(resolve(manifest, p), base).generic_string();
        };
        put("metadata", e.metadata);
        put("transfers", e.transfers);
        if (e.trades) put("trades", *e.trades);
        if (e.approvals) put("approvals", *e.approvals);
        if (e.social) put("social", *e.social);
        if (e.uri_changes) put("uri_changes", *e.uri_changes);
        if (e.withdrawals) put("withdrawals", *e.withdrawals);
        if (e.direct_payments) put("direct_payments", *e.direct_payments);
        projects[e.project.to_string()] = std::move(entry);
    }
    json doc{{"version", kManifestVersion}, {"projects", std::move(projects)}};
    write_text_file(path, doc.dump(2) + "\n");
}

ProjectTimeline load_timeline(const Manifest& manifest, const ManifestEntry& entry) {
    auto metadata = parse_metadata(resolve(manifest, entry.metadata));
    if (metadata.size() != 1)
        throw Error(ErrorCode::InvalidArgument,
                    "metadata file for " + entry.project.to_string() + " must hold exactly one record");
    if (metadata.front().project != entry.project)
        throw Error(ErrorCode::ProjectMismatch, "metadata does not describe " + entry.project.to_string());

    auto opt = [&](const std::optional<fs::path>& p, auto parser) {
        using Vec = decltype(parser(fs::path{}));
        return p ? parser(resolve(manifest, *p)) : Vec{};
    };
    return build_timeline(std::move(metadata.front()),
                          parse_transfers(resolve(manifest, entry.transfers)),
                          opt(entry.trades, [](const fs::path& p) { return parse_trades(p); }),
                          opt(entry.approvals, [](const fs::path& p) { return parse_approvals(p); }),
                          opt(entry.social, [](const fs::path& p) { return parse_social(p); }),
                          opt(entry.uri_changes, [](const fs::path& p) { return parse_uri_changes(p); }),
                          opt(entry.withdrawals, [](const fs::path& p) { return parse_withdrawals(p); }),
                          opt(entry.direct_payments, [](const fs::path& p) { return parse_direct_payments(p); }));
}

std::vector<ProjectTimeline> load_timelines(const Manifest& manifest) {
    std::vector<ProjectTimeline> out;
    out.reserve(manifest.projects.size());
    for (const auto& e : manifest.projects) out.push_back(load_timeline(manifest, e));
    return out;
}

}  // namespace rugscope::ingest
