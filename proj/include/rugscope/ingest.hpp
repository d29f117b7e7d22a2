#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rugscope/records.hpp"

namespace rugscope::ingest {

/// Mint iff `from` is the null address; Burn iff `to` is null or 0x...dEaD; Swap otherwise.
/// Throws Error(MalformedEvent) when from == to or for a null -> null/dead transfer.
TransferKind classify_transfer(const TransferEvent& event);

// JSON-Lines parsers. Blank lines are skipped but still counted for line numbers.
// The first malformed line raises ParseError; unreadable files raise Error(Io).
std::vector<TransferEvent> parse_transfers(std::istream& in);
std::vector<TradeRecord> parse_trades(std::istream& in);
std::vector<ApprovalEvent> parse_approvals(std::istream& in);
std::vector<SocialSnapshot> parse_social(std::istream& in);
std::vector<ProjectMetadata> parse_metadata(std::istream& in);
std::vector<UriChange> parse_uri_changes(std::istream& in);
std::vector<Withdrawal> parse_withdrawals(std::istream& in);
std::vector<DirectPayment> parse_direct_payments(std::istream& in);

std::vector<TransferEvent> parse_transfers(const std::filesystem::path& path);
std::vector<TradeRecord> parse_trades(const std::filesystem::path& path);
std::vector<ApprovalEvent> parse_approvals(const std::filesystem::path& path);
std::vector<SocialSnapshot> parse_social(const std::filesystem::path& path);
std::vector<ProjectMetadata> parse_metadata(const std::filesystem::path& path);
std::vector<UriChange> parse_uri_changes(const std::filesystem::path& path);
std::vector<Withdrawal> parse_withdrawals(const std::filesystem::path& path);
std::vector<DirectPayment> parse_direct_payments(const std::filesystem::path& path);

/// Canonical single-line encoding (no trailing newline).
std::string serialize(const TransferEvent& r);
std::string serialize(const TradeRecord& r);
std::string serialize(const ApprovalEvent& r);
std::string serialize(const SocialSnapshot& r);
std::string serialize(const ProjectMetadata& r);
std::string serialize(const UriChange& r);
std::string serialize(const Withdrawal& r);
std::string serialize(const DirectPayment& r);

template <typename Record>
std::string serialize_lines(const std::vector<Record>& records) {
    std::string out;
    for (const auto& r : records) {
        out += serialize(r);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Validates that every record belongs to metadata.project, classifies transfers and
/// stable-sorts every list by timestamp.
/// Errors: ProjectMismatch, EmptyTimeline (no transfers), MalformedEvent.
ProjectTimeline build_timeline(ProjectMetadata metadata,
                               std::vector<TransferEvent> transfers,
                               std::vector<TradeRecord> trades = {},
                               std::vector<ApprovalEvent> approvals = {},
                               std::vector<SocialSnapshot> social = {},
                               std::vector<UriChange> uri_changes = {},
                               std::vector<Withdrawal> withdrawals = {},
                               std::vector<DirectPayment> direct_payments = {});

/// Per-project file paths. Only metadata and transfers are required.
struct ManifestEntry {
    Address project;
    std::filesystem::path metadata;
    std::filesystem::path transfers;
    std::optional<std::filesystem::path> trades;
    std::optional<std::filesystem::path> approvals;
    std::optional<std::filesystem::path> social;
    std::optional<std::filesystem::path> uri_changes;
    std::optional<std::filesystem::path> withdrawals;
    std::optional<std::filesystem::path> direct_payments;
};

/// Relative paths inside a manifest resolve against the manifest's own directory.
struct Manifest {
    std::filesystem::path base_dir;
    std::vector<ManifestEntry> projects;
};

Manifest load_manifest(const std::filesystem::path& path);
/// Paths are written relative to `path`'s directory when they live beneath it.
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

ProjectTimeline load_timeline(const Manifest& manifest, const ManifestEntry& entry);
std::vector<ProjectTimeline> load_timelines(const Manifest& manifest);

}  // namespace rugscope::ingest
