#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rugscope/records.hpp"

namespace rugscope::synth {

enum class Archetype {
    BenignStable,
    BenignVolatile,
    PumpAndDump,
    MintFeeWithdrawScam,
    WashTradingScam,
    MiddlemanScam,
    HiddenMintScam,
    CounterfeitScam,
};

inline constexpr std::array<Archetype, 8> kAllArchetypes{
    Archetype::BenignStable,    Archetype::BenignVolatile, Archetype::PumpAndDump,    Archetype::MintFeeWithdrawScam,
    Archetype::WashTradingScam, Archetype::MiddlemanScam,  Archetype::HiddenMintScam, Archetype::CounterfeitScam,
};

std::string_view to_string(Archetype a);
std::optional<Archetype> parse_archetype(std::string_view s);
bool is_scam(Archetype a);

using Counts = std::map<Archetype, int>;

/// "PumpAndDump=3,BenignStable=10". Throws Error(InvalidCounts).
Counts parse_counts(std::string_view text);

struct GeneratedProject {
    ProjectTimeline timeline;
    Archetype archetype = Archetype::BenignStable;
    std::optional<Timestamp> t_rp;  // absent for benign projects
};

struct Scenario {
    std::uint64_t seed = 0;
    int horizon_days = 0;
    Timestamp start = 0;
    Timestamp collection_end = 0;
    std::vector<GeneratedProject> projects;
    std::vector<std::string> reference_names;
};

struct GeneratorOptions {
    int horizon_days = 180;
    Timestamp start = 1640995200;  // 2022-01-01T00:00:00Z
    /// Restrict scam launches to [first, second] days after `start`.
    std::optional<std::pair<int, int>> scam_launch_days;
    /// Restrict benign launches to [first, second] days after `start`.
    std::optional<std::pair<int, int>> benign_launch_days;
};

/// Well-known collection names that counterfeit archetypes imitate.
const std::vector<std::string>& famous_names();

/// Deterministic in (seed, counts, options). Throws Error(InvalidCounts) for negative or all-zero
/// counts, Error(InvalidArgument) for a horizon under 90 days or launch ranges that do not fit.
Scenario generate(std::uint64_t seed, const Counts& counts, const GeneratorOptions& options);
Scenario generate(std::uint64_t seed, const Counts& counts, int horizon_days = 180);

/// Canonical text of every record and label, for byte-level reproducibility checks.
std::string serialize(const Scenario& scenario);

struct Label {
    Address project;
    Archetype archetype = Archetype::BenignStable;
    std::optional<Timestamp> t_rp;
};

/// Writes manifest.json, projects/<address>/<type>.jsonl, labels.csv, reference_names.txt
/// and scenario.json under `dir`.
void write_scenario(const Scenario& scenario, const std::filesystem::path& dir);

std::vector<Label> read_labels(const std::filesystem::path& path);
std::vector<std::string> read_reference_names(const std::filesystem::path& path);

}  // namespace rugscope::synth
