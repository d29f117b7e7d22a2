#include "rugscope/records.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <utility>

#include "rugscope/error.hpp"

namespace rugscope {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Parse: return "ParseError";
        case ErrorCode::Io: return "IoError";
        case ErrorCode::MalformedEvent: return "MalformedEvent";
        case ErrorCode::ProjectMismatch: return "ProjectMismatch";
        case ErrorCode::EmptyTimeline: return "EmptyTimeline";
        case ErrorCode::EmptySequence: return "EmptySequence";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::NoMint: return "NoMint";
        case ErrorCode::TooYoung: return "TooYoung";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::MissingSupply: return "MissingSupply";
        case ErrorCode::EmptyReferenceList: return "EmptyReferenceList";
        case ErrorCode::CutoffBeforeLaunch: return "CutoffBeforeLaunch";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::FoldTooSmall: return "FoldTooSmall";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::StateCorrupt: return "StateCorrupt";
        case ErrorCode::InvalidCounts: return "InvalidCounts";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

// ---------------------------------------------------------------------------
// Address

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

constexpr Address::Bytes make_dead() {
    Address::Bytes b{};
    b[18] = 0xde;
    b[19] = 0xad;
    return b;
}

}  // namespace

std::optional<Address> Address::parse(std::string_view text) {
    if (text.size() != 42 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) return std::nullopt;
    Bytes bytes{};
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const int hi = hex_value(text[2 + 2 * i]);
        const int lo = hex_value(text[3 + 2 * i]);
        if (hi < 0 || lo < 0) return std::nullopt;
        bytes[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return Address(bytes);
}

Address Address::from_hex(std::string_view text) {
    auto parsed = parse(text);
    if (!parsed) throw Error(ErrorCode::InvalidArgument, "invalid address '" + std::string(text) + "'");
    return *parsed;
}

std::string Address::to_string() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out = "0x";
    out.reserve(42);
    for (auto b : bytes_) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xf]);
    }
    return out;
}

bool Address::is_null() const noexcept { return *this == null(); }

bool Address::is_burn_sink() const noexcept { return is_null() || *this == dead(); }

const Address& Address::null() {
    static const Address a{};
    return a;
}

const Address& Address::dead() {
    static const Address a{make_dead()};
    return a;
}

std::size_t AddressHash::operator()(const Address& a) const noexcept {
    // FNV-1a
    std::uint64_t h = 1469598103934665603ULL;
    for (auto b : a.bytes()) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Wei

std::string wei_to_string(Wei value) {
    if (value == 0) return "0";
    std::string digits;
    while (value > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

std::optional<Wei> parse_wei(std::string_view decimal) {
    if (decimal.empty() || decimal.size() > 39) return std::nullopt;
    constexpr Wei kMax = ~static_cast<Wei>(0);
    Wei value = 0;
    for (char c : decimal) {
        if (c < '0' || c > '9') return std::nullopt;
        const auto digit = static_cast<Wei>(c - '0');
        if (value > (kMax - digit) / 10) return std::nullopt;
        value = value * 10 + digit;
    }
    return value;
}

double wei_to_ether(Wei value) {
    const Wei whole = value / kWeiPerEther;
    const Wei frac = value % kWeiPerEther;
    return static_cast<double>(whole) + static_cast<double>(frac) / 1e18;
}

// ---------------------------------------------------------------------------
// Enum names

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s) {
    for (const auto& [value, name] : table)
        if (name == s) return value;
    return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E v) {
    for (const auto& [value, name] : table)
        if (value == v) return name;
    return "?";
}

constexpr std::array<std::pair<TokenStandard, std::string_view>, 2> kStandards{{
    {TokenStandard::ERC721, "erc721"},
    {TokenStandard::ERC1155, "erc1155"},
}};

constexpr std::array<std::pair<TransferKind, std::string_view>, 3> kKinds{{
    {TransferKind::Mint, "mint"},
    {TransferKind::Burn, "burn"},
    {TransferKind::Swap, "swap"},
}};

constexpr std::array<std::pair<Market, std::string_view>, 5> kMarkets{{
    {Market::OpenSeaSeaport, "opensea_seaport"},
    {Market::OpenSeaWyvern, "opensea_wyvern"},
    {Market::LooksRare, "looksrare"},
    {Market::X2Y2, "x2y2"},
    {Market::Other, "other"},
}};

constexpr std::array<std::pair<SocialPlatform, std::string_view>, 4> kPlatforms{{
    {SocialPlatform::Twitter, "twitter"},
    {SocialPlatform::Discord, "discord"},
    {SocialPlatform::Instagram, "instagram"},
    {SocialPlatform::Website, "website"},
}};

constexpr std::array<std::pair<SocialStatus, std::string_view>, 5> kStatuses{{
    {SocialStatus::Active, "active"},
    {SocialStatus::Suspended, "suspended"},
    {SocialStatus::Deleted, "deleted"},
    {SocialStatus::InviteExpired, "invite_expired"},
    {SocialStatus::ServerDown, "server_down"},
}};

}  // namespace

std::string_view to_string(TokenStandard v) { return name_of(kStandards, v); }
std::string_view to_string(TransferKind v) { return name_of(kKinds, v); }
std::string_view to_string(Market v) { return name_of(kMarkets, v); }
std::string_view to_string(SocialPlatform v) { return name_of(kPlatforms, v); }
std::string_view to_string(SocialStatus v) { return name_of(kStatuses, v); }

std::optional<TokenStandard> parse_token_standard(std::string_view s) { return lookup(kStandards, s); }
std::optional<Market> parse_market(std::string_view s) { return lookup(kMarkets, s); }
std::optional<SocialPlatform> parse_social_platform(std::string_view s) { return lookup(kPlatforms, s); }
std::optional<SocialStatus> parse_social_status(std::string_view s) { return lookup(kStatuses, s); }

}  // namespace rugscope
