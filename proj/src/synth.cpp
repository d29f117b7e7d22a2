#include "rugscope/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rugscope/error.hpp"
#include "rugscope/ingest.hpp"
#include "rugscope/rng.hpp"

namespace rugscope::synth {

namespace fs = std::filesystem;

std::string_view to_string(Archetype a) {
    switch (a) {
        case Archetype::BenignStable: return "BenignStable";
        case Archetype::BenignVolatile: return "BenignVolatile";
        case Archetype::PumpAndDump: return "PumpAndDump";
        case Archetype::MintFeeWithdrawScam: return "MintFeeWithdrawScam";
        case Archetype::WashTradingScam: return "WashTradingScam";
        case Archetype::MiddlemanScam: return "MiddlemanScam";
        case Archetype::HiddenMintScam: return "HiddenMintScam";
        case Archetype::CounterfeitScam: return "CounterfeitScam";
    }
    return "?";
}

std::optional<Archetype> parse_archetype(std::string_view s) {
    for (auto a : kAllArchetypes)
        if (to_string(a) == s) return a;
    return std::nullopt;
}

bool is_scam(Archetype a) { return a != Archetype::BenignStable && a != Archetype::BenignVolatile; }

Counts parse_counts(std::string_view text) {
    Counts counts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        if (!item.empty()) {
            const auto eq = item.find('=');
            if (eq == std::string_view::npos)
                throw Error(ErrorCode::InvalidCounts, "expected Archetype=count, got '" + std::string(item) + "'");
            auto arch = parse_archetype(item.substr(0, eq));
            if (!arch) throw Error(ErrorCode::InvalidCounts, "unknown archetype '" + std::string(item.substr(0, eq)) + "'");
            int n = 0;
            try {
                std::size_t used = 0;
                n = std::stoi(std::string(item.substr(eq + 1)), &used);
                if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
            } catch (const std::logic_error&) {
                throw Error(ErrorCode::InvalidCounts, "bad count in '" + std::string(item) + "'");
            }
            if (n < 0) throw Error(ErrorCode::InvalidCounts, "negative count in '" + std::string(item) + "'");
            counts[*arch] += n;
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return counts;
}

const std::vector<std::string>& famous_names() {
    static const std::vector<std::string> names{
        "CryptoPunks",          "Bored Ape Yacht Club", "Mutant Ape Yacht Club", "Azuki",
        "Doodles",              "Moonbirds",            "CloneX",                "Meebits",
        "Cool Cats",            "World of Women",       "Pudgy Penguins",        "Otherdeed for Otherside",
        "Art Blocks Curated",   "Invisible Friends",    "VeeFriends",            "Mfers",
    };
    return names;
}

namespace {

constexpr Timestamp kHour = 3600;
constexpr Timestamp kDay = kSecondsPerDay;

constexpr std::array<std::string_view, 32> kWords{
    "Velvet", "Orchard", "Lumen",  "Garden", "Pixel",  "Harbor", "Nimbus", "Quartz", "Fable",  "Meadow", "Cobalt",
    "Ember",  "Willow",  "Saffron", "Tundra", "Marble", "Glyph",  "Lantern", "Ripple", "Canyon", "Juniper", "Atlas",
    "Prism",  "Hollow",  "Cinder", "Drift",  "Echo",   "Fern",   "Grove",  "Kestrel", "Mosaic", "Nomad",
};

std::string random_name(Rng& rng) {
    return std::string(kWords[rng.below(kWords.size())]) + " " + std::string(kWords[rng.below(kWords.size())]) + " " +
           std::to_string(rng.between(1, 999));
}

std::string counterfeit_name(Rng& rng) {
    std::vector<std::string> long_names;
    for (const auto& n : famous_names())
        if (n.size() >= 10) long_names.push_back(n);
    std::string name = long_names[rng.below(long_names.size())];
    if (rng.chance(0.5)) return name;  // verbatim copy
    // One substituted letter keeps the Levenshtein ratio at (2n - 1) / 2n >= 0.95.
    std::size_t pos;
    do {
        pos = rng.below(name.size());
    } while (name[pos] == ' ');
    char c;
    do {
        c = static_cast<char>('a' + rng.below(26));
    } while (c == name[pos] || c == std::tolower(static_cast<unsigned char>(name[pos])));
    name[pos] = c;
    return name;
}

Address random_address(Rng& rng) {
    Address::Bytes b{};
    for (std::size_t i = 0; i < b.size(); i += 8) {
        std::uint64_t x = rng.next();
        for (std::size_t k = 0; k < 8 && i + k < b.size(); ++k) b[i + k] = static_cast<std::uint8_t>(x >> (8 * k));
    }
    b[0] |= 0x10;  // keep clear of the null and dead addresses
    return Address(b);
}

std::string random_hash(Rng& rng) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string h = "0x";
    for (int i = 0; i < 4; ++i) {
        std::uint64_t x = rng.next();
        for (int k = 0; k < 16; ++k) {
            h.push_back(kDigits[x & 0xf]);
            x >>= 4;
        }
    }
    return h;
}

Wei wei_between(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    return static_cast<Wei>(static_cast<std::uint64_t>(rng.between(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi))));
}

std::vector<Timestamp> sorted_times(Rng& rng, std::size_t n, Timestamp lo, Timestamp hi) {
    std::vector<Timestamp> ts(n);
    for (auto& t : ts) t = rng.between(lo, hi);
    std::sort(ts.begin(), ts.end());
    return ts;
}

/// Accumulates one project's records while tracking token ownership and marketplace approvals.
class ProjectBuilder {
public:
    ProjectBuilder(Rng& rng, Timestamp launch) : rng_(rng) {
        meta_.project = random_address(rng);
        meta_.creator = random_address(rng);
        meta_.launch_timestamp = launch;
        meta_.standard = TokenStandard::ERC721;
        market_ = static_cast<Market>(rng.below(4));
        market_operator_ = random_address(rng);
    }

    ProjectMetadata& meta() { return meta_; }
    Rng& rng() { return rng_; }

    std::vector<Address> make_users(std::size_t n) {
        std::vector<Address> users(n);
        for (auto& u : users) u = random_address(rng_);
        return users;
    }

    TokenId mint(const Address& to, Timestamp t, Wei value) {
        const TokenId id = owner_.size() + 1;
        owner_.push_back(to);
        transfers_.push_back({meta_.project, id, Address::null(), to, 1, value, t, random_hash(rng_),
                              TokenStandard::ERC721, std::nullopt});
        return id;
    }

    const Address& owner_of(TokenId id) const { return owner_.at(id - 1); }
    std::size_t minted() const { return owner_.size(); }

    void sell(TokenId id, const Address& buyer, double price, Timestamp t, double fee_rate) {
        const Address seller = owner_of(id);
        if (approved_.insert(seller).second) {
            const Timestamp granted = std::max(meta_.launch_timestamp, t - rng_.between(1, 600));
            approvals_.push_back({meta_.project, seller, market_operator_, ApprovalScope::all(), true, granted});
        }
        transfers_.push_back({meta_.project, id, seller, buyer, 1, 0, t, random_hash(rng_), TokenStandard::ERC721,
                              market_operator_});
        trades_.push_back({meta_.project, id, buyer, seller, price, t, market_, price * fee_rate});
        owner_[id - 1] = buyer;
    }

    void burn(TokenId id, Timestamp t) {
        transfers_.push_back({meta_.project, id, owner_of(id), Address::dead(), 1, 0, t, random_hash(rng_),
                              TokenStandard::ERC721, std::nullopt});
        owner_[id - 1] = Address::dead();
    }

    void withdraw(Wei amount, Timestamp t) { withdrawals_.push_back({meta_.project, amount, meta_.creator, t}); }

    void pay(const Address& from, Wei amount, Timestamp t) { payments_.push_back({meta_.project, amount, from, t}); }

    void social(SocialPlatform p, SocialStatus s, std::optional<Timestamp> last_post, Timestamp at) {
        social_.push_back({meta_.project, p, s, last_post, at});
    }

    ProjectTimeline build() {
        return ingest::build_timeline(meta_, std::move(transfers_), std::move(trades_), std::move(approvals_),
                                      std::move(social_), {}, std::move(withdrawals_), std::move(payments_));
    }

private:
    Rng& rng_;
    ProjectMetadata meta_;
    Market market_ = Market::Other;
    Address market_operator_;
    std::vector<Address> owner_;  // index = token id - 1
    std::set<Address> approved_;
    std::vector<TransferEvent> transfers_;
    std::vector<TradeRecord> trades_;
    std::vector<ApprovalEvent> approvals_;
    std::vector<SocialSnapshot> social_;
    std::vector<Withdrawal> withdrawals_;
    std::vector<DirectPayment> payments_;
};

Address pick_other(Rng& rng, const std::vector<Address>& pool, const Address& not_this) {
    Address a;
    do {
        a = pool[rng.below(pool.size())];
    } while (a == not_this);
    return a;
}

// Scam lifecycle: promotion and hurried paid mint, exponential pump on the secondary market,
// then the rug: funds leave, one collapsed sale, social channels die and activity stops.
GeneratedProject make_scam(Archetype archetype, Rng& rng, Timestamp launch, Timestamp collection_end) {
    ProjectBuilder b(rng, launch);
    b.meta().name = archetype == Archetype::CounterfeitScam ? counterfeit_name(rng) : random_name(rng);

    const auto n_tokens = static_cast<std::size_t>(rng.between(60, 250));
    const auto users = b.make_users(static_cast<std::size_t>(rng.between(30, 120)));
    const bool middleman = archetype == Archetype::MiddlemanScam;
    const bool wash = archetype == Archetype::WashTradingScam;
    const Address middleman_addr = random_address(rng);
    const Address colluder_a = random_address(rng);
    const Address colluder_b = random_address(rng);

    b.meta().declared_total_supply = n_tokens;
    if (archetype == Archetype::HiddenMintScam) {
        const auto hidden = std::max<std::size_t>(1, static_cast<std::size_t>(n_tokens * rng.uniform(0.05, 0.3)));
        b.meta().declared_total_supply = n_tokens - hidden;
    }

    // Mint phase, starting within hours of launch.
    const Timestamp first_mint = launch + rng.between(600, 6 * kHour);
    const Timestamp mint_end = first_mint + rng.between(kDay, 3 * kDay);
    const Wei mint_price = middleman ? 0 : wei_between(rng, 10'000'000'000'000'000ULL, 80'000'000'000'000'000ULL);
    auto mint_times = sorted_times(rng, n_tokens, first_mint, mint_end);
    mint_times.front() = first_mint;
    TokenId wash_token = 0;
    for (std::size_t i = 0; i < n_tokens; ++i) {
        Address to = middleman ? middleman_addr : users[rng.below(users.size())];
        if (wash && i == 0) to = colluder_a;
        const TokenId id = b.mint(to, mint_times[i], mint_price);
        if (wash && i == 0) wash_token = id;
    }

    // Pump.
    const Timestamp pump_start = mint_end + kHour;
    const Timestamp pump_end = pump_start + rng.between(5 * kDay, 14 * kDay);
    const double p0 = rng.uniform(20.0, 200.0);
    const double growth = std::log(rng.uniform(5.0, 30.0));
    const double fee_rate = 0.05;
    auto price_at = [&](Timestamp t) {
        const double frac = static_cast<double>(t - pump_start) / static_cast<double>(pump_end - pump_start);
        return p0 * std::exp(growth * frac) * rng.uniform(0.92, 1.08);
    };

    struct PumpEvent {
        Timestamp t;
        bool wash;
    };
    std::vector<PumpEvent> events;
    for (auto t : sorted_times(rng, static_cast<std::size_t>(rng.between(60, 200)), pump_start, pump_end - kHour))
        events.push_back({t, false});
    if (wash)
        for (auto t : sorted_times(rng, static_cast<std::size_t>(rng.between(12, 30)), pump_start, pump_end - kHour))
            events.push_back({t, true});
    std::stable_sort(events.begin(), events.end(), [](const PumpEvent& x, const PumpEvent& y) { return x.t < y.t; });

    double min_price = std::numeric_limits<double>::infinity();
    auto tradable = [&](TokenId id) { return id != wash_token; };
    for (const auto& ev : events) {
        const double price = price_at(ev.t);
        min_price = std::min(min_price, price);
        if (ev.wash) {
            const Address buyer = b.owner_of(wash_token) == colluder_a ? colluder_b : colluder_a;
            b.sell(wash_token, buyer, price, ev.t, fee_rate);
            continue;
        }
        TokenId id;
        do {
            id = 1 + rng.below(b.minted());
        } while (!tradable(id));
        b.sell(id, pick_other(rng, users, b.owner_of(id)), price, ev.t, fee_rate);
    }

    if (middleman) {
        const auto payments = rng.between(3, 20);
        for (auto t : sorted_times(rng, static_cast<std::size_t>(payments), pump_start, pump_end - kHour))
            b.pay(users[rng.below(users.size())], wei_between(rng, 50'000'000'000'000'000ULL, 500'000'000'000'000'000ULL), t);
    }

    // The rug-pull moment each archetype's evidence points to.
    const Timestamp t_rp = pump_end;
    Timestamp dump_time = t_rp;
    if (archetype == Archetype::MintFeeWithdrawScam) {
        const Wei fees = mint_price * n_tokens;
        const auto small = rng.between(0, 2);
        for (auto t : sorted_times(rng, static_cast<std::size_t>(small), pump_start, pump_end - kHour))
            b.withdraw(fees * static_cast<Wei>(rng.between(2, 10)) / 100, t);
        b.withdraw(fees * static_cast<Wei>(rng.between(60, 90)) / 100, t_rp);
        dump_time = t_rp + rng.between(kHour, 12 * kHour);
    } else if (wash || middleman) {
        dump_time = t_rp + rng.between(kHour, 2 * kDay);
    }

    // One sale at a collapsed price; that token never trades again.
    TokenId dumped;
    do {
        dumped = 1 + rng.below(b.minted());
    } while (!tradable(dumped));
    b.sell(dumped, pick_other(rng, users, b.owner_of(dumped)), min_price / rng.uniform(250.0, 1000.0), dump_time,
           fee_rate);

    switch (archetype) {
        case Archetype::PumpAndDump:
            b.social(SocialPlatform::Twitter, SocialStatus::Suspended, std::nullopt, collection_end);
            b.social(SocialPlatform::Website, SocialStatus::ServerDown, std::nullopt, collection_end);
            break;
        case Archetype::HiddenMintScam:
        case Archetype::MintFeeWithdrawScam:
            b.social(SocialPlatform::Twitter, SocialStatus::Deleted, std::nullopt, collection_end);
            b.social(SocialPlatform::Discord, SocialStatus::InviteExpired, std::nullopt, collection_end);
            break;
        case Archetype::CounterfeitScam:
            b.social(SocialPlatform::Twitter, SocialStatus::Suspended, std::nullopt, collection_end);
            b.social(SocialPlatform::Discord, SocialStatus::InviteExpired, std::nullopt, collection_end);
            break;
        default:  // wash trading and middleman: the account simply goes quiet at the rug
            b.social(SocialPlatform::Twitter, SocialStatus::Active, t_rp, collection_end);
            b.social(SocialPlatform::Discord, SocialStatus::InviteExpired, std::nullopt, collection_end);
            break;
    }
    return {b.build(), archetype, t_rp};
}

// Healthy project: slower and longer mint, continuous mean-reverting trading until collection end,
// active social accounts.
GeneratedProject make_benign(Archetype archetype, Rng& rng, Timestamp launch, Timestamp collection_end) {
    ProjectBuilder b(rng, launch);
    b.meta().name = random_name(rng);
    const auto n_tokens = static_cast<std::size_t>(rng.between(200, 600));
    b.meta().declared_total_supply = n_tokens;
    const auto users = b.make_users(static_cast<std::size_t>(rng.between(100, 400)));

    const Timestamp first_mint = launch + rng.between(kDay, 7 * kDay);
    const Timestamp mint_end = first_mint + rng.between(10 * kDay, 40 * kDay);
    const bool paid = rng.chance(0.5);
    const Wei mint_price = paid ? wei_between(rng, 5'000'000'000'000'000ULL, 50'000'000'000'000'000ULL) : 0;
    auto mint_times = sorted_times(rng, n_tokens, first_mint, mint_end);
    mint_times.front() = first_mint;

    const bool volatile_prices = archetype == Archetype::BenignVolatile;
    const double sigma = volatile_prices ? 0.15 : 0.04;
    const double theta = volatile_prices ? 0.1 : 0.05;
    const double mu = std::log(rng.uniform(20.0, 500.0));
    double log_price = mu;
    const auto rate = rng.between(3, 12);

    std::vector<Timestamp> trade_times;
    const Timestamp trade_start = first_mint + kDay;
    const Timestamp trade_end = collection_end - rng.between(0, 6 * kHour);
    for (Timestamp day = trade_start; day < trade_end; day += kDay) {
        const auto n = static_cast<std::size_t>(std::lround(static_cast<double>(rate) * rng.uniform(0.5, 1.5)));
        for (auto t : sorted_times(rng, n, day, std::min(day + kDay, trade_end) - 1)) trade_times.push_back(t);
    }
    const auto n_burns = static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(n_tokens / 50)));
    std::vector<Timestamp> burn_times = sorted_times(rng, n_burns, mint_end, trade_end);

    // Merge mints, trades and burns chronologically so only live tokens change hands.
    std::size_t mi = 0, ti = 0, bi = 0;
    std::vector<TokenId> live;
    while (mi < mint_times.size() || ti < trade_times.size() || bi < burn_times.size()) {
        const Timestamp tm = mi < mint_times.size() ? mint_times[mi] : std::numeric_limits<Timestamp>::max();
        const Timestamp tt = ti < trade_times.size() ? trade_times[ti] : std::numeric_limits<Timestamp>::max();
        const Timestamp tb = bi < burn_times.size() ? burn_times[bi] : std::numeric_limits<Timestamp>::max();
        if (tm <= tt && tm <= tb) {
            live.push_back(b.mint(users[rng.below(users.size())], tm, mint_price));
            ++mi;
        } else if (tt <= tb) {
            ++ti;
            if (live.empty()) continue;
            log_price += theta * (mu - log_price) + sigma * rng.normal();
            log_price = std::clamp(log_price, mu - 1.4, mu + 1.4);
            const TokenId id = live[rng.below(live.size())];
            b.sell(id, pick_other(rng, users, b.owner_of(id)), std::exp(log_price), tt, 0.025);
        } else {
            ++bi;
            if (live.size() < 2) continue;
            const auto k = rng.below(live.size());
            b.burn(live[k], tb);
            live.erase(live.begin() + static_cast<std::ptrdiff_t>(k));
        }
    }

    if (paid && rng.chance(0.5)) {
        const Wei fees = mint_price * n_tokens;
        for (auto t : sorted_times(rng, static_cast<std::size_t>(rng.between(1, 2)), mint_end, trade_end))
            b.withdraw(fees * static_cast<Wei>(rng.between(10, 40)) / 100, t);
    }

    b.social(SocialPlatform::Twitter, SocialStatus::Active, collection_end - rng.between(0, 5 * kDay), collection_end);
    b.social(SocialPlatform::Discord, SocialStatus::Active, std::nullopt, collection_end);
    return {b.build(), archetype, std::nullopt};
}

Timestamp launch_in(Rng& rng, Timestamp start, std::pair<int, int> days) {
    return start + rng.between(static_cast<std::int64_t>(days.first) * kDay, static_cast<std::int64_t>(days.second) * kDay);
}

}  // namespace

Scenario generate(std::uint64_t seed, const Counts& counts, const GeneratorOptions& options) {
    if (options.horizon_days < 90)
        throw Error(ErrorCode::InvalidArgument, "horizon must be at least 90 days (got " +
                                                    std::to_string(options.horizon_days) + ")");
    int total = 0;
    for (const auto& [a, n] : counts) {
        if (n < 0) throw Error(ErrorCode::InvalidCounts, "negative count for " + std::string(to_string(a)));
        total += n;
    }
    if (total == 0) throw Error(ErrorCode::InvalidCounts, "no projects requested");

    // Scams need ~25 days of lifecycle plus 45 quiet days before collection end;
    // benign projects need 75 days to mature.
    const int h = options.horizon_days;
    const auto scam_days = options.scam_launch_days.value_or(std::pair{0, h - 70});
    const auto benign_days = options.benign_launch_days.value_or(std::pair{0, h - 75});
    if (scam_days.first < 0 || scam_days.first > scam_days.second || scam_days.second > h - 45 ||
        benign_days.first < 0 || benign_days.first > benign_days.second || benign_days.second > h - 2)
        throw Error(ErrorCode::InvalidArgument, "launch day range does not fit the horizon");

    Scenario s;
    s.seed = seed;
    s.horizon_days = h;
    s.start = options.start;
    s.collection_end = options.start + static_cast<Timestamp>(h) * kDay;
    s.reference_names = famous_names();

    Rng rng(seed);
    for (auto a : kAllArchetypes) {
        auto it = counts.find(a);
        const int n = it == counts.end() ? 0 : it->second;
        for (int i = 0; i < n; ++i) {
            if (is_scam(a))
                s.projects.push_back(make_scam(a, rng, launch_in(rng, s.start, scam_days), s.collection_end));
            else
                s.projects.push_back(make_benign(a, rng, launch_in(rng, s.start, benign_days), s.collection_end));
        }
    }
    return s;
}

Scenario generate(std::uint64_t seed, const Counts& counts, int horizon_days) {
    GeneratorOptions options;
    options.horizon_days = horizon_days;
    return generate(seed, counts, options);
}

std::string serialize(const Scenario& scenario) {
    std::ostringstream out;
    out << "seed " << scenario.seed << " horizon_days " << scenario.horizon_days << " start " << scenario.start
        << " collection_end " << scenario.collection_end << "\n";
    for (const auto& p : scenario.projects) {
        const auto& tl = p.timeline;
        out << "project " << tl.project().to_string() << " " << to_string(p.archetype) << " "
            << (p.t_rp ? std::to_string(*p.t_rp) : "-") << "\n";
        out << ingest::serialize(tl.metadata) << "\n";
        for (const auto& t : tl.transfers) out << ingest::serialize(t.event) << "\n";
        out << ingest::serialize_lines(tl.trades) << ingest::serialize_lines(tl.approvals)
            << ingest::serialize_lines(tl.social) << ingest::serialize_lines(tl.uri_changes)
            << ingest::serialize_lines(tl.withdrawals) << ingest::serialize_lines(tl.direct_payments);
    }
    for (const auto& n : scenario.reference_names) out << "reference " << n << "\n";
    return out.str();
}

void write_scenario(const Scenario& scenario, const fs::path& dir) {
    fs::create_directories(dir);
    ingest::Manifest manifest;
    manifest.base_dir = dir;
    std::string labels = "project,archetype,label,t_rp\n";
    for (const auto& p : scenario.projects) {
        const auto& tl = p.timeline;
        const std::string addr = tl.project().to_string();
        const fs::path rel = fs::path("projects") / addr;
        std::vector<TransferEvent> transfers;
        for (const auto& t : tl.transfers) transfers.push_back(t.event);
        ingest::write_text_file(dir / rel / "metadata.jsonl", ingest::serialize(tl.metadata) + "\n");
        ingest::write_text_file(dir / rel / "transfers.jsonl", ingest::serialize_lines(transfers));
        ingest::write_text_file(dir / rel / "trades.jsonl", ingest::serialize_lines(tl.trades));
        ingest::write_text_file(dir / rel / "approvals.jsonl", ingest::serialize_lines(tl.approvals));
        ingest::write_text_file(dir / rel / "social.jsonl", ingest::serialize_lines(tl.social));
        ingest::write_text_file(dir / rel / "uri_changes.jsonl", ingest::serialize_lines(tl.uri_changes));
        ingest::write_text_file(dir / rel / "withdrawals.jsonl", ingest::serialize_lines(tl.withdrawals));
        ingest::write_text_file(dir / rel / "direct_payments.jsonl", ingest::serialize_lines(tl.direct_payments));
        manifest.projects.push_back({tl.project(), rel / "metadata.jsonl", rel / "transfers.jsonl",
                                     rel / "trades.jsonl", rel / "approvals.jsonl", rel / "social.jsonl",
                                     rel / "uri_changes.jsonl", rel / "withdrawals.jsonl",
                                     rel / "direct_payments.jsonl"});
        labels += addr + "," + std::string(to_string(p.archetype)) + "," + (is_scam(p.archetype) ? "1" : "0") + "," +
                  (p.t_rp ? std::to_string(*p.t_rp) : "") + "\n";
    }
    ingest::write_manifest(dir / "manifest.json", manifest);
    ingest::write_text_file(dir / "labels.csv", labels);
    std::string refs;
    for (const auto& n : scenario.reference_names) refs += n + "\n";
    ingest::write_text_file(dir / "reference_names.txt", refs);
    const nlohmann::json info{{"seed", scenario.seed},
                              {"horizon_days", scenario.horizon_days},
                              {"start", scenario.start},
                              {"collection_end", scenario.collection_end},
                              {"projects", scenario.projects.size()}};
    ingest::write_text_file(dir / "scenario.json", info.dump(2) + "\n");
}

std::vector<Label> read_labels(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open labels file " + path.string());
    std::vector<Label> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line_no == 1) continue;  // header
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (cells.size() < 3) throw ParseError(line_no, "expected project,archetype,label[,t_rp]");
        Label l;
        auto addr = Address::parse(cells[0]);
        if (!addr) throw ParseError(line_no, "invalid project address");
        l.project = *addr;
        auto arch = parse_archetype(cells[1]);
        if (arch) {
            l.archetype = *arch;
        } else {
            // Hand-written label files may leave the archetype blank and rely on the 0/1 label.
            l.archetype = cells[2] == "1" ? Archetype::PumpAndDump : Archetype::BenignStable;
        }
        if (cells[2] != "0" && cells[2] != "1") throw ParseError(line_no, "label must be 0 or 1");
        if ((cells[2] == "1") != is_scam(l.archetype)) throw ParseError(line_no, "label contradicts archetype");
        if (cells.size() > 3 && !cells[3].empty()) {
            try {
                l.t_rp = std::stoll(cells[3]);
            } catch (const std::logic_error&) {
                throw ParseError(line_no, "t_rp is not an integer");
            }
        }
        labels.push_back(l);
    }
    return labels;
}

std::vector<std::string> read_reference_names(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open reference names " + path.string());
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos) names.push_back(line);
    }
    return names;
}

}  // namespace rugscope::synth
