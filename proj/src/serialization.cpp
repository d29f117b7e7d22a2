#include "rugscope/serialization.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rugscope {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& reason) { throw std::invalid_argument(reason); }

const json& field(const json& j, const char* key) {
    if (!j.is_object()) fail("record is not a JSON object");
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) fail(std::string("missing field '") + key + "'");
    return *it;
}

const json* optional_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return nullptr;
    return &*it;
}

Address address_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) fail(std::string("field '") + key + "' must be a string");
    auto a = Address::parse(v.get_ref<const std::string&>());
    if (!a) fail(std::string("field '") + key + "' is not a 40-hex-digit address");
    return *a;
}

std::string string_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) fail(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t unsigned_value(const json& v, const char* key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0) fail(std::string("field '") + key + "' must be non-negative");
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    fail(std::string("field '") + key + "' must be an unsigned integer");
}

Timestamp timestamp_value(const json& v, const char* key) {
    if (!v.is_number_integer()) fail(std::string("field '") + key + "' must be integer seconds");
    const auto t = v.get<std::int64_t>();
    if (t <= 0) fail(std::string("field '") + key + "' must be positive");
    return t;
}

Timestamp timestamp_field(const json& j, const char* key) { return timestamp_value(field(j, key), key); }

TokenId token_id_value(const json& v) {
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        try {
            std::size_t used = 0;
            const bool hex = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
            const auto value = std::stoull(hex ? s.substr(2) : s, &used, hex ? 16 : 10);
            if (used != (hex ? s.size() - 2 : s.size())) fail("token_id has trailing characters");
            return value;
        } catch (const std::logic_error&) {
            fail("token_id is not a 64-bit unsigned integer");
        }
    }
    return unsigned_value(v, "token_id");
}

double money_field(const json& j, const char* key, bool required) {
    const json* v = required ? &field(j, key) : optional_field(j, key);
    if (!v) return 0.0;
    if (!v->is_number()) fail(std::string("field '") + key + "' must be a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(std::string("field '") + key + "' must be finite");
    if (x < 0.0) fail(std::string("field '") + key + "' must be non-negative");
    return x;
}

template <typename E, typename Parser>
E enum_field(const json& j, const char* key, Parser parse) {
    const auto s = string_field(j, key);
    auto v = parse(s);
    if (!v) fail(std::string("field '") + key + "' has unknown value '" + s + "'");
    return *v;
}

}  // namespace

json wei_to_json(Wei value) {
    if (value <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(value);
    return wei_to_string(value);
}

Wei wei_from_json(const json& v) {
    if (v.is_string()) {
        auto w = parse_wei(v.get_ref<const std::string&>());
        if (!w) fail("wei amount is not a decimal integer");
        return *w;
    }
    if (v.is_number_float()) fail("wei amount must be an integer (use a decimal string for large values)");
    return unsigned_value(v, "wei");
}

void to_json(json& j, const Address& a) { j = a.to_string(); }

void from_json(const json& j, Address& a) {
    if (!j.is_string()) fail("address must be a string");
    auto parsed = Address::parse(j.get_ref<const std::string&>());
    if (!parsed) fail("invalid address");
    a = *parsed;
}

void to_json(json& j, const TransferEvent& e) {
    j = json{{"project", e.project},
             {"token_id", e.token_id},
             {"from", e.from},
             {"to", e.to},
             {"quantity", e.quantity},
             {"value_wei", wei_to_json(e.value_wei)},
             {"timestamp", e.timestamp},
             {"tx_hash", e.tx_hash},
             {"standard", std::string(to_string(e.standard))}};
    if (e.operator_address) j["operator"] = *e.operator_address;
}

void from_json(const json& j, TransferEvent& e) {
    e.project = address_field(j, "project");
    e.token_id = token_id_value(field(j, "token_id"));
    e.from = address_field(j, "from");
    e.to = address_field(j, "to");
    e.standard = enum_field<TokenStandard>(j, "standard", parse_token_standard);
    const json* q = optional_field(j, "quantity");
    e.quantity = q ? unsigned_value(*q, "quantity") : 1;
    if (e.quantity < 1) fail("quantity must be at least 1");
    if (e.standard == TokenStandard::ERC721 && e.quantity != 1) fail("erc721 transfers carry quantity 1");
    const json* v = optional_field(j, "value_wei");
    e.value_wei = v ? wei_from_json(*v) : 0;
    e.timestamp = timestamp_field(j, "timestamp");
    e.tx_hash = string_field(j, "tx_hash");
    e.operator_address.reset();
    if (optional_field(j, "operator")) e.operator_address = address_field(j, "operator");
}

void to_json(json& j, const TradeRecord& t) {
    j = json{{"project", t.project},
             {"token_id", t.token_id},
             {"buyer", t.buyer},
             {"seller", t.seller},
             {"price_usd", t.price_usd},
             {"timestamp", t.timestamp},
             {"market", std::string(to_string(t.market))},
             {"creator_fee_usd", t.creator_fee_usd}};
}

void from_json(const json& j, TradeRecord& t) {
    t.project = address_field(j, "project");
    t.token_id = token_id_value(field(j, "token_id"));
    t.buyer = address_field(j, "buyer");
    t.seller = address_field(j, "seller");
    if (t.buyer == t.seller) fail("buyer and seller are the same address");
    t.price_usd = money_field(j, "price_usd", true);
    t.timestamp = timestamp_field(j, "timestamp");
    t.market = optional_field(j, "market") ? enum_field<Market>(j, "market", parse_market) : Market::Other;
    t.creator_fee_usd = money_field(j, "creator_fee_usd", false);
}

void to_json(json& j, const ApprovalEvent& a) {
    j = json{{"project", a.project},
             {"owner", a.owner},
             {"operator", a.operator_address},
             {"scope", a.scope.is_all() ? "all" : "token"},
             {"granted", a.granted},
             {"timestamp", a.timestamp}};
    if (a.scope.token_id) j["token_id"] = *a.scope.token_id;
}

void from_json(const json& j, ApprovalEvent& a) {
    a.project = address_field(j, "project");
    a.owner = address_field(j, "owner");
    a.operator_address = address_field(j, "operator");
    const auto scope = string_field(j, "scope");
    if (scope == "all") {
        a.scope = ApprovalScope::all();
    } else if (scope == "token") {
        a.scope = ApprovalScope::single(token_id_value(field(j, "token_id")));
    } else {
        fail("field 'scope' must be 'all' or 'token'");
    }
    const json& g = field(j, "granted");
    if (!g.is_boolean()) fail("field 'granted' must be a boolean");
    a.granted = g.get<bool>();
    a.timestamp = timestamp_field(j, "timestamp");
}

void to_json(json& j, const SocialSnapshot& s) {
    j = json{{"project", s.project},
             {"platform", std::string(to_string(s.platform))},
             {"status", std::string(to_string(s.status))},
             {"snapshot_timestamp", s.snapshot_timestamp}};
    if (s.last_post_timestamp) j["last_post_timestamp"] = *s.last_post_timestamp;
}

void from_json(const json& j, SocialSnapshot& s) {
    s.project = address_field(j, "project");
    s.platform = enum_field<SocialPlatform>(j, "platform", parse_social_platform);
    s.status = enum_field<SocialStatus>(j, "status", parse_social_status);
    s.snapshot_timestamp = timestamp_field(j, "snapshot_timestamp");
    s.last_post_timestamp.reset();
    if (const json* lp = optional_field(j, "last_post_timestamp")) {
        s.last_post_timestamp = timestamp_value(*lp, "last_post_timestamp");
        if (*s.last_post_timestamp > s.snapshot_timestamp) fail("last_post_timestamp is after snapshot_timestamp");
    }
}

void to_json(json& j, const ProjectMetadata& m) {
    j = json{{"project", m.project},
             {"name", m.name},
             {"creator", m.creator},
             {"launch_timestamp", m.launch_timestamp},
             {"standard", std::string(to_string(m.standard))}};
    if (m.declared_total_supply) j["declared_total_supply"] = *m.declared_total_supply;
}

void from_json(const json& j, ProjectMetadata& m) {
    m.project = address_field(j, "project");
    m.name = string_field(j, "name");
    m.creator = address_field(j, "creator");
    m.launch_timestamp = timestamp_field(j, "launch_timestamp");
    m.standard = enum_field<TokenStandard>(j, "standard", parse_token_standard);
    m.declared_total_supply.reset();
    if (const json* s = optional_field(j, "declared_total_supply"))
        m.declared_total_supply = unsigned_value(*s, "declared_total_supply");
}

void to_json(json& j, const UriChange& u) {
    j = json{{"project", u.project},
             {"token_id", u.token_id},
             {"new_uri", u.new_uri},
             {"timestamp", u.timestamp},
             {"initiator", u.initiator}};
}

void from_json(const json& j, UriChange& u) {
    u.project = address_field(j, "project");
    u.token_id = token_id_value(field(j, "token_id"));
    u.new_uri = string_field(j, "new_uri");
    u.timestamp = timestamp_field(j, "timestamp");
    u.initiator = address_field(j, "initiator");
}

void to_json(json& j, const Withdrawal& w) {
    j = json{{"project", w.project}, {"amount_wei", wei_to_json(w.amount_wei)}, {"to", w.to}, {"timestamp", w.timestamp}};
}

void from_json(const json& j, Withdrawal& w) {
    w.project = address_field(j, "project");
    w.amount_wei = wei_from_json(field(j, "amount_wei"));
    w.to = address_field(j, "to");
    w.timestamp = timestamp_field(j, "timestamp");
}

void to_json(json& j, const DirectPayment& p) {
    j = json{{"project", p.project},
             {"amount_wei", wei_to_json(p.amount_wei)},
             {"from", p.from},
             {"timestamp", p.timestamp}};
}

void from_json(const json& j, DirectPayment& p) {
    p.project = address_field(j, "project");
    p.amount_wei = wei_from_json(field(j, "amount_wei"));
    p.from = address_field(j, "from");
    p.timestamp = timestamp_field(j, "timestamp");
}

}  // namespace rugscope
