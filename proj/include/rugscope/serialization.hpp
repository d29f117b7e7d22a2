#pragma once

// JSON encodings of the input record types. Field names are lowercase snake_case; object keys
// are emitted in sorted order so a record has exactly one canonical line.

#include <json.hpp>

#include "rugscope/records.hpp"

namespace rugscope {

void to_json(nlohmann::json& j, const Address& a);
void from_json(const nlohmann::json& j, Address& a);

void to_json(nlohmann::json& j, const TransferEvent& e);
void from_json(const nlohmann::json& j, TransferEvent& e);
void to_json(nlohmann::json& j, const TradeRecord& t);
void from_json(const nlohmann::json& j, TradeRecord& t);
void to_json(nlohmann::json& j, const ApprovalEvent& a);
void from_json(const nlohmann::json& j, ApprovalEvent& a);
void to_json(nlohmann::json& j, const SocialSnapshot& s);
void from_json(const nlohmann::json& j, SocialSnapshot& s);
void to_json(nlohmann::json& j, const ProjectMetadata& m);
void from_json(const nlohmann::json& j, ProjectMetadata& m);
void to_json(nlohmann::json& j, const UriChange& u);
void from_json(const nlohmann::json& j, UriChange& u);
void to_json(nlohmann::json& j, const Withdrawal& w);
void from_json(const nlohmann::json& j, Withdrawal& w);
void to_json(nlohmann::json& j, const DirectPayment& p);
void from_json(const nlohmann::json& j, DirectPayment& p);

/// Wei is written as a JSON number when it fits in 64 bits, otherwise as a decimal string.
nlohmann::json wei_to_json(Wei value);
Wei wei_from_json(const nlohmann::json& j);

}  // namespace rugscope
