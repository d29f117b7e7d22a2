#pragma once

// Deliberately naive reference implementations. They share only the record types with the
// library so a bug in an optimized routine cannot hide in its own expected values.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rugscope/features.hpp"
#include "rugscope/records.hpp"

namespace rugscope::oracle {

/// O(n^2) drawdown over prices in chronological order.
std::vector<double> oracle_drawdown(const std::vector<double>& prices);

/// Recovery of the trough at j over later prices of the same token.
double oracle_recovery(const std::vector<double>& prices, const std::vector<TokenId>& tokens, std::size_t j);

/// Unordered pairs (smaller address first) with more than `threshold` trades between them.
std::map<std::pair<Address, Address>, std::size_t> oracle_wash_pairs(const std::vector<TradeRecord>& trades,
                                                                     std::size_t threshold);

/// Full-matrix Levenshtein distance over code points.
std::size_t oracle_levenshtein(const std::u32string& a, const std::u32string& b);

/// Every feature recomputed from scratch with linear scans.
features::FeatureVector oracle_features(const ProjectTimeline& timeline, Timestamp cutoff);

}  // namespace rugscope::oracle
