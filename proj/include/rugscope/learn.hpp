#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rugscope/features.hpp"
#include "rugscope/model.hpp"
#include "rugscope/records.hpp"

namespace rugscope::learn {

enum class TrpRule { LargestWithdrawal, LastSocialUpdate, LastDrawdownTrough, LastTrade };
std::string_view to_string(TrpRule rule);

struct RugPullMoment {
    Timestamp t_rp = 0;
    TrpRule rule_used = TrpRule::LastTrade;

    bool operator==(const RugPullMoment&) const = default;
};

/// Cascade over (1) largest withdrawal, (2) latest post of a live social account,
/// (3) latest trough among drawdowns above the threshold, (4) last trade.
/// nullopt when no rule applies.
std::optional<RugPullMoment> determine_t_rp(const ProjectTimeline& timeline, double drawdown_threshold = 0.99);

/// Lead times T_RP - T_A, in hours, evaluated for early warning.
inline constexpr std::array<int, 14> kWindowHours{0, 1, 2, 4, 8, 12, 16, 24, 36, 48, 60, 72, 84, 96};
bool is_supported_window(int hours);

struct LabeledRow {
    features::FeatureVector features;
    bool positive = false;
};

struct LabeledDataset {
    std::vector<LabeledRow> rows;
    int window_hours = 0;
    std::uint64_t split_seed = 0;
};

struct DroppedRow {
    Address project;
    std::string reason;
};

struct DatasetBuild {
    LabeledDataset dataset;
    std::vector<DroppedRow> dropped;
};

/// Positive rows are featurized at t_rp - window, negatives at `collection_end`.
/// Rows whose cutoff precedes launch (or whose T_RP is undeterminable) are dropped and reported.
/// Throws Error(InvalidArgument) for an unsupported window, Error(EmptyClass) if a class ends empty.
DatasetBuild build_dataset(std::span<const ProjectTimeline> positives,
                           std::span<const ProjectTimeline> negatives,
                           int window_hours,
                           Timestamp collection_end,
                           std::uint64_t split_seed = 0);

Samples to_samples(const LabeledDataset& dataset);

struct Split {
    Samples train;
    Samples test;
};

/// Seeded shuffle, first `train_fraction` of rows to train.
Split split_samples(const Samples& samples, std::uint64_t seed, double train_fraction = 0.8);

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    Confusion& operator+=(const Confusion& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
};

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

Metrics metrics_from(const Confusion& c);
Confusion confusion_of(const Model& model, const Samples& samples);

struct CrossValidation {
    std::vector<Metrics> folds;
    Metrics pooled;  // from the summed confusion matrix
};

struct Evaluation {
    CrossValidation on_training_split;
    CrossValidation on_all_rows;
    Metrics held_out;  // model trained on the 80% split, scored on the remaining 20%
};

/// k-fold cross-validation on a fixed seeded fold assignment. Throws Error(FoldTooSmall)
/// when a fold lacks either class and Error(InvalidArgument) for folds < 2.
CrossValidation cross_validate(ModelKind kind, const TrainConfig& config, const Samples& samples, std::size_t folds,
                               std::uint64_t seed);

/// Retrains `model.kind` with `model.config` per fold.
Evaluation evaluate(const Model& model, const Samples& samples, std::size_t folds = 5, std::uint64_t split_seed = 0);

}  // namespace rugscope::learn
