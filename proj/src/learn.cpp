#include "rugscope/learn.hpp"

#include <algorithm>
#include <numeric>

#include "rugscope/detector.hpp"
#include "rugscope/error.hpp"
#include "rugscope/rng.hpp"

namespace rugscope::learn {

std::string_view to_string(TrpRule rule) {
    switch (rule) {
        case TrpRule::LargestWithdrawal: return "largest_withdrawal";
        case TrpRule::LastSocialUpdate: return "last_social_update";
        case TrpRule::LastDrawdownTrough: return "last_drawdown_trough";
        case TrpRule::LastTrade: return "last_trade";
    }
    return "?";
}

std::optional<RugPullMoment> determine_t_rp(const ProjectTimeline& timeline, double drawdown_threshold) {
    if (!timeline.withdrawals.empty()) {
        // Earliest among equally large withdrawals.
        const auto largest = std::max_element(
            timeline.withdrawals.begin(), timeline.withdrawals.end(),
            [](const Withdrawal& a, const Withdrawal& b) { return a.amount_wei < b.amount_wei; });
        return RugPullMoment{largest->timestamp, TrpRule::LargestWithdrawal};
    }

    std::optional<Timestamp> last_post;
    for (const auto& s : timeline.social) {
        if (!s.last_post_timestamp) continue;
        if (s.status == SocialStatus::Deleted || s.status == SocialStatus::Suspended) continue;
        last_post = std::max(last_post.value_or(*s.last_post_timestamp), *s.last_post_timestamp);
    }
    if (last_post) return RugPullMoment{*last_post, TrpRule::LastSocialUpdate};

    const auto seq = detector::price_sequence(timeline.trades);
    if (seq.size() >= 2) {
        std::optional<Timestamp> last_trough;
        for (const auto& d : detector::drawdowns_with_troughs(seq)) {
            if (d.value > drawdown_threshold)
                last_trough = std::max(last_trough.value_or(seq[d.trough].timestamp), seq[d.trough].timestamp);
        }
        if (last_trough) return RugPullMoment{*last_trough, TrpRule::LastDrawdownTrough};
    }

    if (!timeline.trades.empty()) return RugPullMoment{timeline.trades.back().timestamp, TrpRule::LastTrade};
    return std::nullopt;
}

bool is_supported_window(int hours) {
    return std::find(kWindowHours.begin(), kWindowHours.end(), hours) != kWindowHours.end();
}

DatasetBuild build_dataset(std::span<const ProjectTimeline> positives,
                           std::span<const ProjectTimeline> negatives,
                           int window_hours,
                           Timestamp collection_end,
                           std::uint64_t split_seed) {
    if (!is_supported_window(window_hours))
        throw Error(ErrorCode::InvalidArgument, "unsupported window of " + std::to_string(window_hours) + " hours");
    DatasetBuild out;
    out.dataset.window_hours = window_hours;
    out.dataset.split_seed = split_seed;
    const Timestamp lead = static_cast<Timestamp>(window_hours) * 3600;

    std::size_t pos_rows = 0;
    for (const auto& tl : positives) {
        const auto moment = determine_t_rp(tl);
        if (!moment) {
            out.dropped.push_back({tl.project(), "rug-pull moment cannot be determined"});
            continue;
        }
        const Timestamp cutoff = moment->t_rp - lead;
        if (cutoff < tl.metadata.launch_timestamp) {
            out.dropped.push_back({tl.project(), "alarm time precedes launch"});
            continue;
        }
        out.dataset.rows.push_back({features::featurize(tl, cutoff), true});
        ++pos_rows;
    }
    std::size_t neg_rows = 0;
    for (const auto& tl : negatives) {
        if (collection_end < tl.metadata.launch_timestamp) {
            out.dropped.push_back({tl.project(), "launched after collection end"});
            continue;
        }
        out.dataset.rows.push_back({features::featurize(tl, collection_end), false});
        ++neg_rows;
    }
    if (pos_rows == 0) throw Error(ErrorCode::EmptyClass, "no positive rows remain");
    if (neg_rows == 0) throw Error(ErrorCode::EmptyClass, "no negative rows remain");
    return out;
}

Samples to_samples(const LabeledDataset& dataset) {
    Samples s;
    for (const auto& r : dataset.rows)
        s.push_back(std::vector<double>(r.features.values.begin(), r.features.values.end()), r.positive ? 1 : 0);
    return s;
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(idx);
    return idx;
}

Samples subset(const Samples& s, std::span<const std::size_t> idx) {
    Samples out;
    for (auto i : idx) out.push_back(s.x[i], s.y[i]);
    return out;
}

}  // namespace

Split split_samples(const Samples& samples, std::uint64_t seed, double train_fraction) {
    const auto idx = shuffled_indices(samples.size(), seed);
    const auto n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(samples.size()));
    const std::span<const std::size_t> all(idx);
    return {subset(samples, all.first(n_train)), subset(samples, all.subspan(n_train))};
}

Metrics metrics_from(const Confusion& c) {
    Metrics m;
    const double tp = static_cast<double>(c.tp);
    if (c.tp + c.fp > 0) m.precision = tp / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0) m.recall = tp / static_cast<double>(c.tp + c.fn);
    if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

Confusion confusion_of(const Model& model, const Samples& samples) {
    Confusion c;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const bool predicted = predict(model, samples.x[i]).positive;
        const bool actual = samples.y[i] == 1;
        if (predicted && actual) ++c.tp;
        else if (predicted) ++c.fp;
        else if (actual) ++c.fn;
        else ++c.tn;
    }
    return c;
}

CrossValidation cross_validate(ModelKind kind, const TrainConfig& config, const Samples& samples, std::size_t folds,
                               std::uint64_t seed) {
    if (folds < 2) throw Error(ErrorCode::InvalidArgument, "cross-validation needs at least 2 folds");
    const auto idx = shuffled_indices(samples.size(), seed);
    std::vector<std::vector<std::size_t>> fold_members(folds);
    for (std::size_t r = 0; r < idx.size(); ++r) fold_members[r % folds].push_back(idx[r]);
    for (std::size_t f = 0; f < folds; ++f) {
        const auto& m = fold_members[f];
        const bool has_pos = std::any_of(m.begin(), m.end(), [&](std::size_t i) { return samples.y[i] == 1; });
        const bool has_neg = std::any_of(m.begin(), m.end(), [&](std::size_t i) { return samples.y[i] == 0; });
        if (!has_pos || !has_neg)
            throw Error(ErrorCode::FoldTooSmall, "fold " + std::to_string(f) + " lacks one of the classes");
    }

    CrossValidation cv;
    Confusion pooled;
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::size_t> train_idx;
        for (std::size_t g = 0; g < folds; ++g)
            if (g != f) train_idx.insert(train_idx.end(), fold_members[g].begin(), fold_members[g].end());
        const Model model = train(kind, subset(samples, train_idx), config);
        const Confusion c = confusion_of(model, subset(samples, fold_members[f]));
        pooled += c;
        cv.folds.push_back(metrics_from(c));
    }
    cv.pooled = metrics_from(pooled);
    return cv;
}

Evaluation evaluate(const Model& model, const Samples& samples, std::size_t folds, std::uint64_t split_seed) {
    const Split split = split_samples(samples, split_seed);
    Evaluation ev;
    ev.on_training_split = cross_validate(model.kind, model.config, split.train, folds, split_seed + 1);
    ev.on_all_rows = cross_validate(model.kind, model.config, samples, folds, split_seed + 2);
    const Model held = train(model.kind, split.train, model.config);
    ev.held_out = metrics_from(confusion_of(held, split.test));
    return ev;
}

}  // namespace rugscope::learn
