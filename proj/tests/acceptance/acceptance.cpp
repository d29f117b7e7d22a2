// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rugscope/detector.hpp"
#include "rugscope/error.hpp"
#include "rugscope/features.hpp"
#include "rugscope/ingest.hpp"
#include "rugscope/learn.hpp"
#include "rugscope/levenshtein.hpp"
#include "rugscope/model.hpp"
#include "rugscope/monitor.hpp"
#include "rugscope/oracles.hpp"
#include "rugscope/rng.hpp"
#include "rugscope/synth.hpp"
#include "rugscope/tricks.hpp"
#include "support.hpp"

using namespace rugscope;
using namespace testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

/// Collects failed sub-checks; the first few are kept for the report line.
struct Checks {
    std::size_t failed = 0;
    std::vector<std::string> notes;
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failed;
        if (notes.size() < 3) notes.push_back(what);
    }
    std::string failures() const {
        std::string s;
        for (const auto& n : notes) s += "; " + n;
        return std::to_string(failed) + " failed" + s;
    }
};

synth::Counts balanced_counts(int scams, int benign) {
    synth::Counts c;
    std::vector<synth::Archetype> scam_kinds, benign_kinds;
    for (auto a : synth::kAllArchetypes) (synth::is_scam(a) ? scam_kinds : benign_kinds).push_back(a);
    for (int i = 0; i < scams; ++i) ++c[scam_kinds[static_cast<std::size_t>(i) % scam_kinds.size()]];
    for (int i = 0; i < benign; ++i) ++c[benign_kinds[static_cast<std::size_t>(i) % benign_kinds.size()]];
    return c;
}

// ---------------------------------------------------------------------------

Outcome detector_suite() {
    Clock clock;
    const auto sc = synth::generate(101, balanced_counts(100, 100));
    std::size_t scams = 0, caught = 0, benign = 0, false_alarms = 0;
    for (const auto& p : sc.projects) {
        const bool flagged = detector::detect_rug_pull(p.timeline, sc.collection_end).rug_pull;
        if (synth::is_scam(p.archetype)) {
            ++scams;
            caught += flagged;
        } else {
            ++benign;
            false_alarms += flagged;
        }
    }
    const double t = clock.seconds();
    return {scams == 100 && benign == 100 && caught == scams && false_alarms == 0 && t < 10.0,
            "scam flagged " + std::to_string(caught) + "/" + std::to_string(scams) + ", benign flagged " +
                std::to_string(false_alarms) + "/" + std::to_string(benign) + ", " + fmt("%.2f s", t)};
}

Outcome drawdown_equivalence() {
    Rng rng(202);
    Checks c;
    std::size_t compared = 0;
    double worst_scale = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto n = static_cast<std::size_t>(rng.between(1, 200));
        std::vector<double> prices(n);
        std::vector<TokenId> tokens(n);
        detector::PriceSequence seq(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Mix of smooth values and collapses so both signs of drawdown occur.
            prices[i] = rng.chance(0.1) ? rng.uniform(1e-4, 1e-2) : std::exp(rng.uniform(-3, 8));
            tokens[i] = static_cast<TokenId>(rng.between(1, 6));
            seq[i] = {tokens[i], prices[i], static_cast<Timestamp>(i)};
        }
        const auto fast = detector::drawdown_sequence(seq);
        c.expect(fast == oracle::oracle_drawdown(prices), "drawdown differs on sequence " + std::to_string(rep));
        for (std::size_t j = 0; j < n; ++j) {
            c.expect(detector::recovery(seq, j) == oracle::oracle_recovery(prices, tokens, j),
                     "recovery differs on sequence " + std::to_string(rep));
            ++compared;
        }
        for (double k : {0.001, 1.0, 1e6}) {
            auto scaled = seq;
            for (auto& p : scaled) p.price_usd *= k;
            const auto dd = detector::drawdown_sequence(scaled);
            for (std::size_t i = 0; i < dd.size(); ++i) {
                const double err = std::abs(dd[i] - fast[i]) / std::max(1.0, std::abs(fast[i]));
                worst_scale = std::max(worst_scale, err);
            }
            for (std::size_t j = 0; j < n; ++j) {
                const double a = detector::recovery(scaled, j), b = detector::recovery(seq, j);
                worst_scale = std::max(worst_scale, std::abs(a - b) / std::max(1.0, std::abs(b)));
            }
            c.expect(detector::check_price(scaled).triggered == detector::check_price(seq).triggered,
                     "verdict changes under scaling");
        }
    }
    c.expect(worst_scale <= 1e-12, "scaling error " + fmt("%.3g", worst_scale));
    return {c.failed == 0, "1000 sequences, " + std::to_string(compared) + " recoveries exact; max scaling error " +
                               fmt("%.2g", worst_scale) + (c.failed ? "; " + c.failures() : "")};
}

Outcome threshold_fidelity() {
    Checks c;
    auto seq = [](double a, double b) {
        return detector::PriceSequence{{1, a, kLaunch + 1}, {2, b, kLaunch + 2}};
    };
    c.expect(!detector::check_price(seq(100, 1)).triggered, "drawdown 0.99 flagged");
    const double eps_dd = detector::drawdown_sequence(seq(100, 1 - 1e-9))[0];
    c.expect(eps_dd > 0.99 && eps_dd - 0.99 < 1e-10, "drawdown 0.99+eps fixture is off");
    c.expect(detector::check_price(seq(100, 1 - 1e-9)).triggered, "drawdown 0.99+eps not flagged");
    c.expect(detector::drawdown_sequence(seq(100, 1))[0] == 0.99, "drawdown of 100 -> 1 is not exactly 0.99");

    auto pair_trades = [](int n) {
        std::vector<TradeRecord> ts;
        for (int i = 0; i < n; ++i) ts.push_back(trade(1, addr(1 + i % 2), addr(2 - i % 2), 10, kLaunch + i));
        return ts;
    };
    c.expect(!tricks::detect_wash_trading(pair_trades(10)).has_value(), "10 trades flagged as wash trading");
    c.expect(tricks::detect_wash_trading(pair_trades(11)).has_value(), "11 trades not flagged as wash trading");

    const Timestamp asof = kLaunch + 120 * kDay;
    auto live = [&](int n1, int n2) {
        Fixture f;
        for (int i = 0; i < n1; ++i) f.transfers.push_back(mint(static_cast<TokenId>(i + 1), addr(1), kLaunch + i));
        for (int i = 0; i < n2; ++i) f.transfers.push_back(transfer(1, addr(1 + i % 2), addr(2 - i % 2), asof - 10 - i));
        return f.build();
    };
    c.expect(detector::liveness(live(100, 1), asof) == 0.99, "liveness 100/1 is not exactly 0.99");
    c.expect(!detector::check_liveness(live(100, 1), asof).triggered, "liveness 0.99 flagged");
    c.expect(detector::check_liveness(live(1000, 9), asof).triggered, "liveness 0.991 not flagged");

    Fixture social;
    social.transfers = {mint(1, addr(1), kLaunch)};
    social.social = {{kProject, SocialPlatform::Twitter, SocialStatus::Active, asof - 30 * kDay + 1, asof}};
    c.expect(!detector::check_social(social.build(), asof).triggered, "twitter idle 30 days minus 1 s flagged");
    social.social[0].last_post_timestamp = asof - 30 * kDay;
    c.expect(detector::check_social(social.build(), asof).triggered, "twitter idle 30 days not flagged");

    return {c.failed == 0, c.failed ? c.failures()
                                    : "drawdown 0.99 / 0.99+eps, wash 10 / 11, liveness 0.99 / 0.991, "
                                      "twitter idle 30 d - 1 s / 30 d"};
}

std::string encode_utf8(const std::u32string& s) {
    std::string out;
    for (char32_t c : s) {
        if (c < 0x80) {
            out += static_cast<char>(c);
        } else if (c < 0x800) {
            out += static_cast<char>(0xC0 | (c >> 6));
            out += static_cast<char>(0x80 | (c & 0x3F));
        } else if (c < 0x10000) {
            out += static_cast<char>(0xE0 | (c >> 12));
            out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (c & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (c >> 18));
            out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (c & 0x3F));
        }
    }
    return out;
}

Outcome levenshtein_suite() {
    static const std::u32string alphabet = U"abcdeABCDE 0123éü世界\U0001F600";
    Rng rng(404);
    Checks c;
    for (int rep = 0; rep < 10000; ++rep) {
        std::u32string a, b;
        // Small alphabets make near-duplicates common; large ones make distant pairs common.
        const auto k = static_cast<std::size_t>(rng.between(2, static_cast<std::int64_t>(alphabet.size())));
        for (auto la = rng.between(0, 64); la > 0; --la) a += alphabet[rng.below(k)];
        for (auto lb = rng.between(0, 64); lb > 0; --lb) b += alphabet[rng.below(k)];
        if (rng.chance(0.3)) {
            b = a;
            for (int e = 0; e < 3 && !b.empty(); ++e) b[rng.below(b.size())] = alphabet[rng.below(k)];
        }
        const std::size_t d = oracle::oracle_levenshtein(a, b);
        c.expect(levenshtein_distance(a, b) == d, "distance differs on pair " + std::to_string(rep));
        const auto ua = encode_utf8(a), ub = encode_utf8(b);
        c.expect(decode_utf8(ua) == a, "utf-8 decode mismatch");
        const double total = static_cast<double>(a.size() + b.size());
        const double want = total == 0 ? 1.0 : (total - static_cast<double>(d)) / total;
        const double got = levenshtein_ratio(ua, ub);
        c.expect(got == want, "ratio differs on pair " + std::to_string(rep));
        c.expect(got == levenshtein_ratio(ub, ua), "ratio is not symmetric on pair " + std::to_string(rep));
    }
    const double m = levenshtein_ratio("MUSHROHMS", "MUSHROOMS");
    c.expect(m == 17.0 / 18.0, "MUSHROHMS ratio " + fmt("%.17g", m));
    return {c.failed == 0, c.failed ? c.failures() : "10000 pairs match the full-matrix oracle; symmetric; "
                                                     "ratio(MUSHROHMS, MUSHROOMS) = " + fmt("%.17g", m)};
}

ProjectTimeline random_timeline(Rng& rng) {
    Fixture f;
    f.meta.launch_timestamp = kLaunch;
    const int n_tokens = static_cast<int>(rng.between(1, 40));
    Timestamp t = kLaunch + rng.between(0, 7200);
    for (int i = 1; i <= n_tokens; ++i) {
        f.transfers.push_back(mint(static_cast<TokenId>(i), addr(static_cast<unsigned>(rng.between(1, 10))), t));
        if (rng.chance(0.3)) t += rng.between(0, 2 * kDay);
    }
    for (auto n = rng.between(0, 150); n > 0; --n) {
        t += rng.chance(0.2) ? 0 : rng.between(0, kDay / 2);
        const auto s = static_cast<unsigned>(rng.between(1, 10));
        auto b = static_cast<unsigned>(rng.between(1, 10));
        if (b == s) b = s % 10 + 1;
        const auto id = static_cast<TokenId>(rng.between(1, n_tokens));
        f.transfers.push_back(transfer(id, addr(s), addr(b), t));
        if (rng.chance(0.9)) f.trades.push_back(trade(id, addr(b), addr(s), std::exp(rng.uniform(-4, 9)), t));
        if (rng.chance(0.05)) f.transfers.push_back(transfer(id, addr(b), Address::dead(), t));
    }
    return f.build();
}

Timestamp last_event(const ProjectTimeline& tl) {
    Timestamp last = tl.transfers.back().event.timestamp;
    if (!tl.trades.empty()) last = std::max(last, tl.trades.back().timestamp);
    return last;
}

Outcome feature_parity() {
    Rng rng(505);
    const auto sc = synth::generate(505, balanced_counts(30, 20));
    Checks c;
    double worst = 0.0;
    for (int rep = 0; rep < 500; ++rep) {
        // Half synthetic projects, half dense random timelines with tied timestamps.
        const ProjectTimeline tl =
            rep % 2 ? sc.projects[rng.below(sc.projects.size())].timeline : random_timeline(rng);
        const Timestamp last = last_event(tl);
        const Timestamp cutoff = rng.chance(0.1) ? tl.metadata.launch_timestamp
                                                 : rng.between(tl.metadata.launch_timestamp, last + kDay);
        const auto fv = features::featurize(tl, cutoff);
        const auto want = oracle::oracle_features(tl, cutoff);
        for (std::size_t i = 0; i < features::kFeatureCount; ++i) {
            const double a = fv.values[i], b = want.values[i];
            const double err = a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b));
            worst = std::max(worst, err);
            c.expect(err <= 1e-12, std::string(features::feature_names()[i]) + " differs on pair " + std::to_string(rep));
        }

        auto future = tl;
        const Timestamp after = std::max(cutoff, last) + 1;
        future.trades.push_back(trade(1, addr(1), addr(2), 1e9, after));
        future.transfers.push_back({transfer(1, addr(2), addr(1), after), TransferKind::Swap});
        future.transfers.push_back({mint(1'000'000, addr(3), after + 1), TransferKind::Mint});
        c.expect(features::featurize(future, cutoff).values == fv.values,
                 "future records change features on pair " + std::to_string(rep));
    }
    return {c.failed == 0, "500 (timeline, cutoff) pairs x " + std::to_string(features::kFeatureCount) +
                               " features, max relative error " + fmt("%.2g", worst) + "; causality holds" +
                               (c.failed ? "; " + c.failures() : "")};
}

Outcome classifier_correctness() {
    Checks c;
    std::string detail;

    // Gradient check on the canonical feature width.
    {
        Rng rng(606);
        learn::Samples s;
        for (int i = 0; i < 200; ++i) {
            std::vector<double> row(features::kFeatureCount);
            for (auto& v : row) v = rng.normal();
            s.push_back(std::move(row), rng.chance(0.5) ? 1 : 0);
        }
        learn::LinearParams p;
        for (std::size_t k = 0; k < features::kFeatureCount; ++k) p.weights.push_back(0.3 * rng.normal());
        p.bias = 0.1;
        const double l2 = 1e-3, h = 1e-5;
        const auto g = learn::logistic_gradient(p, s, l2);
        double worst = 0.0;
        auto rel = [](double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8}); };
        for (std::size_t k = 0; k <= p.weights.size(); ++k) {
            auto plus = p, minus = p;
            double& up = k < p.weights.size() ? plus.weights[k] : plus.bias;
            double& down = k < p.weights.size() ? minus.weights[k] : minus.bias;
            up += h;
            down -= h;
            const double fd = (learn::logistic_loss(plus, s, l2) - learn::logistic_loss(minus, s, l2)) / (2 * h);
            worst = std::max(worst, rel(k < p.weights.size() ? g.weights[k] : g.bias, fd));
        }
        c.expect(worst <= 1e-5, "gradient relative error " + fmt("%.3g", worst));
        detail = "gradient max rel error " + fmt("%.2g", worst);
    }

    // Held-out F1 for every window, one synthetic corpus of 1000 scam and 1000 benign projects.
    const auto sc = synth::generate(616, balanced_counts(1000, 1000));
    std::vector<ProjectTimeline> pos, neg;
    for (const auto& p : sc.projects) (synth::is_scam(p.archetype) ? pos : neg).push_back(p.timeline);
    double min_lr = 1.0, min_svm = 1.0, max_train = 0.0;
    std::size_t rows = 0;
    for (int w : learn::kWindowHours) {
        const auto built = learn::build_dataset(pos, neg, w, sc.collection_end, 616);
        rows = std::max(rows, built.dataset.rows.size());
        const auto split = learn::split_samples(learn::to_samples(built.dataset), 616);
        for (auto kind : {learn::ModelKind::LogisticRegression, learn::ModelKind::LinearSVM}) {
            Clock clock;
            const auto model = learn::train(kind, split.train);
            const double t = clock.seconds();
            max_train = std::max(max_train, t);
            const double f1 = learn::metrics_from(learn::confusion_of(model, split.test)).f1;
            (kind == learn::ModelKind::LinearSVM ? min_svm : min_lr) =
                std::min(kind == learn::ModelKind::LinearSVM ? min_svm : min_lr, f1);
            c.expect(f1 >= 0.95, std::string(learn::to_string(kind)) + " F1 " + fmt("%.3f", f1) + " at window " +
                                     std::to_string(w));
            c.expect(t < 60.0, "training took " + fmt("%.1f s", t));
        }
    }
    detail += "; " + std::to_string(learn::kWindowHours.size()) + " windows x " + std::to_string(rows) + " rows x " +
              std::to_string(features::kFeatureCount) + " features, min held-out F1 logreg " + fmt("%.3f", min_lr) +
              " svm " + fmt("%.3f", min_svm) + ", slowest training " + fmt("%.2f s", max_train);
    return {c.failed == 0, detail + (c.failed ? "; " + c.failures() : "")};
}

// ---------------------------------------------------------------------------
// T_RP cascade

/// The cascade written out directly from its definition.
std::optional<learn::RugPullMoment> expected_moment(const ProjectTimeline& tl) {
    if (!tl.withdrawals.empty()) {
        const Withdrawal* best = &tl.withdrawals.front();
        for (const auto& w : tl.withdrawals)
            if (w.amount_wei > best->amount_wei) best = &w;
        return learn::RugPullMoment{best->timestamp, learn::TrpRule::LargestWithdrawal};
    }
    std::optional<Timestamp> post;
    for (const auto& s : tl.social) {
        const bool live = s.status != SocialStatus::Deleted && s.status != SocialStatus::Suspended;
        if (live && s.last_post_timestamp && (!post || *s.last_post_timestamp > *post)) post = s.last_post_timestamp;
    }
    if (post) return learn::RugPullMoment{*post, learn::TrpRule::LastSocialUpdate};
    std::vector<const TradeRecord*> priced;
    for (const auto& t : tl.trades)
        if (t.price_usd > 0) priced.push_back(&t);
    std::optional<Timestamp> trough;
    for (std::size_t i = 0; i < priced.size(); ++i) {
        std::size_t jmin = priced.size();
        for (std::size_t j = i + 1; j < priced.size(); ++j)
            if (jmin == priced.size() || priced[j]->price_usd < priced[jmin]->price_usd) jmin = j;
        if (jmin == priced.size()) continue;
        const double dd = (priced[i]->price_usd - priced[jmin]->price_usd) / priced[i]->price_usd;
        if (dd > 0.99 && (!trough || priced[jmin]->timestamp > *trough)) trough = priced[jmin]->timestamp;
    }
    if (trough) return learn::RugPullMoment{*trough, learn::TrpRule::LastDrawdownTrough};
    if (!tl.trades.empty()) return learn::RugPullMoment{tl.trades.back().timestamp, learn::TrpRule::LastTrade};
    return std::nullopt;
}

struct TrpFixture {
    std::string name;
    Fixture fixture;
    learn::RugPullMoment want;
};

std::vector<TrpFixture> trp_fixtures() {
    using R = learn::TrpRule;
    Fixture base;
    for (TokenId i = 1; i <= 6; ++i) base.transfers.push_back(mint(i, addr(1), kLaunch + 60));
    auto prices = [&](std::initializer_list<double> ps) {
        Fixture f = base;
        Timestamp t = kLaunch + kDay;
        TokenId id = 1;
        for (double p : ps) f.trades.push_back(trade(id++ % 6 + 1, addr(2), addr(1), p, t += kDay));
        return f;
    };
    auto w = [](Wei amount, Timestamp t) { return Withdrawal{kProject, amount, kCreator, t}; };
    auto post = [](SocialPlatform pl, SocialStatus st, std::optional<Timestamp> last, Timestamp snap) {
        return SocialSnapshot{kProject, pl, st, last, snap};
    };
    std::vector<TrpFixture> out;

    // Rule 1: the largest withdrawal, earliest among ties, wins over everything else.
    Fixture f = prices({100, 0.5});
    f.withdrawals = {w(5, kLaunch + 2 * kDay), w(9, kLaunch + 3 * kDay), w(1, kLaunch + 4 * kDay)};
    out.push_back({"largest of three withdrawals", f, {kLaunch + 3 * kDay, R::LargestWithdrawal}});
    f = base;
    f.withdrawals = {w(7, kLaunch + 5 * kDay), w(7, kLaunch + 6 * kDay)};
    f.social = {post(SocialPlatform::Twitter, SocialStatus::Active, kLaunch + 8 * kDay, kLaunch + 9 * kDay)};
    out.push_back({"tied withdrawals beat a live account", f, {kLaunch + 5 * kDay, R::LargestWithdrawal}});
    f = prices({10, 20});
    f.withdrawals = {w(~static_cast<Wei>(0), kLaunch + 7 * kDay)};
    out.push_back({"single 128-bit withdrawal", f, {kLaunch + 7 * kDay, R::LargestWithdrawal}});

    // Rule 2: latest post among live accounts.
    f = prices({100, 0.5});
    f.social = {post(SocialPlatform::Twitter, SocialStatus::Active, kLaunch + 4 * kDay, kLaunch + 20 * kDay),
                post(SocialPlatform::Discord, SocialStatus::Active, kLaunch + 6 * kDay, kLaunch + 20 * kDay)};
    out.push_back({"latest of two live accounts", f, {kLaunch + 6 * kDay, R::LastSocialUpdate}});
    f = prices({100, 0.5});
    f.social = {post(SocialPlatform::Twitter, SocialStatus::Suspended, kLaunch + 9 * kDay, kLaunch + 20 * kDay),
                post(SocialPlatform::Instagram, SocialStatus::Active, kLaunch + 2 * kDay, kLaunch + 20 * kDay)};
    out.push_back({"suspended account ignored", f, {kLaunch + 2 * kDay, R::LastSocialUpdate}});
    f = base;
    f.social = {post(SocialPlatform::Discord, SocialStatus::InviteExpired, kLaunch + 3 * kDay, kLaunch + 20 * kDay)};
    out.push_back({"expired invite still dated", f, {kLaunch + 3 * kDay, R::LastSocialUpdate}});

    // Rule 3: latest trough of a collapse above 0.99.
    f = prices({100, 0.5, 80});
    out.push_back({"single collapse", f, {kLaunch + 3 * kDay, R::LastDrawdownTrough}});
    f = prices({100, 0.5, 80, 0.2, 30});
    out.push_back({"second collapse is later", f, {kLaunch + 5 * kDay, R::LastDrawdownTrough}});
    f = prices({100, 0.9, 0.9});
    f.social = {post(SocialPlatform::Twitter, SocialStatus::Deleted, kLaunch + 9 * kDay, kLaunch + 20 * kDay)};
    out.push_back({"earliest of equal troughs, deleted account", f, {kLaunch + 3 * kDay, R::LastDrawdownTrough}});

    // Rule 4: last trade.
    f = prices({100, 1, 50});
    out.push_back({"drawdown exactly 0.99", f, {kLaunch + 4 * kDay, R::LastTrade}});
    f = prices({5, 6, 7, 8});
    out.push_back({"rising prices", f, {kLaunch + 5 * kDay, R::LastTrade}});
    f = prices({3});
    f.social = {post(SocialPlatform::Website, SocialStatus::ServerDown, std::nullopt, kLaunch + 20 * kDay)};
    out.push_back({"one trade, undated website", f, {kLaunch + 2 * kDay, R::LastTrade}});
    return out;
}

Outcome trp_cascade() {
    Checks c;
    const auto fixtures = trp_fixtures();
    std::map<learn::TrpRule, int> per_rule;
    for (const auto& fx : fixtures) {
        const auto got = learn::determine_t_rp(fx.fixture.build());
        c.expect(got == fx.want, fx.name);
        c.expect(expected_moment(fx.fixture.build()) == fx.want, "definition disagrees on " + fx.name);
        ++per_rule[fx.want.rule_used];
    }
    for (auto [rule, n] : per_rule) c.expect(n == 3, std::string(learn::to_string(rule)) + " has " + std::to_string(n));

    // Random mutations: each rule must be unreachable whenever an earlier one applies.
    Rng rng(707);
    std::map<learn::TrpRule, int> mutated_rules;
    int undetermined = 0;
    for (int rep = 0; rep < 3000; ++rep) {
        Fixture f = fixtures[rng.below(fixtures.size())].fixture;
        if (rng.chance(0.3)) f.withdrawals.clear();
        if (rng.chance(0.2))
            f.withdrawals.push_back({kProject, static_cast<Wei>(rng.between(1, 10)), kCreator,
                                     kLaunch + rng.between(1, 30) * kDay});
        if (rng.chance(0.3)) f.social.clear();
        for (auto& s : f.social)
            if (rng.chance(0.3)) s.status = static_cast<SocialStatus>(rng.below(5));
        if (rng.chance(0.2))
            f.social.push_back({kProject, SocialPlatform::Twitter, static_cast<SocialStatus>(rng.below(5)),
                                kLaunch + rng.between(1, 9) * kDay, kLaunch + 20 * kDay});
        if (rng.chance(0.2)) f.trades.clear();
        for (auto& t : f.trades) {
            if (rng.chance(0.2)) t.price_usd *= rng.chance(0.5) ? 1e-3 : 1e3;
            if (rng.chance(0.05)) t.price_usd = 0.0;
        }
        const auto tl = f.build();
        const auto got = learn::determine_t_rp(tl);
        c.expect(got == expected_moment(tl), "mutation " + std::to_string(rep));
        if (got) ++mutated_rules[got->rule_used];
        else ++undetermined;
    }
    std::string spread;
    for (auto [rule, n] : mutated_rules) spread += " " + std::string(learn::to_string(rule)) + "=" + std::to_string(n);
    return {c.failed == 0, "12 fixtures (3 per rule) resolve as documented; 3000 mutations agree with the cascade (" +
                               spread.substr(1) + ", none=" + std::to_string(undetermined) + ")" +
                               (c.failed ? "; " + c.failures() : "")};
}

// ---------------------------------------------------------------------------

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome monitor_determinism() {
    Checks c;
    const int window = 24;
    const auto train_sc = synth::generate(808, balanced_counts(300, 300));
    std::vector<ProjectTimeline> pos, neg;
    for (const auto& p : train_sc.projects) (synth::is_scam(p.archetype) ? pos : neg).push_back(p.timeline);
    const auto samples = learn::to_samples(learn::build_dataset(pos, neg, window, train_sc.collection_end).dataset);
    auto lr = learn::train(learn::ModelKind::LogisticRegression, samples);
    auto svm = learn::train(learn::ModelKind::LinearSVM, samples);
    lr.window_hours = svm.window_hours = window;

    // Scams launch in the first ten days of the replay so their rug pulls fall inside it.
    synth::GeneratorOptions opts;
    opts.scam_launch_days = std::pair{100, 110};
    const auto sc = synth::generate(818, balanced_counts(60, 60), opts);
    std::vector<ProjectTimeline> tls;
    for (const auto& p : sc.projects) tls.push_back(p.timeline);
    const auto start = std::chrono::floor<std::chrono::days>(std::chrono::sys_seconds{std::chrono::seconds{sc.start}}) +
                       std::chrono::days{100};
    const auto end = start + std::chrono::days{29};

    const fs::path dir = fs::temp_directory_path() / "rugscope_acceptance_monitor";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto replayed = monitor::replay(tls, lr, svm, start, end, {});
    monitor::save_state(dir / "replay.json", replayed.state);
    for (auto d = start; d <= end; d += std::chrono::days{1}) {
        auto state = monitor::load_state(dir / "daily.json");
        monitor::save_state(dir / "daily.json", monitor::run_daily(tls, lr, svm, d, std::move(state)).state);
    }
    const auto a = read_file(dir / "replay.json"), b = read_file(dir / "daily.json");
    c.expect(!a.empty() && a == b, "state files differ");
    fs::remove_all(dir);

    std::size_t scams = 0, early = 0, outside = 0;
    for (const auto& p : sc.projects) {
        if (!p.t_rp) continue;
        if (*p.t_rp > monitor::midnight(end)) {
            ++outside;
            continue;
        }
        ++scams;
        const auto it = replayed.state.alarms.find(p.timeline.project());
        if (it != replayed.state.alarms.end() && monitor::midnight(it->second.first_alarm_date) <= *p.t_rp) ++early;
    }
    const double share = scams ? static_cast<double>(early) / static_cast<double>(scams) : 0.0;
    c.expect(share >= 0.90, "early share " + fmt("%.3f", share));
    c.expect(outside == 0, std::to_string(outside) + " rug pulls after the replay");
    return {c.failed == 0, "state bytes equal (" + std::to_string(a.size()) + " B); first alarm <= t_rp for " +
                               std::to_string(early) + "/" + std::to_string(scams) + " scams (" +
                               fmt("%.1f%%", 100 * share) + ")" + (c.failed ? "; " + c.failures() : "")};
}

template <typename Record>
void round_trip(Checks& c, const fs::path& file,
                std::vector<Record> (*parse)(std::istream&), std::size_t& records) {
    std::ifstream in(file);
    const auto first = parse(in);
    const auto text = ingest::serialize_lines(first);
    std::istringstream again(text);
    const auto second = parse(again);
    c.expect(second == first, "records change on " + file.filename().string());
    c.expect(ingest::serialize_lines(second) == text, "text is not a fixpoint on " + file.filename().string());
    records += first.size();
}

Outcome ingest_round_trip() {
    Checks c;
    const fs::path root(RUGSCOPE_FIXTURES);
    std::size_t records = 0, files = 0;
    const std::map<std::string, std::function<void(const fs::path&)>> parsers{
        {"transfers", [&](const fs::path& p) { round_trip(c, p, ingest::parse_transfers, records); }},
        {"trades", [&](const fs::path& p) { round_trip(c, p, ingest::parse_trades, records); }},
        {"approvals", [&](const fs::path& p) { round_trip(c, p, ingest::parse_approvals, records); }},
        {"social", [&](const fs::path& p) { round_trip(c, p, ingest::parse_social, records); }},
        {"metadata", [&](const fs::path& p) { round_trip(c, p, ingest::parse_metadata, records); }},
        {"uri_changes", [&](const fs::path& p) { round_trip(c, p, ingest::parse_uri_changes, records); }},
        {"withdrawals", [&](const fs::path& p) { round_trip(c, p, ingest::parse_withdrawals, records); }},
        {"direct_payments", [&](const fs::path& p) { round_trip(c, p, ingest::parse_direct_payments, records); }},
    };
    for (const auto& e : fs::directory_iterator(root / "valid")) {
        if (e.path().extension() != ".jsonl") continue;
        parsers.at(e.path().stem().string())(e.path());
        ++files;
    }
    c.expect(files == parsers.size(), "expected one fixture per record type");

    // Malformed fixtures: <type>__<case>.jsonl with line and reason listed in expected.tsv.
    std::ifstream tsv(root / "malformed" / "expected.tsv");
    std::string line;
    std::size_t malformed = 0;
    while (std::getline(tsv, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string file, line_no, reason;
        std::getline(row, file, '\t');
        std::getline(row, line_no, '\t');
        std::getline(row, reason);
        const auto path = root / "malformed" / file;
        const auto type = file.substr(0, file.find("__"));
        ++malformed;
        try {
            std::size_t ignored = 0;
            Checks scratch;
            if (type == "transfers") round_trip(scratch, path, ingest::parse_transfers, ignored);
            else if (type == "trades") round_trip(scratch, path, ingest::parse_trades, ignored);
            else if (type == "approvals") round_trip(scratch, path, ingest::parse_approvals, ignored);
            else if (type == "social") round_trip(scratch, path, ingest::parse_social, ignored);
            else if (type == "metadata") round_trip(scratch, path, ingest::parse_metadata, ignored);
            else if (type == "uri_changes") round_trip(scratch, path, ingest::parse_uri_changes, ignored);
            else if (type == "withdrawals") round_trip(scratch, path, ingest::parse_withdrawals, ignored);
            else if (type == "direct_payments") round_trip(scratch, path, ingest::parse_direct_payments, ignored);
            c.expect(false, file + " parsed without error");
        } catch (const ParseError& e) {
            c.expect(e.line() == std::stoul(line_no),
                     file + " reported line " + std::to_string(e.line()) + ", expected " + line_no);
            c.expect(e.reason().find(reason) != std::string::npos, file + " reason '" + e.reason() + "'");
        }
    }
    return {c.failed == 0 && malformed > 0,
            std::to_string(files) + " fixture files (" + std::to_string(records) + " records) are a fixpoint; " +
                std::to_string(malformed) + " malformed fixtures report the expected line" +
                (c.failed ? "; " + c.failures() : "")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"detector oracle suite", detector_suite},
        {"drawdown/recovery equivalence", drawdown_equivalence},
        {"threshold fidelity", threshold_fidelity},
        {"levenshtein ratio", levenshtein_suite},
        {"feature parity", feature_parity},
        {"classifier correctness", classifier_correctness},
        {"t_rp cascade", trp_cascade},
        {"monitor determinism", monitor_determinism},
        {"ingest round-trip", ingest_round_trip},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    return failed ? 1 : 0;
}
