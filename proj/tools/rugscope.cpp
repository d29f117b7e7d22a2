#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "rugscope/detector.hpp"
#include "rugscope/error.hpp"
#include "rugscope/features.hpp"
#include "rugscope/ingest.hpp"
#include "rugscope/learn.hpp"
#include "rugscope/model.hpp"
#include "rugscope/monitor.hpp"
#include "rugscope/synth.hpp"
#include "rugscope/tricks.hpp"

using namespace rugscope;
namespace fs = std::filesystem;

namespace {

std::vector<ProjectTimeline> load_projects(const fs::path& manifest) {
    return ingest::load_timelines(ingest::load_manifest(manifest));
}

std::map<Address, synth::Label> load_labels(const fs::path& path) {
    std::map<Address, synth::Label> out;
    for (const auto& l : synth::read_labels(path)) out[l.project] = l;
    return out;
}

/// Joins feature rows with their labels; rows without a label are an error.
learn::Samples labeled_samples(const std::vector<features::FeatureVector>& rows,
                               const std::map<Address, synth::Label>& labels) {
    learn::Samples samples;
    for (const auto& fv : rows) {
        auto it = labels.find(fv.project);
        if (it == labels.end())
            throw Error(ErrorCode::InvalidArgument, "no label for project " + fv.project.to_string());
        samples.push_back(std::vector<double>(fv.values.begin(), fv.values.end()),
                          synth::is_scam(it->second.archetype) ? 1 : 0);
    }
    return samples;
}

/// A bare integer applies to every project; otherwise a project,cutoff CSV.
std::map<Address, Timestamp> read_cutoffs(const std::string& arg, const std::vector<ProjectTimeline>& projects) {
    std::map<Address, Timestamp> out;
    try {
        std::size_t used = 0;
        const Timestamp t = std::stoll(arg, &used);
        if (used == arg.size()) {
            for (const auto& p : projects) out[p.project()] = t;
            return out;
        }
    } catch (const std::logic_error&) {
    }
    std::ifstream in(arg);
    if (!in) throw Error(ErrorCode::Io, "cutoff '" + arg + "' is neither a timestamp nor a readable file");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (line_no == 1 && line.rfind("project", 0) == 0)) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError(line_no, "expected project,cutoff");
        auto addr = Address::parse(line.substr(0, comma));
        if (!addr) throw ParseError(line_no, "invalid project address");
        try {
            out[*addr] = std::stoll(line.substr(comma + 1));
        } catch (const std::logic_error&) {
            throw ParseError(line_no, "cutoff is not an integer");
        }
    }
    return out;
}

nlohmann::json metrics_json(const learn::Metrics& m) {
    return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

nlohmann::json cv_json(const learn::CrossValidation& cv) {
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& f : cv.folds) folds.push_back(metrics_json(f));
    return {{"folds", folds}, {"pooled", metrics_json(cv.pooled)}};
}

std::pair<int, int> parse_day_range(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "day range must be FIRST:LAST");
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NFT rug-pull detection, trick analysis and early warning"};
    app.require_subcommand(1);

    // detect
    auto* detect = app.add_subcommand("detect", "Run the four-checker detector over every project");
    std::string manifest, out;
    Timestamp asof = 0;
    detector::DetectorConfig dcfg;
    detect->add_option("--manifest", manifest)->required();
    detect->add_option("--asof", asof)->required();
    detect->add_option("--drawdown", dcfg.drawdown_threshold, "drawdown threshold")->capture_default_str();
    detect->add_option("--recovery", dcfg.recovery_threshold, "recovery threshold")->capture_default_str();
    detect->add_option("--liveness", dcfg.liveness_threshold, "liveness threshold")->capture_default_str();
    detect->add_option("--inactivity-days", dcfg.inactivity_days)->capture_default_str();
    detect->add_option("--out", out)->required();

    // tricks
    auto* tricks_cmd = app.add_subcommand("tricks", "Run the trick analyzers over every project");
    std::string reference_names;
    tricks::TrickConfig tcfg;
    tricks_cmd->add_option("--manifest", manifest)->required();
    tricks_cmd->add_option("--reference-names", reference_names)->required();
    tricks_cmd->add_option("--wash-threshold", tcfg.wash_threshold)->capture_default_str();
    tricks_cmd->add_option("--ratio-high", tcfg.ratio_high)->capture_default_str();
    tricks_cmd->add_option("--ratio-medium", tcfg.ratio_medium)->capture_default_str();
    tricks_cmd->add_flag("--wyvern-only", tcfg.creator_fee_wyvern_only, "count creator fees from Wyvern trades only");
    tricks_cmd->add_option("--out", out)->required();

    // featurize
    auto* featurize = app.add_subcommand("featurize", "Extract the feature vector of every project");
    std::string cutoff_arg;
    featurize->add_option("--manifest", manifest)->required();
    featurize->add_option("--cutoff", cutoff_arg, "unix timestamp, or a project,cutoff CSV")->required();
    featurize->add_option("--out", out)->required();

    // dataset
    auto* dataset = app.add_subcommand("dataset", "Featurize labeled projects at t_rp - window and collection end");
    std::string labels_path, dropped_path;
    int window = 0;
    Timestamp collection_end = 0;
    dataset->add_option("--manifest", manifest)->required();
    dataset->add_option("--labels", labels_path)->required();
    dataset->add_option("--window", window, "hours before the rug-pull moment")->required();
    dataset->add_option("--collection-end", collection_end)->required();
    dataset->add_option("--dropped", dropped_path, "write dropped projects here");
    dataset->add_option("--out", out)->required();

    // train
    auto* train = app.add_subcommand("train", "Train a classifier on the 80% split of a feature file");
    std::string features_path, model_kind;
    learn::TrainConfig lcfg;
    train->add_option("--features", features_path)->required();
    train->add_option("--labels", labels_path)->required();
    train->add_option("--window", window)->required();
    train->add_option("--model", model_kind)->required()->check(CLI::IsMember({"logreg", "svm", "forest"}));
    train->add_option("--seed", lcfg.seed)->capture_default_str();
    train->add_option("--epochs", lcfg.logreg_epochs, "gradient-descent epochs (logreg)")->capture_default_str();
    train->add_option("--trees", lcfg.forest_trees)->capture_default_str();
    train->add_flag("--balance-classes", lcfg.balance_classes);
    train->add_option("--out", out)->required();

    // eval
    auto* eval = app.add_subcommand("eval", "Cross-validate a model configuration and score the held-out split");
    std::string model_path;
    std::size_t folds = 5;
    eval->add_option("--model", model_path)->required();
    eval->add_option("--features", features_path)->required();
    eval->add_option("--labels", labels_path)->required();
    eval->add_option("--folds", folds)->capture_default_str();
    eval->add_option("--out", out, "write the metrics JSON here instead of stdout");

    // monitor / replay
    std::string logreg_path, svm_path, state_path, date_arg, from_arg, to_arg, format_arg = "jsonl";
    auto* monitor = app.add_subcommand("monitor", "Score every project at midnight UTC of one day");
    monitor->add_option("--manifest", manifest)->required();
    monitor->add_option("--logreg", logreg_path)->required();
    monitor->add_option("--svm", svm_path)->required();
    monitor->add_option("--date", date_arg)->required();
    monitor->add_option("--state", state_path)->required();
    monitor->add_option("--format", format_arg)->check(CLI::IsMember({"jsonl", "csv", "text"}))->capture_default_str();
    monitor->add_option("--out", out)->required();

    auto* replay = app.add_subcommand("replay", "Run the daily monitor over a date range");
    replay->add_option("--manifest", manifest)->required();
    replay->add_option("--logreg", logreg_path)->required();
    replay->add_option("--svm", svm_path)->required();
    replay->add_option("--from", from_arg)->required();
    replay->add_option("--to", to_arg)->required();
    replay->add_option("--state", state_path)->required();
    replay->add_option("--format", format_arg)->check(CLI::IsMember({"jsonl", "csv", "text"}))->capture_default_str();
    replay->add_option("--out", out)->required();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic scenario");
    std::uint64_t seed = 0;
    std::string counts_arg, out_dir, scam_days, benign_days;
    synth::GeneratorOptions gopt;
    synth_cmd->add_option("--seed", seed)->required();
    synth_cmd->add_option("--counts", counts_arg, "e.g. PumpAndDump=10,BenignStable=20")->required();
    synth_cmd->add_option("--horizon-days", gopt.horizon_days)->capture_default_str();
    synth_cmd->add_option("--start", gopt.start, "unix timestamp of day 0")->capture_default_str();
    synth_cmd->add_option("--scam-launch-days", scam_days, "FIRST:LAST days after start");
    synth_cmd->add_option("--benign-launch-days", benign_days, "FIRST:LAST days after start");
    synth_cmd->add_option("--out-dir", out_dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect->parsed()) {
            std::string lines;
            for (const auto& tl : load_projects(manifest))
                lines += detector::report_to_json_line(detector::detect_rug_pull(tl, asof, dcfg)) + "\n";
            ingest::write_text_file(out, lines);
        } else if (tricks_cmd->parsed()) {
            const auto names = synth::read_reference_names(reference_names);
            std::string lines;
            for (const auto& tl : load_projects(manifest))
                lines += tricks::report_to_json_line(tricks::analyze_tricks(tl, names, tcfg)) + "\n";
            ingest::write_text_file(out, lines);
        } else if (featurize->parsed()) {
            const auto projects = load_projects(manifest);
            const auto cutoffs = read_cutoffs(cutoff_arg, projects);
            std::vector<features::FeatureVector> rows;
            for (const auto& tl : projects) {
                auto it = cutoffs.find(tl.project());
                if (it == cutoffs.end()) {
                    std::cerr << "warning: no cutoff for " << tl.project().to_string() << ", skipped\n";
                    continue;
                }
                if (it->second < tl.metadata.launch_timestamp) {
                    std::cerr << "warning: cutoff precedes launch of " << tl.project().to_string() << ", skipped\n";
                    continue;
                }
                rows.push_back(features::featurize(tl, it->second));
            }
            features::write_csv(out, rows);
        } else if (dataset->parsed()) {
            const auto labels = load_labels(labels_path);
            std::vector<ProjectTimeline> pos, neg;
            for (auto& tl : load_projects(manifest)) {
                auto it = labels.find(tl.project());
                if (it == labels.end()) {
                    std::cerr << "warning: unlabeled project " << tl.project().to_string() << ", skipped\n";
                    continue;
                }
                (synth::is_scam(it->second.archetype) ? pos : neg).push_back(std::move(tl));
            }
            const auto build = learn::build_dataset(pos, neg, window, collection_end);
            std::vector<features::FeatureVector> rows;
            for (const auto& r : build.dataset.rows) rows.push_back(r.features);
            features::write_csv(out, rows);
            std::string dropped = "project,reason\n";
            for (const auto& d : build.dropped) {
                std::cerr << "warning: dropped " << d.project.to_string() << ": " << d.reason << "\n";
                dropped += d.project.to_string() + "," + d.reason + "\n";
            }
            if (!dropped_path.empty()) ingest::write_text_file(dropped_path, dropped);
        } else if (train->parsed()) {
            if (!learn::is_supported_window(window))
                throw Error(ErrorCode::InvalidArgument, "unsupported window of " + std::to_string(window) + " hours");
            const auto samples = labeled_samples(features::read_csv(fs::path(features_path)), load_labels(labels_path));
            const auto split = learn::split_samples(samples, lcfg.seed);
            auto model = learn::train(learn::parse_model_kind(model_kind), split.train, lcfg);
            model.window_hours = window;
            learn::save_model(out, model);
            const auto held = learn::metrics_from(learn::confusion_of(model, split.test));
            std::cerr << "held-out: precision " << held.precision << ", recall " << held.recall << ", f1 " << held.f1
                      << " (" << split.test.size() << " rows)\n";
        } else if (eval->parsed()) {
            const auto model = learn::load_model(model_path);
            const auto samples = labeled_samples(features::read_csv(fs::path(features_path)), load_labels(labels_path));
            const auto ev = learn::evaluate(model, samples, folds, model.config.seed);
            const nlohmann::json j{{"model", learn::to_string(model.kind)},
                                   {"window_hours", model.window_hours},
                                   {"folds", folds},
                                   {"cv_training_split", cv_json(ev.on_training_split)},
                                   {"cv_all_rows", cv_json(ev.on_all_rows)},
                                   {"held_out", metrics_json(ev.held_out)}};
            if (out.empty())
                std::cout << j.dump(2) << "\n";
            else
                ingest::write_text_file(out, j.dump(2) + "\n");
        } else if (monitor->parsed() || replay->parsed()) {
            const auto projects = load_projects(manifest);
            const auto lr = learn::load_model(logreg_path);
            const auto sv = learn::load_model(svm_path);
            auto state = monitor::load_state(state_path);
            std::vector<monitor::AlarmReport> reports;
            if (monitor->parsed()) {
                auto daily = monitor::run_daily(projects, lr, sv, monitor::parse_date(date_arg), std::move(state));
                state = std::move(daily.state);
                reports.push_back(std::move(daily.report));
            } else {
                auto result = monitor::replay(projects, lr, sv, monitor::parse_date(from_arg),
                                              monitor::parse_date(to_arg), std::move(state));
                state = std::move(result.state);
                reports = std::move(result.reports);
            }
            monitor::save_state(state_path, state);
            monitor::emit_report(out, reports, monitor::parse_report_format(format_arg));
            const bool alarms = std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.any(); });
            return alarms ? 2 : 0;
        } else if (synth_cmd->parsed()) {
            if (!scam_days.empty()) gopt.scam_launch_days = parse_day_range(scam_days);
            if (!benign_days.empty()) gopt.benign_launch_days = parse_day_range(benign_days);
            const auto scenario = synth::generate(seed, synth::parse_counts(counts_arg), gopt);
            synth::write_scenario(scenario, out_dir);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
