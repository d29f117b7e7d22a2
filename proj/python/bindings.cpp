#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rugscope/detector.hpp"
#include "rugscope/error.hpp"
#include "rugscope/features.hpp"
#include "rugscope/ingest.hpp"
#include "rugscope/learn.hpp"
#include "rugscope/levenshtein.hpp"
#include "rugscope/model.hpp"
#include "rugscope/monitor.hpp"
#include "rugscope/synth.hpp"
#include "rugscope/tricks.hpp"

namespace py = pybind11;
using namespace rugscope;

namespace {

learn::Samples to_samples(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
    if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "x and y lengths differ");
    learn::Samples s;
    for (std::size_t i = 0; i < x.size(); ++i) s.push_back(x[i], y[i]);
    return s;
}

std::vector<double> values(const features::FeatureVector& fv) { return {fv.values.begin(), fv.values.end()}; }

}  // namespace

PYBIND11_MODULE(_rugscope, m) {
    m.doc() = "Rug-pull detection for NFT projects";

    static py::exception<Error> error(m, "Error");
    static py::exception<ParseError> parse_error(m, "ParseError", error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            parse_error(e.what());
        } catch (const Error& e) {
            error(e.what());
        }
    });

    py::class_<ProjectTimeline>(m, "Timeline")
        .def_property_readonly("project", [](const ProjectTimeline& t) { return t.project().to_string(); })
        .def_property_readonly("name", [](const ProjectTimeline& t) { return t.metadata.name; })
        .def_property_readonly("launch", [](const ProjectTimeline& t) { return t.metadata.launch_timestamp; })
        .def_property_readonly("transfer_count", [](const ProjectTimeline& t) { return t.transfers.size(); })
        .def_property_readonly("trade_count", [](const ProjectTimeline& t) { return t.trades.size(); })
        .def("__repr__", [](const ProjectTimeline& t) {
            return "<Timeline " + t.project().to_string() + " '" + t.metadata.name + "'>";
        });

    m.def("load_timelines", [](const std::filesystem::path& manifest) {
        return ingest::load_timelines(ingest::load_manifest(manifest));
    }, py::arg("manifest"));

    m.def("detect_json", [](const ProjectTimeline& tl, Timestamp asof, double drawdown, double recovery,
                            double liveness, int inactivity_days) {
        detector::DetectorConfig cfg{drawdown, recovery, liveness, inactivity_days};
        return detector::report_to_json_line(detector::detect_rug_pull(tl, asof, cfg));
    }, py::arg("timeline"), py::arg("asof"), py::arg("drawdown") = 0.99, py::arg("recovery") = 0.01,
       py::arg("liveness") = 0.99, py::arg("inactivity_days") = 30);

    m.def("tricks_json", [](const ProjectTimeline& tl, const std::vector<std::string>& reference_names,
                            std::size_t wash_threshold) {
        tricks::TrickConfig cfg;
        cfg.wash_threshold = wash_threshold;
        return tricks::report_to_json_line(tricks::analyze_tricks(tl, reference_names, cfg));
    }, py::arg("timeline"), py::arg("reference_names") = std::vector<std::string>{}, py::arg("wash_threshold") = 10);

    m.def("drawdowns", [](const std::vector<double>& prices) {
        detector::PriceSequence seq;
        for (std::size_t i = 0; i < prices.size(); ++i) seq.push_back({1, prices[i], static_cast<Timestamp>(i)});
        return detector::drawdown_sequence(seq);
    }, py::arg("prices"));

    m.def("levenshtein_ratio", &levenshtein_ratio, py::arg("a"), py::arg("b"));

    m.def("feature_names", [] {
        const auto& n = features::feature_names();
        return std::vector<std::string>(n.begin(), n.end());
    });
    m.def("featurize", [](const ProjectTimeline& tl, Timestamp cutoff) { return values(features::featurize(tl, cutoff)); },
          py::arg("timeline"), py::arg("cutoff"));

    m.def("determine_t_rp", [](const ProjectTimeline& tl) -> std::optional<std::pair<Timestamp, std::string>> {
        const auto moment = learn::determine_t_rp(tl);
        if (!moment) return std::nullopt;
        return std::pair{moment->t_rp, std::string(learn::to_string(moment->rule_used))};
    }, py::arg("timeline"));

    py::class_<learn::Model>(m, "Model")
        .def_property_readonly("kind", [](const learn::Model& md) { return std::string(learn::to_string(md.kind)); })
        .def_property_readonly("dim", [](const learn::Model& md) { return md.dim; })
        .def_readwrite("window_hours", &learn::Model::window_hours)
        .def("predict", [](const learn::Model& md, const std::vector<double>& row) {
            const auto p = learn::predict(md, row);
            return std::pair{p.positive, p.score};
        }, py::arg("row"))
        .def("save", [](const learn::Model& md, const std::filesystem::path& path) { learn::save_model(path, md); },
             py::arg("path"));

    m.def("train", [](const std::string& kind, const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                      std::uint64_t seed, bool balance_classes, int trees) {
        learn::TrainConfig cfg;
        cfg.seed = seed;
        cfg.balance_classes = balance_classes;
        cfg.forest_trees = trees;
        return learn::train(learn::parse_model_kind(kind), to_samples(x, y), cfg);
    }, py::arg("kind"), py::arg("x"), py::arg("y"), py::arg("seed") = 0, py::arg("balance_classes") = false,
       py::arg("trees") = 100);
    m.def("load_model", &learn::load_model, py::arg("path"));

    m.def("build_dataset", [](const std::vector<ProjectTimeline>& positives, const std::vector<ProjectTimeline>& negatives,
                              int window_hours, Timestamp collection_end) {
        const auto built = learn::build_dataset(positives, negatives, window_hours, collection_end);
        std::vector<std::vector<double>> x;
        std::vector<int> y;
        for (const auto& r : built.dataset.rows) {
            x.push_back(values(r.features));
            y.push_back(r.positive ? 1 : 0);
        }
        return std::pair{x, y};
    }, py::arg("positives"), py::arg("negatives"), py::arg("window_hours"), py::arg("collection_end"));

    m.def("monitor_replay", [](const std::vector<ProjectTimeline>& projects, const learn::Model& logreg,
                               const learn::Model& svm, const std::string& start, const std::string& end,
                               const std::string& state_json, const std::string& format) {
        const auto state = state_json.empty() ? monitor::MonitorState{} : monitor::state_from_json(state_json);
        const auto r = monitor::replay(projects, logreg, svm, monitor::parse_date(start), monitor::parse_date(end), state);
        return std::pair{monitor::state_to_json(r.state),
                         monitor::render_report(r.reports, monitor::parse_report_format(format))};
    }, py::arg("projects"), py::arg("logreg"), py::arg("svm"), py::arg("start"), py::arg("end"),
       py::arg("state_json") = "", py::arg("format") = "jsonl");

    py::class_<synth::GeneratedProject>(m, "GeneratedProject")
        .def_readonly("timeline", &synth::GeneratedProject::timeline)
        .def_property_readonly("archetype", [](const synth::GeneratedProject& p) { return std::string(synth::to_string(p.archetype)); })
        .def_property_readonly("is_scam", [](const synth::GeneratedProject& p) { return synth::is_scam(p.archetype); })
        .def_readonly("t_rp", &synth::GeneratedProject::t_rp);

    py::class_<synth::Scenario>(m, "Scenario")
        .def_readonly("seed", &synth::Scenario::seed)
        .def_readonly("start", &synth::Scenario::start)
        .def_readonly("collection_end", &synth::Scenario::collection_end)
        .def_readonly("projects", &synth::Scenario::projects)
        .def_readonly("reference_names", &synth::Scenario::reference_names)
        .def("write", [](const synth::Scenario& s, const std::filesystem::path& dir) { synth::write_scenario(s, dir); },
             py::arg("dir"));

    m.def("generate", [](std::uint64_t seed, const std::string& counts, int horizon_days) {
        return synth::generate(seed, synth::parse_counts(counts), horizon_days);
    }, py::arg("seed"), py::arg("counts"), py::arg("horizon_days") = 180);
}
