#include "lack/experiment.hpp"

#include "lack/error.hpp"
#include "lack/rng.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lack::cli {
namespace {

using nlohmann::json;

std::string num(double v) {
    if (std::isnan(v)) return "";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

json blob_to_json(const BlobSpec& b) {
    json j{{"num_classes", b.num_classes},
           {"n_per_class", b.n_per_class},
           {"dims", b.dims},
           {"separation", b.separation},
           {"spread", b.spread},
           {"seed", b.seed}};
    if (!b.view_separation.empty()) j["view_separation"] = b.view_separation;
    return j;
}

BlobSpec blob_from_json(const json& j) {
    BlobSpec b;
    b.num_classes = j.at("num_classes").get<int>();
    const auto& n = j.at("n_per_class");
    b.n_per_class = n.is_array() ? n.get<std::vector<std::size_t>>()
                                 : std::vector<std::size_t>{n.get<std::size_t>()};
    b.dims = j.at("dims").get<std::vector<Index>>();
    b.separation = j.value("separation", b.separation);
    b.spread = j.value("spread", b.spread);
    b.seed = j.value("seed", b.seed);
    if (j.contains("view_separation"))
        b.view_separation = j["view_separation"].get<std::vector<double>>();
    return b;
}

json corruption_to_json(const Corruption& c) {
    if (const auto* f = std::get_if<FakeViewCorruption>(&c)) {
        json j{{"type", "fake_view"}, {"dim", f->dim}, {"rank", f->rank}, {"seed", f->seed}};
        if (f->target_frobenius) j["target_frobenius"] = *f->target_frobenius;
        return j;
    }
    const auto& n = std::get<NoiseCorruption>(c);
    return {{"type", "noise"}, {"view_ids", n.view_ids}, {"snr", n.snr}, {"seed", n.seed}};
}

Corruption corruption_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "fake_view") {
        FakeViewCorruption f;
        f.dim = j.at("dim").get<Index>();
        f.rank = j.at("rank").get<Index>();
        f.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("target_frobenius")) f.target_frobenius = j["target_frobenius"].get<double>();
        return f;
    }
    if (type == "noise") {
        NoiseCorruption n;
        n.view_ids = j.at("view_ids").get<std::vector<std::size_t>>();
        n.snr = j.value("snr", 1.0);
        n.seed = j.value("seed", std::uint64_t{0});
        return n;
    }
    throw ValidationError("unknown corruption type '" + type + "'");
}

json config_json(const ExperimentConfig& cfg) {
    json j;
    if (cfg.dataset) j["dataset"] = cfg.dataset->string();
    if (cfg.blobs) j["blobs"] = blob_to_json(*cfg.blobs);
    j["tau"] = cfg.tau;
    j["seeds"] = cfg.seeds;
    j["methods"] = json::array();
    for (Method m : cfg.methods) j["methods"].push_back(to_string(m));
    j["corruptions"] = json::array();
    for (const auto& c : cfg.corruptions) j["corruptions"].push_back(corruption_to_json(c));
    j["out"] = cfg.out.string();
    j["max_iter"] = cfg.max_iter;
    j["labels"] = cfg.fixed_labels ? "fixed" : "resample";
    j["label_seed"] = cfg.label_seed;
    j["normalize"] = cfg.normalize;
    j["format"] = to_string(cfg.format);
    j["labeled_argmin"] =
        cfg.labeled_argmin == LabeledArgminMode::PerView ? "per_view" : "weighted_sum";
    return j;
}

std::string hash_of(const std::string& text) {
    const std::array<std::string, 1> one{text};
    return hex64(content_hash(one));
}

// shifted by the first value, so identical runs give that value exactly
double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x - v.front();
    return v.front() + s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

json report_json(const EvalReport& r) {
    return {{"acc", r.acc},
            {"f_score", r.pairwise.f_score},
            {"precision", r.pairwise.precision},
            {"recall", r.pairwise.recall},
            {"f_score_variant", "pairwise"},
            {"macro", {{"f_score", r.macro.f_score},
                       {"precision", r.macro.precision},
                       {"recall", r.macro.recall}}},
            {"n_eval", r.n_eval}};
}

std::string trace_csv(const SolveResult& res, const std::vector<std::string>& view_names,
                      const std::string& header_comment) {
    std::ostringstream out;
    out << "# " << kTraceSchema << '\n' << "# " << header_comment << '\n';
    out << "iteration";
    for (std::size_t p = 0; p < view_names.size(); ++p) out << ",d_" << (p + 1);
    out << ",objective,changed,wall_time_s\n";
    out << 0;
    for (double w : res.trace.initial_weights) out << ',' << num(w);
    out << ",,,\n";
    for (const auto& rec : res.trace.records) {
        out << rec.iteration;
        for (double w : rec.weights) out << ',' << num(w);
        out << ',' << num(rec.objective) << ',' << rec.changed << ',' << num(rec.wall_seconds) << '\n';
    }
    return out.str();
}

}  // namespace

Method parse_method(const std::string& s) {
    if (s == "MLCK") return Method::MLCK;
    if (s == "DACK") return Method::DACK;
    if (s == "LACK") return Method::LACK;
    if (s == "CK") return Method::CK;
    if (s == "KMEANS_PER_VIEW") return Method::KMeansPerView;
    throw ValidationError("unknown method '" + s + "' (MLCK, DACK, LACK, CK, KMEANS_PER_VIEW)");
}

const char* to_string(Method m) {
    switch (m) {
        case Method::MLCK: return "MLCK";
        case Method::DACK: return "DACK";
        case Method::LACK: return "LACK";
        case Method::CK: return "CK";
        case Method::KMeansPerView: return "KMEANS_PER_VIEW";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (methods.empty()) throw ValidationError("at least one method is required");
    if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("tau must lie in (0, 1]");
    if (seeds.empty()) throw ValidationError("at least one seed is required");
    if (max_iter < 1) throw ValidationError("max_iter must be at least 1");
    if (blobs) blobs->validate();
}

ExperimentConfig parse_config(const std::string& json_text, const fs::path& base_dir) {
    ExperimentConfig cfg;
    try {
        const json j = json::parse(json_text);
        auto resolve = [&](const std::string& p) {
            const fs::path path(p);
            return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
        };
        if (j.contains("dataset")) cfg.dataset = resolve(j["dataset"].get<std::string>());
        if (j.contains("blobs")) cfg.blobs = blob_from_json(j["blobs"]);
        cfg.tau = j.value("tau", cfg.tau);
        if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        if (j.contains("methods")) {
            cfg.methods.clear();
            for (const auto& m : j["methods"]) cfg.methods.push_back(parse_method(m.get<std::string>()));
        }
        if (j.contains("corruptions"))
            for (const auto& c : j["corruptions"]) cfg.corruptions.push_back(corruption_from_json(c));
        if (j.contains("out")) cfg.out = resolve(j["out"].get<std::string>());
        cfg.max_iter = j.value("max_iter", cfg.max_iter);
        if (j.contains("labels")) {
            const auto mode = j["labels"].get<std::string>();
            if (mode != "fixed" && mode != "resample")
                throw ValidationError("labels must be \"fixed\" or \"resample\"");
            cfg.fixed_labels = mode == "fixed";
        }
        cfg.label_seed = j.value("label_seed", cfg.label_seed);
        cfg.normalize = j.value("normalize", cfg.normalize);
        if (j.contains("format")) cfg.format = parse_matrix_format(j["format"].get<std::string>());
        if (j.contains("labeled_argmin")) {
            const auto mode = j["labeled_argmin"].get<std::string>();
            if (mode == "per_view")
                cfg.labeled_argmin = LabeledArgminMode::PerView;
            else if (mode == "weighted_sum")
                cfg.labeled_argmin = LabeledArgminMode::WeightedSum;
            else
                throw ValidationError("labeled_argmin must be per_view or weighted_sum");
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

std::string to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

MultiViewDataset apply_corruptions(const MultiViewDataset& ds,
                                   const std::vector<Corruption>& corruptions) {
    MultiViewDataset out = ds;
    for (const auto& c : corruptions) {
        if (const auto* f = std::get_if<FakeViewCorruption>(&c)) {
            Matrix fake = make_fake_view(out.num_samples(), f->rank, f->dim, f->seed, f->target_frobenius);
            out = append_view(out, std::move(fake), "fake" + std::to_string(out.num_views() + 1));
        } else {
            const auto& n = std::get<NoiseCorruption>(c);
            for (std::size_t p : n.view_ids) {
                if (p >= out.num_views())
                    throw ValidationError("noise corruption names view " + std::to_string(p) +
                                          " but the dataset has " + std::to_string(out.num_views()) +
                                          " views (ids are 0-based)");
                out = replace_view(out, p, add_gaussian_noise_snr(out.view(p), n.snr, n.seed + p));
            }
        }
    }
    return out;
}

LoadedData resolve_data(const ExperimentConfig& cfg) {
    LoadedData data;
    if (cfg.dataset) {
        data.dataset = load_dataset(*cfg.dataset);
        data.labels = load_labels(*cfg.dataset);
    } else if (cfg.blobs) {
        BlobData blobs = gen_blobs(*cfg.blobs);
        data.dataset = std::move(blobs.dataset);
        data.labels.ids = std::move(blobs.labels);
        for (int k = 0; k < cfg.blobs->num_classes; ++k)
            data.labels.class_names.push_back(std::to_string(k));
    } else {
        throw ValidationError("config names neither a dataset manifest nor a blob spec");
    }
    if (static_cast<Index>(data.labels.ids.size()) != data.dataset.num_samples())
        throw ValidationError("label file has " + std::to_string(data.labels.ids.size()) +
                              " entries but the dataset has " +
                              std::to_string(data.dataset.num_samples()) + " samples");
    data.dataset = apply_corruptions(data.dataset, cfg.corruptions);
    return data;
}

fs::path cmd_gen(const ExperimentConfig& cfg) {
    if (!cfg.blobs) throw ValidationError("gen needs a \"blobs\" spec");
    ExperimentConfig gen_cfg = cfg;
    gen_cfg.dataset.reset();
    const LoadedData data = resolve_data(gen_cfg);
    std::vector<std::string> tokens;
    for (ClassId k : data.labels.ids) tokens.push_back(data.labels.class_names[k]);

    json prov{{"generator", "blobs"},
              {"blobs", blob_to_json(*cfg.blobs)},
              {"rng", Philox::kName},
              {"content_hash", hex64(content_hash(data.dataset))}};
    if (!cfg.corruptions.empty()) {
        prov["corruptions"] = json::array();
        for (const auto& c : cfg.corruptions) prov["corruptions"].push_back(corruption_to_json(c));
    }
    return save_dataset(cfg.out, data.dataset, tokens, {cfg.format, "manifest.json", prov.dump()});
}

fs::path cmd_corrupt(const ExperimentConfig& cfg) {
    if (!cfg.dataset) throw ValidationError("corrupt needs a source dataset manifest");
    const MultiViewDataset source = load_dataset(*cfg.dataset);
    const Manifest manifest = read_manifest(*cfg.dataset);
    std::vector<std::string> tokens;
    if (manifest.labels) tokens = read_label_tokens(*manifest.labels);

    const MultiViewDataset out = apply_corruptions(source, cfg.corruptions);
    json prov{{"source", cfg.dataset->string()},
              {"source_hash", hex64(content_hash(source))},
              {"corruptions", json::array()},
              {"rng", Philox::kName},
              {"content_hash", hex64(content_hash(out))}};
    for (const auto& c : cfg.corruptions) prov["corruptions"].push_back(corruption_to_json(c));
    if (!manifest.provenance_json.empty()) prov["source_provenance"] = json::parse(manifest.provenance_json);
    return save_dataset(cfg.out, out, tokens, {cfg.format, "manifest.json", prov.dump()});
}

std::vector<Aggregate> aggregate(const std::vector<RunRecord>& runs) {
    std::vector<Aggregate> out;
    std::vector<std::string> order;
    std::map<std::string, std::vector<const RunRecord*>> groups;
    for (const auto& r : runs) {
        if (!groups.contains(r.method)) order.push_back(r.method);
        groups[r.method].push_back(&r);
    }
    for (const auto& name : order) {
        const auto& g = groups[name];
        auto stat = [&](auto field, double& mean, double& sd) {
            std::vector<double> v;
            for (const RunRecord* r : g) v.push_back(field(*r));
            mean = mean_of(v);
            sd = std_of(v, mean);
        };
        Aggregate a;
        a.method = name;
        a.runs = g.size();
        stat([](const RunRecord& r) { return r.report.acc; }, a.acc_mean, a.acc_std);
        stat([](const RunRecord& r) { return r.report.pairwise.f_score; }, a.f_mean, a.f_std);
        stat([](const RunRecord& r) { return r.report.pairwise.precision; }, a.precision_mean, a.precision_std);
        stat([](const RunRecord& r) { return r.report.pairwise.recall; }, a.recall_mean, a.recall_std);
        stat([](const RunRecord& r) { return r.report.macro.f_score; }, a.macro_f_mean, a.macro_f_std);
        out.push_back(a);
    }
    return out;
}

RunSummary cmd_run(const ExperimentConfig& cfg) {
    cfg.validate();
    LoadedData data = resolve_data(cfg);
    if (cfg.normalize) data.dataset = zscore_views(data.dataset);
    const int num_classes = static_cast<int>(data.labels.class_names.size());
    const std::vector<ClassId>& truth = data.labels.ids;

    const json cfg_json = config_json(cfg);
    json hashed = cfg_json;
    hashed.erase("out");
    const std::string config_hash = hash_of(hashed.dump());
    const std::string input_hash = hex64(content_hash(data.dataset));

    ensure_dir(cfg.out);
    write_text(cfg.out / "config.json",
               json{{"config", cfg_json}, {"config_hash", config_hash}, {"input_hash", input_hash},
                    {"rng", Philox::kName}}
                       .dump(2) + "\n");

    const LabelInfo fixed = stratified_label_sample(truth, num_classes, cfg.tau, cfg.label_seed);

    RunSummary summary;
    for (Method method : cfg.methods) {
        for (std::uint64_t seed : cfg.seeds) {
            const LabelInfo labels =
                cfg.fixed_labels ? fixed : stratified_label_sample(truth, num_classes, cfg.tau, seed);
            const std::vector<bool> mask = unlabeled_mask(truth.size(), labels.labeled_ids);
            const std::uint64_t label_seed = cfg.fixed_labels ? cfg.label_seed : seed;

            json base{{"schema", "lack-run v1"},
                      {"seed", seed},
                      {"label_seed", label_seed},
                      {"num_labeled", labels.num_labeled()},
                      {"config", cfg_json},
                      {"config_hash", config_hash},
                      {"input_hash", input_hash},
                      {"view_names", data.dataset.names()},
                      {"class_names", data.labels.class_names}};

            auto write_predictions = [&](const fs::path& dir, const std::vector<ClassId>& pred) {
                std::vector<std::string> tokens;
                for (ClassId k : pred)
                    tokens.push_back(k >= 0 && k < num_classes ? data.labels.class_names[k]
                                                               : "cluster" + std::to_string(k));
                write_label_tokens(dir / "predictions.csv", tokens);
            };

            if (method == Method::KMeansPerView) {
                for (std::size_t p = 0; p < data.dataset.num_views(); ++p) {
                    const auto start = std::chrono::steady_clock::now();
                    const auto raw = solve_kmeans_single_view(data.dataset.view(p), num_classes, seed,
                                                              std::max(cfg.max_iter, 100));
                    const auto pred = align_to_truth(raw, truth);
                    const double secs =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                    RunRecord rec{"KMEANS_V" + std::to_string(p + 1), seed, evaluate(pred, truth, mask),
                                  0, false, {}};
                    const fs::path dir = cfg.out / "runs" / rec.method / ("seed_" + std::to_string(seed));
                    ensure_dir(dir);
                    json j = base;
                    j["method"] = rec.method;
                    j["view"] = data.dataset.name(p);
                    j["eval"] = report_json(rec.report);
                    j["label_alignment"] = "hungarian";
                    j["wall_time_s"] = secs;
                    write_text(dir / "result.json", j.dump(2) + "\n");
                    write_predictions(dir, pred);
                    summary.runs.push_back(std::move(rec));
                }
                continue;
            }

            SolverConfig scfg;
            scfg.max_iter = cfg.max_iter;
            scfg.seed = seed;
            scfg.labeled_argmin = cfg.labeled_argmin;
            scfg.strategy = method == Method::DACK   ? WeightStrategy::DataDriven
                            : method == Method::LACK ? WeightStrategy::LabelDriven
                                                     : WeightStrategy::Equal;
            const auto start = std::chrono::steady_clock::now();
            const SolveResult res = method == Method::CK ? solve_concatenated(data.dataset, labels, scfg)
                                                         : solve(data.dataset, labels, scfg);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

            RunRecord rec{to_string(method), seed, evaluate(res.assignments, truth, mask),
                          res.iterations_run, res.converged, res.weights_final.normalized()};
            const fs::path dir = cfg.out / "runs" / rec.method / ("seed_" + std::to_string(seed));
            ensure_dir(dir);
            json j = base;
            j["method"] = rec.method;
            j["strategy"] = lack::to_string(scfg.strategy);
            j["eval"] = report_json(rec.report);
            j["solve"] = {{"iterations_run", res.iterations_run},
                          {"converged", res.converged},
                          {"weights_final", res.weights_final.d},
                          {"weights_final_normalized", rec.weights_final},
                          {"objective_final",
                           res.trace.records.empty() ? 0.0 : res.trace.records.back().objective}};
            if (method == Method::DACK)
                j["solve"]["objective_note"] =
                    "weighted K-means objective with the current data-driven weights";
            j["wall_time_s"] = secs;
            write_text(dir / "result.json", j.dump(2) + "\n");

            const std::vector<std::string> names =
                method == Method::CK ? std::vector<std::string>{"concat"} : data.dataset.names();
            write_text(dir / "trace.csv",
                       trace_csv(res, names,
                                 fmt::format("method={} seed={} config_hash={} input_hash={}",
                                             rec.method, seed, config_hash, input_hash)));
            write_predictions(dir, res.assignments);
            summary.runs.push_back(std::move(rec));
        }
    }

    summary.aggregates = aggregate(summary.runs);
    std::ostringstream agg;
    agg << "# lack-aggregate v1 (metrics x100, mean and sample std) config_hash=" << config_hash
        << " input_hash=" << input_hash << '\n';
    agg << "method,runs,acc_mean,acc_std,f_score_mean,f_score_std,precision_mean,precision_std,"
           "recall_mean,recall_std,macro_f_mean,macro_f_std\n";
    for (const auto& a : summary.aggregates) {
        agg << a.method << ',' << a.runs;
        for (double v : {a.acc_mean, a.acc_std, a.f_mean, a.f_std, a.precision_mean, a.precision_std,
                         a.recall_mean, a.recall_std, a.macro_f_mean, a.macro_f_std})
            agg << ',' << num(100.0 * v);
        agg << '\n';
    }
    write_text(cfg.out / "aggregate.csv", agg.str());
    return summary;
}

EvalReport cmd_eval(const fs::path& pred_path, const fs::path& truth_path,
                    const std::optional<fs::path>& json_out) {
    if (!fs::exists(pred_path)) throw IoError("missing prediction file '" + pred_path.string() + "'");
    if (!fs::exists(truth_path)) throw IoError("missing truth file '" + truth_path.string() + "'");
    const auto truth_tokens = read_label_tokens(truth_path);
    const auto pred_tokens = read_label_tokens(pred_path);
    if (truth_tokens.size() != pred_tokens.size())
        throw ValidationError("prediction file has " + std::to_string(pred_tokens.size()) +
                              " entries, truth file has " + std::to_string(truth_tokens.size()));

    // one shared dictionary: truth classes first, then tokens only seen in pred
    std::vector<std::string> all(truth_tokens);
    all.insert(all.end(), pred_tokens.begin(), pred_tokens.end());
    const LabelEncoding enc = encode_labels(all);
    const std::span<const ClassId> ids(enc.ids);
    const auto truth = ids.first(truth_tokens.size());
    const auto pred = ids.subspan(truth_tokens.size());

    const EvalReport report = evaluate(pred, truth);
    if (json_out) {
        if (json_out->has_parent_path()) ensure_dir(json_out->parent_path());
        write_text(*json_out, json{{"schema", "lack-eval v1"},
                                   {"pred", pred_path.string()},
                                   {"truth", truth_path.string()},
                                   {"eval", report_json(report)}}
                                  .dump(2) + "\n");
    }
    return report;
}

}  // namespace lack::cli
