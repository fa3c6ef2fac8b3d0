#include "citenet/runner.hpp"

#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "citenet/corpus.hpp"
#include "citenet/csv.hpp"
#include "citenet/error.hpp"
#include "citenet/parallel.hpp"

namespace citenet {

namespace {

using nlohmann::json;
using csv::number;

// Sub-seed streams derived from the root seed.
constexpr std::uint64_t kDetectionStream = 0;
constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kToyStream = 2;

struct Outputs {
    std::map<std::string, std::string> files;
    std::map<std::string, std::size_t> rows;

    void add(const std::string& name, const csv::Table& table) {
        files[name] = table.str();
        rows[name] = table.rows();
    }
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) return base / path;
    return path;
}

template <class T>
T get_or(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

LfrConfig lfr_from_json(const json& doc) {
    LfrConfig cfg = LfrConfig::table_row(get_or<int>(doc, "row", 1));
    cfg.n = get_or(doc, "n", cfg.n);
    cfg.mu = get_or(doc, "mu", cfg.mu);
    cfg.gamma = get_or(doc, "gamma", cfg.gamma);
    cfg.min_community = get_or(doc, "min_community", cfg.min_community);
    cfg.max_community = get_or(doc, "max_community", cfg.max_community);
    cfg.max_degree = get_or(doc, "max_degree", cfg.max_degree);
    cfg.mean_degree = get_or(doc, "mean_degree", cfg.mean_degree);
    cfg.communities = get_or(doc, "communities", cfg.communities);
    cfg.community_exponent = get_or(doc, "community_exponent", cfg.community_exponent);
    cfg.max_attempts = get_or(doc, "max_attempts", cfg.max_attempts);
    cfg.max_rewiring_sweeps = get_or(doc, "max_rewiring_sweeps", cfg.max_rewiring_sweeps);
    return cfg;
}

json lfr_to_json(const LfrConfig& cfg) {
    return {{"n", cfg.n},
            {"mu", cfg.mu},
            {"gamma", cfg.gamma},
            {"min_community", cfg.min_community},
            {"max_community", cfg.max_community},
            {"max_degree", cfg.max_degree},
            {"mean_degree", cfg.mean_degree},
            {"communities", cfg.communities},
            {"community_exponent", cfg.community_exponent},
            {"max_attempts", cfg.max_attempts},
            {"max_rewiring_sweeps", cfg.max_rewiring_sweeps}};
}

std::vector<std::string> profile_fields(const TopologyProfile& p) {
    return {number(p.mean_k_all),      number(p.mean_k_in), number(p.mean_k_out),
            number(p.mean_clustering), number(p.size),      number(p.mean_neighbor_degree)};
}

const std::vector<std::string> kProfileHeader = {"mean_k_all",      "mean_k_in", "mean_k_out",
                                                 "mean_clustering", "size",      "mean_neighbor_degree"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

struct Inputs {
    KeywordSet keywords;
    MatchedCorpus matched;
};

Inputs load_inputs(const ExperimentConfig& cfg, std::ostream& log) {
    Inputs in;
    in.keywords = read_keywords(cfg.keywords);
    const auto corpus = read_corpus(cfg.corpus);
    log << "loaded " << corpus.size() << " documents and " << in.keywords.size() << " keywords\n";
    in.matched = match_corpus(corpus, in.keywords, cfg.workers);
    log << "matched " << in.matched.size() << " documents, " << in.matched.citations.size() << " citations\n";
    return in;
}

DetectionConfig detection_config(const ExperimentConfig& cfg) {
    DetectionConfig d;
    d.trials = cfg.trials;
    d.seed = mix_seed(cfg.seed, kDetectionStream);
    d.workers = cfg.workers;
    return d;
}

void run_characterize(const ExperimentConfig& cfg, std::ostream& log, Outputs& out) {
    const auto in = load_inputs(cfg, log);
    csv::Table profiles(concat({"network", "removed_keyword", "nodes", "edges"}, kProfileHeader));
    std::vector<TopologyProfile> collected;
    std::vector<std::string> labels;

    const auto original = build_network(in.matched, {});
    collected.push_back(topology_profile(original));
    labels.push_back("original");
    profiles.add_row(concat({"original", "", std::to_string(original.size()), std::to_string(original.edge_count())},
                            profile_fields(collected.back())));

    std::vector<std::optional<std::pair<TopologyProfile, std::size_t>>> modified(in.keywords.size());
    std::vector<std::size_t> nodes(in.keywords.size(), 0);
    parallel_for(in.keywords.size(), cfg.workers, [&](std::size_t k) {
        try {
            const auto g = build_network(in.matched, {static_cast<KeywordIndex>(k)});
            modified[k] = std::make_pair(topology_profile(g), g.edge_count());
            nodes[k] = g.size();
        } catch (const EmptyNetwork&) {
        }
    });
    for (std::size_t k = 0; k < in.keywords.size(); ++k) {
        if (!modified[k]) continue;
        collected.push_back(modified[k]->first);
        labels.push_back(in.keywords[k]);
        profiles.add_row(concat({"modified", in.keywords[k], std::to_string(nodes[k]), std::to_string(modified[k]->second)},
                                profile_fields(modified[k]->first)));
    }
    out.add("profiles.csv", profiles);

    const auto pca = pca_project(collected);
    std::vector<std::string> header = {"network", "removed_keyword"};
    for (std::size_t c = 0; c < pca.explained_variance_ratio.size(); ++c) header.push_back("pc" + std::to_string(c + 1));
    csv::Table coords(header);
    for (std::size_t i = 0; i < collected.size(); ++i) {
        std::vector<std::string> row = {i == 0 ? "original" : "modified", i == 0 ? "" : labels[i]};
        for (double x : pca.coordinates[i]) row.push_back(number(x));
        coords.add_row(row);
    }
    out.add("pca.csv", coords);
    csv::Table variance({"component", "feature_loading_set", "explained_variance_ratio"});
    std::string used;
    for (auto f : pca.used_features) used += (used.empty() ? "" : ";") + kProfileHeader[f];
    for (std::size_t c = 0; c < pca.explained_variance_ratio.size(); ++c)
        variance.add_row({"pc" + std::to_string(c + 1), used, number(pca.explained_variance_ratio[c])});
    out.add("pca_variance.csv", variance);
}

std::vector<std::string> metric_fields(const MetricReport& m) {
    return {number(m.nmi), number(m.ami), number(m.ari), number(m.vme), std::to_string(m.shared_n)};
}

void run_sweep(const ExperimentConfig& cfg, std::ostream& log, Outputs& out) {
    const auto in = load_inputs(cfg, log);
    const auto detection = detection_config(cfg);
    const auto baseline = analyze_baseline(in.matched, detection);
    log << "baseline: " << baseline.graph.size() << " nodes, " << baseline.partition.module_count()
        << " communities, codelength " << baseline.partition.codelength << "\n";
    const auto sweep = single_removal_sweep(in.matched, baseline, detection);

    csv::Table table(concat({"removed_keywords", "nmi", "ami", "ari", "vme", "shared_n", "normalized_size", "nodes",
                             "edges", "modules"},
                            kProfileHeader));
    for (const auto& r : sweep.rows) {
        if (!r.present) {
            table.add_row(concat({in.keywords[r.keyword], "", "", "", "", "", "", "0", "0", "0"},
                                 std::vector<std::string>(kProfileHeader.size())));
            continue;
        }
        auto row = concat({in.keywords[r.keyword]}, metric_fields(r.metrics));
        row = concat(row, {number(r.normalized_size), std::to_string(r.nodes), std::to_string(r.edges),
                           std::to_string(r.modules)});
        table.add_row(concat(row, profile_fields(r.profile)));
    }
    out.add("sweep.csv", table);

    csv::Table summary({"measure", "mean", "std"});
    const auto s = summarize_sweep(sweep);
    summary.add_row({"nmi", number(s.nmi.mean), number(s.nmi.std)});
    summary.add_row({"ami", number(s.ami.mean), number(s.ami.std)});
    summary.add_row({"ari", number(s.ari.mean), number(s.ari.std)});
    summary.add_row({"vme", number(s.vme.mean), number(s.vme.std)});
    summary.add_row({"normalized_size", number(s.normalized_size.mean), number(s.normalized_size.std)});
    const auto purity = keyword_purity(baseline.partition, baseline.graph.keywords());
    summary.add_row({"keyword_purity", number(purity.mean), number(purity.std)});
    summary.add_row({"shuffled_nmi", number(shuffled_baseline(baseline.partition, mix_seed(cfg.seed, kShuffleStream))),
                     "0"});
    out.add("sweep_summary.csv", summary);

    csv::Table partition({"node_id", "community_label"});
    for (std::size_t v = 0; v < baseline.graph.size(); ++v)
        partition.add_row({baseline.graph.node_ids()[v], std::to_string(baseline.partition.labels[v])});
    out.add("partition.csv", partition);

    csv::Table purity_table({"community", "size", "keyword", "fraction"});
    for (const auto& c : purity.communities)
        purity_table.add_row({std::to_string(c.community), std::to_string(c.size), in.keywords[c.keyword],
                              number(c.fraction)});
    out.add("purity.csv", purity_table);
}

void run_greedy(const ExperimentConfig& cfg, std::ostream& log, Outputs& out) {
    const auto in = load_inputs(cfg, log);
    const auto detection = detection_config(cfg);
    const auto baseline = analyze_baseline(in.matched, detection);
    const auto trace = greedy_sequence(in.matched, baseline, cfg.greedy_mode, detection);
    csv::Table table({"step", "removed_keyword", "nmi", "ami", "ari", "vme", "shared_n", "normalized_size", "nodes",
                      "modules"});
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        if (s.network_empty) {
            table.add_row({std::to_string(i + 1), in.keywords[s.keyword], "", "", "", "", "", "0", "0", "0"});
            continue;
        }
        auto row = concat({std::to_string(i + 1), in.keywords[s.keyword]}, metric_fields(s.metrics));
        table.add_row(concat(row, {number(s.normalized_size), std::to_string(s.nodes), std::to_string(s.modules)}));
    }
    out.add("greedy_" + to_string(cfg.greedy_mode) + ".csv", table);
}

void run_toy(const ExperimentConfig& cfg, std::ostream& log, Outputs& out) {
    DetectionConfig detection = detection_config(cfg);
    log << "toy: " << to_string(cfg.toy.strategy) << " keywords, " << to_string(cfg.toy.mode) << " case, "
        << cfg.toy.runs << " runs on n=" << cfg.lfr.n << "\n";
    const auto result = toy_experiment(cfg.lfr, cfg.toy, detection, mix_seed(cfg.seed, kToyStream));
    csv::Table table({"step", "mean_nmi", "std_nmi", "mean_size", "std_size"});
    for (const auto& s : result.steps)
        table.add_row({std::to_string(s.step), number(s.nmi.mean), number(s.nmi.std), number(s.normalized_size.mean),
                       number(s.normalized_size.std)});
    out.add("toy_curve.csv", table);
}

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

double parse_number(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw SchemaError("not a number in " + context + ": '" + text + "'");
    }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::characterize:
            return "characterize";
        case ExperimentKind::sweep:
            return "sweep";
        case ExperimentKind::greedy:
            return "greedy";
        case ExperimentKind::toy:
            return "toy";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
    if (text == "characterize") return ExperimentKind::characterize;
    if (text == "sweep") return ExperimentKind::sweep;
    if (text == "greedy") return ExperimentKind::greedy;
    if (text == "toy") return ExperimentKind::toy;
    throw ConfigError("unknown experiment kind '" + text + "'");
}

ExperimentConfig ExperimentConfig::from_json(const json& doc, ExperimentKind kind, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    cfg.kind = kind;
    if (doc.contains("corpus")) cfg.corpus = resolve(base_dir, get_or<std::string>(doc, "corpus", ""));
    if (doc.contains("keywords")) cfg.keywords = resolve(base_dir, get_or<std::string>(doc, "keywords", ""));
    if (doc.contains("out")) cfg.out = resolve(base_dir, get_or<std::string>(doc, "out", ""));
    cfg.seed = get_or(doc, "seed", cfg.seed);
    cfg.workers = get_or(doc, "workers", cfg.workers);
    if (doc.contains("detection")) cfg.trials = get_or(doc.at("detection"), "trials", cfg.trials);
    if (doc.contains("greedy"))
        cfg.greedy_mode = parse_greedy_mode(get_or<std::string>(doc.at("greedy"), "mode", "worst"));
    if (doc.contains("toy")) {
        const auto& toy = doc.at("toy");
        cfg.toy.strategy = parse_keyword_strategy(get_or<std::string>(toy, "strategy", "dependent"));
        cfg.toy.rho = get_or(toy, "rho", cfg.toy.rho);
        cfg.toy.mode = parse_greedy_mode(get_or<std::string>(toy, "mode", "best"));
        cfg.toy.runs = get_or(toy, "runs", cfg.toy.runs);
        if (toy.contains("lfr")) cfg.lfr = lfr_from_json(toy.at("lfr"));
    }
    return cfg;
}

json ExperimentConfig::to_json() const {
    json doc = {{"kind", to_string(kind)},
                {"seed", seed},
                {"workers", workers},
                {"out", out.string()},
                {"detection", {{"trials", trials}}}};
    if (kind != ExperimentKind::toy) {
        doc["corpus"] = corpus.string();
        doc["keywords"] = keywords.string();
    }
    if (kind == ExperimentKind::greedy) doc["greedy"] = {{"mode", to_string(greedy_mode)}};
    if (kind == ExperimentKind::toy)
        doc["toy"] = {{"strategy", to_string(toy.strategy)},
                      {"rho", toy.rho},
                      {"mode", to_string(toy.mode)},
                      {"runs", toy.runs},
                      {"lfr", lfr_to_json(lfr)}};
    return doc;
}

void ExperimentConfig::validate() const {
    if (out.empty()) throw ConfigError("no output directory given (--out or \"out\")");
    if (trials == 0) throw ConfigError("detection trials must be at least 1");
    if (kind == ExperimentKind::toy) {
        if (toy.runs == 0) throw ConfigError("toy runs must be at least 1");
        if (!(toy.rho >= 0 && toy.rho <= 1)) throw ConfigError("rho must lie in [0, 1]");
        lfr.validate();
        return;
    }
    if (corpus.empty()) throw ConfigError("no corpus path given (--corpus or \"corpus\")");
    if (keywords.empty()) throw ConfigError("no keyword file given (--keywords or \"keywords\")");
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return exit_status::config;
    if (dynamic_cast<const IoError*>(&e)) return exit_status::io;
    if (dynamic_cast<const SchemaError*>(&e)) return exit_status::schema;
    if (dynamic_cast<const EmptyNetwork*>(&e)) return exit_status::empty_network;
    if (dynamic_cast<const GenerationFailure*>(&e)) return exit_status::generation;
    if (dynamic_cast<const Error*>(&e)) return exit_status::pipeline;
    return exit_status::internal;
}

RunReport run(const ExperimentConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto started = std::chrono::system_clock::now();
    const auto t0 = std::chrono::steady_clock::now();

    Outputs out;
    switch (cfg.kind) {
        case ExperimentKind::characterize:
            run_characterize(cfg, log, out);
            break;
        case ExperimentKind::sweep:
            run_sweep(cfg, log, out);
            break;
        case ExperimentKind::greedy:
            run_greedy(cfg, log, out);
            break;
        case ExperimentKind::toy:
            run_toy(cfg, log, out);
            break;
    }

    RunReport report;
    report.rows = out.rows;
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.out.string() + ": " + ec.message());
    for (const auto& [name, body] : out.files) {
        std::ofstream f(cfg.out / name, std::ios::binary);
        if (!f) throw IoError("cannot write " + (cfg.out / name).string());
        f << body;
    }
    json manifest = {{"tool", "citenet"},
                     {"version", kToolVersion},
                     {"command", to_string(cfg.kind)},
                     {"config", cfg.to_json()},
                     {"seed", cfg.seed},
                     {"started_at", utc_timestamp(started)},
                     {"duration_seconds", report.seconds},
                     {"rows", report.rows}};
    std::ofstream mf(cfg.out / "manifest.json");
    if (!mf) throw IoError("cannot write manifest");
    mf << manifest.dump(2) << '\n';
    for (const auto& [name, rows] : report.rows) log << "wrote " << (cfg.out / name).string() << " (" << rows << " rows)\n";
    return report;
}

std::string emit_plot_data(const std::filesystem::path& results) {
    std::ifstream in(results);
    if (!in) throw IoError("cannot open results file " + results.string());
    const auto rows = csv::read(in);
    if (rows.size() < 2) throw SchemaError("results file has no data rows: " + results.string());
    const auto& header = rows.front();
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    };
    auto cell = [&](const csv::Row& row, std::size_t c) -> const std::string& {
        if (c >= row.size()) throw SchemaError("short row in " + results.string());
        return row[c];
    };

    csv::Table out({"series_name", "x", "y", "y_err"});
    const auto step = column("step");
    if (step && column("mean_nmi") && column("std_nmi") && column("mean_size") && column("std_size")) {
        const std::pair<const char*, const char*> series[] = {{"mean_nmi", "std_nmi"}, {"mean_size", "std_size"}};
        for (const auto& [mean, spread] : series)
            for (std::size_t r = 1; r < rows.size(); ++r)
                out.add_row({mean, cell(rows[r], *step), cell(rows[r], *column(mean)), cell(rows[r], *column(spread))});
        for (const char* spread : {"std_nmi", "std_size"})
            for (std::size_t r = 1; r < rows.size(); ++r)
                out.add_row({spread, cell(rows[r], *step), cell(rows[r], *column(spread)), "0"});
    } else if (step && column("nmi") && column("normalized_size")) {
        for (const char* name : {"nmi", "normalized_size"})
            for (std::size_t r = 1; r < rows.size(); ++r) {
                const auto& y = cell(rows[r], *column(name));
                if (y.empty()) continue;
                parse_number(y, results.string());
                out.add_row({name, cell(rows[r], *step), y, "0"});
            }
    } else if (column("removed_keywords") && column("nmi") && column("normalized_size")) {
        for (const char* name : {"nmi", "ami", "ari", "vme", "normalized_size"}) {
            const auto c = column(name);
            if (!c) throw SchemaError(std::string("sweep results lack column ") + name);
            for (std::size_t r = 1; r < rows.size(); ++r) {
                const auto& y = cell(rows[r], *c);
                if (y.empty()) continue;
                parse_number(y, results.string());
                out.add_row({name, std::to_string(r), y, "0"});
            }
        }
    } else {
        throw SchemaError("unrecognized results schema in " + results.string());
    }
    return out.str();
}

}  // namespace citenet
