#include "causal/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "causal/discovery.hpp"
#include "causal/dot.hpp"
#include "causal/phenomena.hpp"
#include "causal/quantum.hpp"
#include "causal/rng.hpp"

namespace causal {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            const std::string v = trim(cur);
            if (!v.empty()) out.push_back(v);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    const std::string v = trim(cur);
    if (!v.empty()) out.push_back(v);
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::runtime_error("config line " + std::to_string(lineno) + ": bad section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (section == "data") {
            if (key == "csv") cfg.csv = value;
            else if (key == "generator") cfg.generator = value;
            else cfg.generator_params[key] = value;
        } else if (section == "model") {
            if (key == "dot_file") cfg.dot_file = value;
            else if (key == "dot") cfg.dot_inline = value;
            else if (key == "discover") cfg.discover = value;
            else if (key == "unobserved") cfg.unobserved = split_list(value);
            else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key " + key);
        } else if (section == "effect") {
            if (key == "treatment") cfg.treatment = value;
            else if (key == "outcome") cfg.outcome = value;
            else if (key == "estimator") cfg.estimator = value;
            else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key " + key);
        } else if (section == "refute") {
            if (key == "methods") cfg.refuters = split_list(value);
            else if (key == "replicates") cfg.replicates = std::stoul(value);
            else if (key == "fraction") cfg.fraction = std::stod(value);
            else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key " + key);
        } else if (section == "run") {
            if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "out") cfg.out = value;
            else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key " + key);
        } else {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": key outside any section");
        }
    }
    if (cfg.treatment.empty() || cfg.outcome.empty()) {
        throw std::runtime_error("config: treatment and outcome are required");
    }
    if (cfg.treatment == cfg.outcome) {
        throw std::runtime_error("config: treatment must differ from outcome");
    }
    const bool stochastic = !cfg.generator.empty() || !cfg.refuters.empty();
    if (stochastic && !cfg.seed) {
        throw std::runtime_error("config: seed is required for stochastic stages (no wall-clock default)");
    }
    return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pipeline_config(ss.str());
}

namespace {

std::string data_dir_default() {
    if (const char* env = std::getenv("CAUSAL_DATA_DIR")) return env;
#ifdef CAUSAL_DATA_DIR_DEFAULT
    return CAUSAL_DATA_DIR_DEFAULT;
#else
    return "data";
#endif
}

uint64_t param_u64(const PipelineConfig& cfg, const std::string& key, uint64_t fallback) {
    auto it = cfg.generator_params.find(key);
    if (it == cfg.generator_params.end()) return fallback;
    return std::stoull(it->second);
}

DataTable stage_data(const PipelineConfig& cfg) {
    if (!cfg.csv.empty() && !cfg.generator.empty()) {
        throw std::runtime_error("configure either csv or generator, not both");
    }
    if (!cfg.csv.empty()) return DataTable::read_csv_file(cfg.csv);
    if (cfg.generator == "ohm") {
        Rng rng(*cfg.seed);
        return generate_ohm_dataset(param_u64(cfg, "rows", 10000), OhmRanges{}, OhmConstants{}, rng);
    }
    if (cfg.generator == "quantum") {
        Rng rng(*cfg.seed);
        return build_entanglement_dataset(param_u64(cfg, "states", 20), param_u64(cfg, "shots", 100),
                                          rng);
    }
    if (cfg.generator == "tides-fixture") {
        const std::string dir =
            cfg.generator_params.count("dir") ? cfg.generator_params.at("dir") : data_dir_default() + "/tides";
        return load_tide_dataset(dir + "/earth_sun.csv", dir + "/earth_moon.csv",
                                 dir + "/tide_height.csv")
            .table;
    }
    if (cfg.generator.empty()) throw std::runtime_error("no data source configured");
    throw std::runtime_error("unknown generator: " + cfg.generator);
}

Dag stage_model(const PipelineConfig& cfg, const DataTable& data) {
    int sources = 0;
    sources += !cfg.dot_file.empty();
    sources += !cfg.dot_inline.empty();
    sources += !cfg.discover.empty();
    if (sources != 1) {
        throw std::runtime_error("configure exactly one of dot_file, dot, discover");
    }
    Dag g;
    if (!cfg.dot_file.empty()) {
        std::ifstream in(cfg.dot_file);
        if (!in) throw std::runtime_error("cannot open graph " + cfg.dot_file);
        std::ostringstream ss;
        ss << in.rdbuf();
        g = parse_dot(ss.str());
    } else if (!cfg.dot_inline.empty()) {
        g = parse_dot(cfg.dot_inline);
    } else if (cfg.discover == "lingam") {
        g = run_lingam(data);
    } else if (cfg.discover == "pc") {
        const CpdagResult cpdag = run_pc(data);
        if (!cpdag.skeleton.empty()) {
            std::string undirected;
            for (const auto& [a, b] : cpdag.skeleton) undirected += " " + a + "--" + b;
            throw std::runtime_error("pc left undirected edges:" + undirected +
                                     "; orient them or use discover = lingam");
        }
        for (const auto& [a, b] : cpdag.directed) g.add_edge(a, b);
        for (const auto& n : data.names()) g.add_node(n);
    } else {
        throw std::runtime_error("unknown discovery algorithm: " + cfg.discover);
    }

    for (const auto& u : cfg.unobserved) g.set_unobserved(u);

    for (const auto& node : g.nodes()) {
        if (g.is_observed(node) && !data.has_column(node)) {
            throw std::runtime_error("model node " + node + " has no data column");
        }
    }
    if (!g.has_node(cfg.treatment)) throw std::runtime_error("unknown treatment: " + cfg.treatment);
    if (!g.has_node(cfg.outcome)) throw std::runtime_error("unknown outcome: " + cfg.outcome);
    return g;
}

const Estimand* pick_estimand(const Identification& id, const std::string& estimator) {
    if (estimator == "auto") {
        if (id.estimands.empty()) return nullptr;
        return &id.estimands.front();
    }
    for (const auto& e : id.estimands) {
        if (estimator == strategy_name(e.strategy)) return &e;
    }
    return nullptr;
}

}  // namespace

ValidationResult validate_model(const Dag& g, const DataTable& data, double alpha) {
    ValidationResult out;
    std::vector<std::string> nodes;
    for (const auto& n : g.nodes()) {
        if (g.is_observed(n) && data.has_column(n)) nodes.push_back(n);
    }
    std::sort(nodes.begin(), nodes.end());
    for (size_t i = 0; i < nodes.size(); ++i) {
        for (size_t j = i + 1; j < nodes.size(); ++j) {
            const std::string& a = nodes[i];
            const std::string& b = nodes[j];
            if (g.has_edge(a, b) || g.has_edge(b, a)) continue;
            // Condition on the union of observed parents, the canonical
            // separator candidate for a DAG-implied independence.
            std::set<std::string> cond;
            for (const auto& p : g.parents_of(a)) {
                if (g.is_observed(p)) cond.insert(p);
            }
            for (const auto& p : g.parents_of(b)) {
                if (g.is_observed(p)) cond.insert(p);
            }
            cond.erase(a);
            cond.erase(b);
            if (!d_separated(g, a, b, cond)) continue;  // graph makes no claim here

            ++out.checks;
            CiResult ci;
            try {
                ci = ci_test_partial_correlation(data, a, b, cond, alpha);
            } catch (const std::invalid_argument&) {
                ci.degenerate = true;  // not enough rows for this set
            }
            std::string line = "claim " + a + " _||_ " + b;
            if (!cond.empty()) {
                line += " | {";
                bool first = true;
                for (const auto& c : cond) {
                    line += (first ? "" : ", ") + c;
                    first = false;
                }
                line += "}";
            }
            if (ci.degenerate) {
                // Deterministic relationships make the conditioning
                // regression singular; the claim is untestable, not wrong.
                line += ": skipped (degenerate conditioning)";
            } else {
                line += ": p=" + fmt(ci.p_value) + (ci.independent ? " ok" : " VIOLATED");
                if (!ci.independent) ++out.violations;
            }
            out.lines.push_back(line);
        }
    }
    return out;
}

Report run_pipeline(const PipelineConfig& cfg) {
    Report rep;
    std::string text;

    DataTable data;
    try {
        data = stage_data(cfg);
    } catch (const std::exception& e) {
        rep.failed_stage = "data";
        rep.error = e.what();
    }

    if (rep.failed_stage.empty()) {
        text += "data: " + std::to_string(data.row_count()) + " rows x " +
                std::to_string(data.column_count()) + " cols (";
        for (size_t i = 0; i < data.names().size(); ++i) {
            text += (i ? ", " : "") + data.names()[i];
        }
        text += ")\n";
        try {
            rep.model = stage_model(cfg, data);
        } catch (const std::exception& e) {
            rep.failed_stage = "model";
            rep.error = e.what();
        }
    }

    if (rep.failed_stage.empty()) {
        text += "model:\n" + serialize_dot(rep.model);
        text += "treatment: " + cfg.treatment + "    outcome: " + cfg.outcome;
        if (cfg.seed) text += "    seed: " + std::to_string(*cfg.seed);
        text += "\n\n";
        try {
            rep.identification = identify_effect(rep.model, cfg.treatment, cfg.outcome);
        } catch (const std::exception& e) {
            rep.failed_stage = "identify";
            rep.error = e.what();
        }
    }

    const Estimand* chosen = nullptr;
    if (rep.failed_stage.empty()) {
        text += format_identification(rep.identification);
        chosen = pick_estimand(rep.identification, cfg.estimator);
        if (!chosen) {
            rep.failed_stage = "identify";
            rep.error = "no estimand available for estimator '" + cfg.estimator + "'";
        }
    }

    if (rep.failed_stage.empty()) {
        try {
            if (chosen->strategy == Strategy::Mediation) {
                rep.mediation = estimate_mediation(data, *chosen);
                rep.estimate = rep.mediation->total;
            } else {
                rep.estimate = estimate_effect(data, *chosen);
            }
        } catch (const std::exception& e) {
            rep.failed_stage = "estimate";
            rep.error = e.what();
        }
    }

    if (rep.failed_stage.empty()) {
        text += std::string("## Estimate (") + strategy_name(chosen->strategy) + ")\n";
        text += "mean value: " + fmt(rep.estimate->ate) + "\n";
        text += "95% CI: [" + fmt(rep.estimate->ci_low) + ", " + fmt(rep.estimate->ci_high) + "]\n";
        text += "p-value: " + fmt(rep.estimate->p_value) + "    n: " +
                std::to_string(rep.estimate->n) + "\n";
        if (rep.mediation) {
            text += "direct: " + fmt(rep.mediation->direct.ate) +
                    "    indirect: " + fmt(rep.mediation->indirect.ate) + "\n";
        }
        text += "\n";

        try {
            const Rng base(cfg.seed ? *cfg.seed : 0);
            size_t stream = 0;
            for (const auto& method : cfg.refuters) {
                const Rng sub = base.derive(1000 + stream++);
                RefutationResult r;
                if (method == "random_common_cause") {
                    r = refute_random_common_cause(data, *chosen, *rep.estimate, cfg.replicates, sub);
                } else if (method == "placebo_treatment") {
                    r = refute_placebo(data, *chosen, *rep.estimate, cfg.replicates, sub);
                } else if (method == "data_subset") {
                    r = refute_data_subset(data, *chosen, *rep.estimate, cfg.fraction,
                                           cfg.replicates, sub);
                } else {
                    throw std::runtime_error("unknown refuter: " + method);
                }
                rep.refutations.push_back(std::move(r));
            }
            if (!rep.refutations.empty()) rep.confidence = aggregate_confidence(rep.refutations);
        } catch (const std::exception& e) {
            rep.failed_stage = "refute";
            rep.error = e.what();
        }
    }

    if (rep.failed_stage.empty()) {
        for (const auto& r : rep.refutations) text += "## " + format_refutation(r) + "\n";
        if (rep.confidence) {
            text += "## Confidence\naveraged p-value over " +
                    std::to_string(rep.refutations.size()) + " refuters: " + fmt(*rep.confidence) +
                    "\n";
        }
        rep.ok = true;
    } else {
        text += "\nstage '" + rep.failed_stage + "' failed: " + rep.error + "\n";
        text += "downstream stages skipped\n";
    }

    // Machine-readable twin.
    std::string csv =
        "treatment,outcome,strategy,ate,ci_low,ci_high,p_value,n,rcc_p,placebo_p,subset_p,confidence\n";
    csv += cfg.treatment + "," + cfg.outcome + ",";
    csv += chosen ? strategy_name(chosen->strategy) : "";
    const std::vector<std::string> est_fields{
        rep.estimate ? fmt(rep.estimate->ate) : std::string(),
        rep.estimate ? fmt(rep.estimate->ci_low) : std::string(),
        rep.estimate ? fmt(rep.estimate->ci_high) : std::string(),
        rep.estimate ? fmt(rep.estimate->p_value) : std::string(),
        rep.estimate ? std::to_string(rep.estimate->n) : std::string()};
    for (const std::string& field : est_fields) csv += "," + field;
    for (RefuterMethod m : {RefuterMethod::RandomCommonCause, RefuterMethod::PlaceboTreatment,
                            RefuterMethod::DataSubset}) {
        std::string field;
        for (const auto& r : rep.refutations) {
            if (r.method == m) field = fmt(r.p_value);
        }
        csv += "," + field;
    }
    csv += "," + (rep.confidence ? fmt(*rep.confidence) : std::string()) + "\n";

    rep.text = "Causal pipeline report\n======================\n" + text;
    rep.csv = csv;
    return rep;
}

}  // namespace causal
