// Command-line front end for the causal analysis engine.
//
// Subcommands:
//   discover  - learn a graph from data (pc or lingam), print DOT
//   identify  - estimand report for (graph, treatment, outcome)
//   estimate  - single effect estimate
//   refute    - robustness checks for an estimate
//   validate  - test the graph's independence claims against the data
//   simulate  - generate the bundled datasets (ohm, quantum, tides)
//   run       - full model/identify/estimate/refute pipeline from a config
//   report    - align one or more pipeline summary CSVs into a table

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "causal/discovery.hpp"
#include "causal/dot.hpp"
#include "causal/estimate.hpp"
#include "causal/identify.hpp"
#include "causal/phenomena.hpp"
#include "causal/pipeline.hpp"
#include "causal/quantum.hpp"
#include "causal/refute.hpp"
#include "causal/rng.hpp"
#include "causal/table.hpp"

namespace {

causal::Dag load_graph(const std::string& dot_file) {
    std::ifstream in(dot_file);
    if (!in) throw std::runtime_error("cannot open graph " + dot_file);
    std::ostringstream ss;
    ss << in.rdbuf();
    return causal::parse_dot(ss.str());
}

causal::Dag resolve_graph(const std::string& graph_file, const std::string& discover,
                          const causal::DataTable& data) {
    if (!graph_file.empty() && !discover.empty()) {
        throw CLI::ValidationError("--graph and --discover are mutually exclusive");
    }
    if (!graph_file.empty()) return load_graph(graph_file);
    if (discover == "lingam") return causal::run_lingam(data);
    if (discover == "pc") {
        const causal::CpdagResult r = causal::run_pc(data);
        if (!r.skeleton.empty()) {
            throw std::runtime_error("pc left undirected edges; use --discover lingam or a --graph file");
        }
        causal::Dag g;
        for (const auto& [a, b] : r.directed) g.add_edge(a, b);
        for (const auto& n : data.names()) g.add_node(n);
        return g;
    }
    throw CLI::ValidationError("provide --graph FILE or --discover {pc,lingam}");
}

void write_or_print(const std::string& out, const std::string& content) {
    if (out.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << content;
}

const causal::Estimand* pick(const causal::Identification& id, const std::string& estimator) {
    if (estimator == "auto") return id.estimands.empty() ? nullptr : &id.estimands.front();
    for (const auto& e : id.estimands) {
        if (estimator == causal::strategy_name(e.strategy)) return &e;
    }
    return nullptr;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal discovery, identification, estimation and refutation"};
    app.require_subcommand(1);

    // -- discover --
    auto* discover_cmd = app.add_subcommand("discover", "learn a causal graph from data");
    std::string in_csv, algo = "lingam", out_path;
    double alpha = 0.05;
    discover_cmd->add_option("--in", in_csv, "input CSV")->required();
    discover_cmd->add_option("--algo", algo, "pc or lingam")
        ->check(CLI::IsMember({"pc", "lingam"}));
    discover_cmd->add_option("--alpha", alpha, "CI test level for pc");
    discover_cmd->add_option("--out", out_path, "output DOT path (default stdout)");

    // -- identify --
    auto* identify_cmd = app.add_subcommand("identify", "derive estimands from a graph");
    std::string graph_file, treatment, outcome;
    std::vector<std::string> unobserved;
    identify_cmd->add_option("--graph", graph_file, "DOT file")->required();
    identify_cmd->add_option("--treatment", treatment)->required();
    identify_cmd->add_option("--outcome", outcome)->required();
    identify_cmd->add_option("--unobserved", unobserved, "nodes without data")->delimiter(',');

    // -- estimate --
    auto* estimate_cmd = app.add_subcommand("estimate", "estimate a causal effect");
    std::string est_csv, est_graph, est_discover, estimator = "auto", est_out;
    std::string est_treatment, est_outcome;
    std::vector<std::string> est_unobserved;
    estimate_cmd->add_option("--in", est_csv, "input CSV")->required();
    estimate_cmd->add_option("--graph", est_graph, "DOT file");
    estimate_cmd->add_option("--discover", est_discover)->check(CLI::IsMember({"pc", "lingam"}));
    estimate_cmd->add_option("--treatment", est_treatment)->required();
    estimate_cmd->add_option("--outcome", est_outcome)->required();
    estimate_cmd->add_option("--estimator", estimator)
        ->check(CLI::IsMember({"auto", "backdoor", "iv", "frontdoor", "mediation"}));
    estimate_cmd->add_option("--unobserved", est_unobserved)->delimiter(',');
    estimate_cmd->add_option("--out", est_out, "output path (default stdout)");

    // -- refute --
    auto* refute_cmd = app.add_subcommand("refute", "robustness checks for an estimate");
    std::string ref_csv, ref_graph, ref_discover, ref_estimator = "auto", ref_out;
    std::string ref_treatment, ref_outcome;
    std::vector<std::string> refuters{"random_common_cause", "placebo_treatment", "data_subset"};
    size_t k = 100;
    double fraction = 0.8;
    uint64_t ref_seed = 0;
    refute_cmd->add_option("--in", ref_csv)->required();
    refute_cmd->add_option("--graph", ref_graph);
    refute_cmd->add_option("--discover", ref_discover)->check(CLI::IsMember({"pc", "lingam"}));
    refute_cmd->add_option("--treatment", ref_treatment)->required();
    refute_cmd->add_option("--outcome", ref_outcome)->required();
    refute_cmd->add_option("--estimator", ref_estimator);
    refute_cmd->add_option("--refuters", refuters)->delimiter(',');
    refute_cmd->add_option("--k", k, "replicates per refuter");
    refute_cmd->add_option("--fraction", fraction, "subset fraction");
    refute_cmd->add_option("--seed", ref_seed, "base seed for the refuters")->required();
    refute_cmd->add_option("--out", ref_out);

    // -- validate --
    auto* validate_cmd = app.add_subcommand("validate",
                                            "test the graph's independence claims against data");
    std::string val_csv, val_graph;
    double val_alpha = 0.01;
    validate_cmd->add_option("--in", val_csv)->required();
    validate_cmd->add_option("--graph", val_graph)->required();
    validate_cmd->add_option("--alpha", val_alpha);

    // -- simulate --
    auto* simulate_cmd = app.add_subcommand("simulate", "generate a dataset");
    simulate_cmd->require_subcommand(1);
    auto* sim_ohm = simulate_cmd->add_subcommand("ohm", "wire current dataset");
    size_t ohm_rows = 10000;
    uint64_t sim_seed = 0;
    std::string sim_out;
    sim_ohm->add_option("--rows", ohm_rows);
    sim_ohm->add_option("--seed", sim_seed)->required();
    sim_ohm->add_option("--out", sim_out, "output CSV (default stdout)");

    auto* sim_quantum = simulate_cmd->add_subcommand("quantum", "two-qubit measurement dataset");
    size_t states = 20, shots = 100;
    uint64_t q_seed = 0;
    std::string q_out;
    sim_quantum->add_option("--states", states);
    sim_quantum->add_option("--shots", shots);
    sim_quantum->add_option("--seed", q_seed)->required();
    sim_quantum->add_option("--out", q_out);

    auto* sim_tides = simulate_cmd->add_subcommand("tides", "synthetic tide-height fixture");
    size_t days = 366;
    uint64_t t_seed = 0;
    std::string tides_dir = ".";
    sim_tides->add_option("--days", days);
    sim_tides->add_option("--seed", t_seed)->required();
    sim_tides->add_option("--out-dir", tides_dir, "directory for the three CSV files");

    // -- run --
    auto* run_cmd = app.add_subcommand("run", "full pipeline from a config file");
    std::string config_path, run_out;
    run_cmd->add_option("--config", config_path)->required();
    run_cmd->add_option("--out", run_out, "override the config's output base path");

    // -- report --
    auto* report_cmd = app.add_subcommand("report", "tabulate pipeline summary CSVs");
    std::vector<std::string> report_inputs;
    report_cmd->add_option("--in", report_inputs, "summary CSV files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*discover_cmd) {
            const causal::DataTable data = causal::DataTable::read_csv_file(in_csv);
            if (algo == "lingam") {
                write_or_print(out_path, causal::serialize_dot(causal::run_lingam(data)));
            } else {
                write_or_print(out_path, causal::run_pc(data, alpha).to_dot());
            }
        } else if (*identify_cmd) {
            causal::Dag g = load_graph(graph_file);
            for (const auto& u : unobserved) g.set_unobserved(u);
            std::cout << causal::format_identification(
                causal::identify_effect(g, treatment, outcome));
        } else if (*estimate_cmd) {
            const causal::DataTable data = causal::DataTable::read_csv_file(est_csv);
            causal::Dag g = resolve_graph(est_graph, est_discover, data);
            for (const auto& u : est_unobserved) g.set_unobserved(u);
            const causal::Identification id = causal::identify_effect(g, est_treatment, est_outcome);
            const causal::Estimand* e = pick(id, estimator);
            if (!e) throw std::runtime_error("no estimand available for estimator '" + estimator + "'");
            std::string out = causal::format_identification(id);
            if (e->strategy == causal::Strategy::Mediation) {
                const causal::MediationEstimate m = causal::estimate_mediation(data, *e);
                out += "total: " + fmt(m.total.ate) + "\ndirect: " + fmt(m.direct.ate) +
                       "\nindirect: " + fmt(m.indirect.ate) + "\n";
            } else {
                const causal::Estimate est = causal::estimate_effect(data, *e);
                out += "Estimate: " + fmt(est.ate) + "\n95% CI: [" + fmt(est.ci_low) + ", " +
                       fmt(est.ci_high) + "]\np-value: " + fmt(est.p_value) + "\n";
            }
            write_or_print(est_out, out);
        } else if (*refute_cmd) {
            const causal::DataTable data = causal::DataTable::read_csv_file(ref_csv);
            const causal::Dag g = resolve_graph(ref_graph, ref_discover, data);
            const causal::Identification id = causal::identify_effect(g, ref_treatment, ref_outcome);
            const causal::Estimand* e = pick(id, ref_estimator);
            if (!e) throw std::runtime_error("no estimand available");
            const causal::Estimate est = causal::estimate_effect(data, *e);
            const causal::Rng base(ref_seed);
            std::string out = "Estimated effect: " + fmt(est.ate) + "\n\n";
            std::vector<causal::RefutationResult> results;
            size_t stream = 0;
            for (const auto& method : refuters) {
                const causal::Rng sub = base.derive(1000 + stream++);
                if (method == "random_common_cause") {
                    results.push_back(causal::refute_random_common_cause(data, *e, est, k, sub));
                } else if (method == "placebo_treatment") {
                    results.push_back(causal::refute_placebo(data, *e, est, k, sub));
                } else if (method == "data_subset") {
                    results.push_back(causal::refute_data_subset(data, *e, est, fraction, k, sub));
                } else {
                    throw std::runtime_error("unknown refuter: " + method);
                }
                out += causal::format_refutation(results.back()) + "\n";
            }
            out += "averaged p-value: " + fmt(causal::aggregate_confidence(results)) + "\n";
            write_or_print(ref_out, out);
        } else if (*validate_cmd) {
            const causal::DataTable data = causal::DataTable::read_csv_file(val_csv);
            const causal::Dag g = load_graph(val_graph);
            const causal::ValidationResult r = causal::validate_model(g, data, val_alpha);
            for (const auto& line : r.lines) std::cout << line << "\n";
            std::cout << r.checks << " claims checked, " << r.violations << " violated\n";
            return r.violations == 0 ? 0 : 1;
        } else if (*sim_ohm) {
            causal::Rng rng(sim_seed);
            const causal::DataTable t =
                causal::generate_ohm_dataset(ohm_rows, causal::OhmRanges{}, causal::OhmConstants{}, rng);
            std::ostringstream ss;
            t.write_csv(ss);
            write_or_print(sim_out, ss.str());
        } else if (*sim_quantum) {
            causal::Rng rng(q_seed);
            const causal::DataTable t = causal::build_entanglement_dataset(states, shots, rng);
            std::ostringstream ss;
            t.write_csv(ss);
            write_or_print(q_out, ss.str());
        } else if (*sim_tides) {
            causal::Rng rng(t_seed);
            const causal::TideFixture f = causal::generate_tide_fixture(days, rng);
            f.earth_sun.write_csv_file(tides_dir + "/earth_sun.csv");
            f.earth_moon.write_csv_file(tides_dir + "/earth_moon.csv");
            f.tide.write_csv_file(tides_dir + "/tide_height.csv");
            std::cout << "wrote earth_sun.csv, earth_moon.csv, tide_height.csv to " << tides_dir
                      << "\n";
        } else if (*run_cmd) {
            causal::PipelineConfig cfg = causal::load_pipeline_config(config_path);
            if (!run_out.empty()) cfg.out = run_out;
            const causal::Report rep = causal::run_pipeline(cfg);
            if (cfg.out.empty()) {
                std::cout << rep.text;
            } else {
                write_or_print(cfg.out + ".txt", rep.text);
                write_or_print(cfg.out + ".csv", rep.csv);
            }
            if (!rep.ok) {
                std::cerr << "pipeline failed at stage " << rep.failed_stage << ": " << rep.error
                          << "\n";
                return 1;
            }
        } else if (*report_cmd) {
            // Merge summary CSVs and align columns.
            std::vector<std::vector<std::string>> rows;
            std::string header;
            for (const auto& path : report_inputs) {
                std::ifstream in(path);
                if (!in) throw std::runtime_error("cannot open " + path);
                std::string line;
                bool first = true;
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    if (first) {
                        if (header.empty()) header = line;
                        first = false;
                        continue;
                    }
                    std::vector<std::string> fields;
                    std::string cur;
                    for (char c : line) {
                        if (c == ',') {
                            fields.push_back(cur);
                            cur.clear();
                        } else {
                            cur.push_back(c);
                        }
                    }
                    fields.push_back(cur);
                    rows.push_back(std::move(fields));
                }
            }
            std::vector<std::string> head;
            {
                std::string cur;
                for (char c : header) {
                    if (c == ',') {
                        head.push_back(cur);
                        cur.clear();
                    } else {
                        cur.push_back(c);
                    }
                }
                head.push_back(cur);
            }
            std::vector<size_t> width(head.size(), 0);
            for (size_t c = 0; c < head.size(); ++c) width[c] = head[c].size();
            for (const auto& r : rows) {
                for (size_t c = 0; c < r.size() && c < width.size(); ++c) {
                    width[c] = std::max(width[c], r[c].size());
                }
            }
            auto print_row = [&](const std::vector<std::string>& r) {
                for (size_t c = 0; c < head.size(); ++c) {
                    const std::string v = c < r.size() ? r[c] : "";
                    std::cout << (c ? "  " : "") << v << std::string(width[c] - v.size(), ' ');
                }
                std::cout << "\n";
            };
            print_row(head);
            for (const auto& r : rows) print_row(r);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
