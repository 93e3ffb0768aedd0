#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causal/dag.hpp"
#include "causal/estimate.hpp"
#include "causal/identify.hpp"
#include "causal/refute.hpp"
#include "causal/table.hpp"

namespace causal {

// Flat key-value configuration with [section] headers. Every stochastic
// stage requires the explicit seed; there is no wall-clock default.
struct PipelineConfig {
    // [data]
    std::string csv;        // path to a CSV, or
    std::string generator;  // "ohm" | "quantum" | "tides-fixture"
    std::map<std::string, std::string> generator_params;

    // [model]
    std::string dot_file;
    std::string dot_inline;
    std::string discover;  // "pc" | "lingam"
    std::vector<std::string> unobserved;

    // [effect]
    std::string treatment;
    std::string outcome;
    std::string estimator = "auto";  // auto|backdoor|iv|frontdoor|mediation

    // [refute]
    std::vector<std::string> refuters;
    size_t replicates = 100;
    double fraction = 0.8;

    // [run]
    std::optional<uint64_t> seed;
    std::string out;  // report path base; "<out>.txt" and "<out>.csv"
};

PipelineConfig parse_pipeline_config(const std::string& text);
PipelineConfig load_pipeline_config(const std::string& path);

struct Report {
    bool ok = false;
    std::string failed_stage;  // empty when ok
    std::string error;

    std::string text;  // human-readable report
    std::string csv;   // machine-readable twin, one summary row

    Dag model;
    Identification identification;
    std::optional<Estimate> estimate;
    std::optional<MediationEstimate> mediation;
    std::vector<RefutationResult> refutations;
    std::optional<double> confidence;
};

// Executes load/generate -> (optional) discovery -> identify -> estimate ->
// refute. A stage failure is recorded with its stage name and downstream
// stages are skipped; the partial report is still rendered.
Report run_pipeline(const PipelineConfig& config);

// Model-versus-data conformance: tests every d-separation the graph claims
// between non-adjacent variable pairs with the Fisher-z test at alpha.
// Returns human-readable lines; `violations` counts claims the data
// rejects.
struct ValidationResult {
    std::vector<std::string> lines;
    size_t checks = 0;
    size_t violations = 0;
};
ValidationResult validate_model(const Dag& g, const DataTable& data, double alpha = 0.01);

}  // namespace causal
