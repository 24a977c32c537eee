#pragma once

#include "qadd/cqa.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qadd {

/// Deterministic description of a randomized check: instances are the cross
/// product dims x alphas x samples, each evaluated from an instance seed
/// derived as seed_mix(seed, instance_index).
struct EnsembleSpec {
    std::vector<int> dims;
    int n_samples = 100;
    StateKind state_kind = StateKind::ginibre_mixed;
    std::vector<double> alphas;
    std::uint64_t seed = 0;
};

enum class InstanceStatus { pass, fail, flagged };

std::string to_string(InstanceStatus s);

struct InstanceRecord {
    std::uint64_t instance_seed = 0;
    int dim = 0;
    double alpha = 0.0;
    double margin = 0.0;
    InstanceStatus status = InstanceStatus::pass;
    std::vector<double> extras;
};

struct TheoremReport {
    std::string theorem_id;
    int n_pass = 0;
    int n_fail = 0;
    int n_flagged = 0;
    double worst_margin = 0.0;
    std::uint64_t worst_instance_seed = 0;
    std::int64_t runtime_ms = 0;
    EnsembleSpec ensemble;
    std::string solver;
    double tol = 0.0;
    std::vector<std::string> extra_columns;
    std::map<std::string, double> summary;
    std::vector<InstanceRecord> instances;
};

/// Identifiers of every registered suite, one per verified claim.
const std::vector<std::string>& suite_ids();
bool is_suite(const std::string& theorem_id);

/// One-line statement of what a suite checks.
std::string suite_claim(const std::string& theorem_id);

/// Runs a suite over the ensemble. Deterministic for a fixed spec regardless
/// of n_workers (0 selects the hardware thread count).
TheoremReport run_suite(const std::string& theorem_id, const EnsembleSpec& spec,
                        const CqaOptions& opts = {}, int n_workers = 0);

/// Re-evaluates a single instance and dumps its inputs, intermediate
/// matrices and margins.
nlohmann::json replay(const std::string& theorem_id, std::uint64_t instance_seed, int dim,
                      double alpha, StateKind kind = StateKind::ginibre_mixed,
                      const CqaOptions& opts = {});

/// JSON form of a report (per-instance rows go to CSV instead). Setting
/// include_runtime=false drops the only nondeterministic field.
std::string report_to_json(const TheoremReport& report, bool include_runtime = true);

/// CSV of per-instance margins: instance_seed, dim, alpha, margin, status,
/// then any suite-specific columns. Header row always present, floats with
/// 17 significant digits.
std::string report_to_csv(const TheoremReport& report);

}  // namespace qadd
