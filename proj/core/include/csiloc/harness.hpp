// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csiloc/augment.hpp"
#include "csiloc/channel.hpp"
#include "csiloc/io.hpp"
#include "csiloc/mlp.hpp"
#include "csiloc/types.hpp"

namespace csiloc {

struct RegimeSpec {
    std::string name;       // small | medium | large | custom
    std::size_t train_size;
};

/// Full description of one experiment campaign (the regime x multiple x
/// method grid). Built from a key-value config file; see README for keys.
struct ExperimentConfig {
    std::string dataset_path;                 // .csid source, or
    std::optional<Scenario> scenario;         // synthesize instead
    std::size_t synth_samples = 0;            // 0 = auto from largest regime

    std::vector<RegimeSpec> regimes;          // default: small 4000
    std::vector<double> multiples;            // default 1..6, ascending
    std::vector<std::string> methods;         // subset of none/phase/amplitude/noise
    std::map<std::string, double> p_star_by_regime;   // small/medium 1.5, large 0.75
    std::map<std::string, std::size_t> epochs_by_method;  // phase 300, others 150
    std::size_t batch_size = 128;
    double learning_rate = 1e-3;
    double noise_variance = 1.0;              // noise baseline
    bool standardize = true;

    double test_fraction = 0.2;
    std::uint64_t split_seed = 1;
    std::string subsample = "random";         // random | prefix
    std::size_t repetitions = 5;
    std::uint64_t master_seed = 0;

    std::optional<NonidealityProfile> nonideality_test;
    double robustness_multiple = 5.0;

    std::map<std::string, std::string> echo;  // resolved key-value form
};

ExperimentConfig experiment_config_from_file(const std::filesystem::path& path);
ExperimentConfig experiment_config_from_text(const std::string& text);

struct CellFailure {
    std::string environment, regime, method;
    double multiple;
    std::uint64_t seed;
    std::string message;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    std::vector<CellFailure> failures;
    std::map<std::string, std::string> config_echo;
    std::vector<double> row_wall_seconds;  // parallel to rows (0 for resumed rows)
};

/// Shuffled disjoint partition; test gets round(test_fraction * N) samples.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double test_fraction,
                                  std::uint64_t seed);

/// Takes n samples from the dataset, either uniformly at random without
/// replacement or as the leading prefix.
Dataset subsample(const Dataset& dataset, std::size_t n, const std::string& mode,
                  std::uint64_t seed);

struct CellParams {
    double p_star_db = 1.5;
    double noise_variance = 1.0;
    bool standardize = true;
};

/// One grid cell: augment the train partition to round(multiple * N), train,
/// evaluate on the untouched test partition.
ReportRow run_cell(const Dataset& train, const Dataset& test,
                   const std::string& method, double multiple,
                   const CellParams& params, const TrainConfig& train_config,
                   std::uint64_t seed);

/// Full grid. Resumable: rows already present in an existing CSV at out_path
/// (matched by environment/regime/multiple/method/seed) are not recomputed.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_path,
                                ReportFormat format);

/// Robustness protocol: clean training, test set perturbed by the configured
/// nonideality profile, unaugmented vs augmented models on identical data.
ExperimentReport run_robustness(const ExperimentConfig& config,
                                const std::filesystem::path& out_path,
                                ReportFormat format);

/// Deterministic per-cell seed derivation.
std::uint64_t cell_seed(std::uint64_t master, std::size_t regime_idx,
                        std::size_t method_idx, std::size_t multiple_idx,
                        std::size_t repetition);

}  // namespace csiloc
