// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#include "csiloc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "csiloc/config.hpp"
#include "csiloc/rng.hpp"

namespace csiloc {

namespace {

std::size_t regime_size_by_name(const std::string& name) {
    if (name == "small") return 4000;
    if (name == "medium") return 20000;
    if (name == "large") return 40000;
    throw ConfigError("unknown regime name: " + name);
}

AugmentMethod method_from_string(const std::string& name) {
    if (name == "phase") return AugmentMethod::phase;
    if (name == "amplitude") return AugmentMethod::amplitude;
    if (name == "noise") return AugmentMethod::noise;
    throw ConfigError("unknown augmentation method: " + name);
}

std::string row_key(const std::string& env, const std::string& regime,
                    double multiple, const std::string& method,
                    std::uint64_t seed) {
    std::ostringstream os;
    os << env << '|' << regime << '|' << multiple << '|' << method << '|' << seed;
    return os.str();
}

Dataset load_source(const ExperimentConfig& config) {
    if (!config.dataset_path.empty()) return read_csid(config.dataset_path);
    if (!config.scenario) throw ConfigError("config needs dataset or scenario");
    std::size_t n = config.synth_samples;
    if (n == 0) {
        std::size_t largest = 0;
        for (const RegimeSpec& r : config.regimes) largest = std::max(largest, r.train_size);
        // enough for the largest train regime plus the held-out fraction
        n = static_cast<std::size_t>(
            std::ceil(static_cast<double>(largest) / (1.0 - config.test_fraction))) + 1;
    }
    return synthesize_dataset(*config.scenario, n);
}

void write_sidecar(const ExperimentReport& report,
                   const std::filesystem::path& out_path) {
    std::ofstream out(out_path.string() + ".config");
    for (const auto& [k, v] : report.config_echo) out << k << " = " << v << "\n";
    for (const CellFailure& f : report.failures) {
        out << "# failed_cell = " << f.environment << ',' << f.regime << ','
            << f.multiple << ',' << f.method << ',' << f.seed << ": " << f.message
            << "\n";
    }
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master, std::size_t regime_idx,
                        std::size_t method_idx, std::size_t multiple_idx,
                        std::size_t repetition) {
    std::uint64_t s = mix64(master);
    s = mix64(s ^ (0x01ULL + regime_idx));
    s = mix64(s ^ ((0x100ULL + method_idx) << 8));
    s = mix64(s ^ ((0x10000ULL + multiple_idx) << 16));
    s = mix64(s ^ ((0x1000000ULL + repetition) << 24));
    return s;
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, double test_fraction,
                                  std::uint64_t seed) {
    if (dataset.size() < 2) throw ConfigError("split needs at least 2 samples");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("test_fraction must lie in (0, 1)");
    }
    const std::size_t n = dataset.size();
    std::size_t n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(n)));
    n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto rng = substream(seed, 0x73706c69);  // "spli"
    std::shuffle(order.begin(), order.end(), rng);

    Dataset train, test;
    train.dims = test.dims = dataset.dims;
    train.env_tag = test.env_tag = dataset.env_tag;
    for (std::size_t i = 0; i < n_test; ++i) {
        test.samples.push_back(dataset.samples[order[i]]);
    }
    for (std::size_t i = n_test; i < n; ++i) {
        train.samples.push_back(dataset.samples[order[i]]);
    }
    return {std::move(train), std::move(test)};
}

Dataset subsample(const Dataset& dataset, std::size_t n, const std::string& mode,
                  std::uint64_t seed) {
    if (n == 0 || n > dataset.size()) {
        throw ConfigError("subsample size " + std::to_string(n) +
                          " out of range for dataset of " +
                          std::to_string(dataset.size()));
    }
    Dataset out;
    out.dims = dataset.dims;
    out.env_tag = dataset.env_tag;
    if (mode == "prefix") {
        out.samples.assign(dataset.samples.begin(),
                           dataset.samples.begin() + static_cast<std::ptrdiff_t>(n));
    } else if (mode == "random") {
        std::vector<std::size_t> order(dataset.size());
        std::iota(order.begin(), order.end(), 0);
        auto rng = substream(seed, 0x73756273);  // "subs"
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i = 0; i < n; ++i) {
            out.samples.push_back(dataset.samples[order[i]]);
        }
    } else {
        throw ConfigError("subsample mode must be random or prefix");
    }
    return out;
}

ReportRow run_cell(const Dataset& train, const Dataset& test,
                   const std::string& method, double multiple,
                   const CellParams& params, const TrainConfig& train_config,
                   std::uint64_t seed) {
    if (multiple < 1.0) throw ConfigError("multiple must be >= 1");

    Dataset augmented;
    const Dataset* d_star = &train;
    if (method != "none" && multiple > 1.0) {
        AugmentPlan plan;
        plan.method = method_from_string(method);
        plan.target_size = static_cast<std::size_t>(
            std::llround(multiple * static_cast<double>(train.size())));
        plan.p_star_db = params.p_star_db;
        plan.noise_variance = params.noise_variance;
        plan.seed = mix64(seed ^ 0x61756721ULL);
        augmented = augment(train, plan);
        d_star = &augmented;
    }

    EncodedSet train_enc = encode_dataset(*d_star);
    EncodedSet test_enc = encode_dataset(test);
    if (params.standardize) {
        const Standardizer std_ = standardize_fit(train_enc.features);
        train_enc.features = std_.apply(train_enc.features);
        test_enc.features = std_.apply(test_enc.features);
    }

    TrainConfig tc = train_config;
    tc.init_seed = mix64(seed ^ 0x696e6974ULL);
    tc.shuffle_seed = mix64(seed ^ 0x73687566ULL);
    MlpModel model = default_model(train_enc.features.cols(), tc.init_seed);
    csiloc::train(model, train_enc, tc);

    ReportRow row;
    row.environment = train.env_tag;
    row.regime = "custom";
    row.multiple = multiple;
    row.method = method;
    row.test_mse = evaluate_mse(model, test_enc);
    row.seed = seed;
    return row;
}

ExperimentConfig experiment_config_from_text(const std::string& text) {
    const KeyValueConfig cfg = KeyValueConfig::parse(text);
    ExperimentConfig ec;
    ec.dataset_path = cfg.get_string("dataset", "");
    const std::string scenario_path = cfg.get_string("scenario", "");
    if (!scenario_path.empty()) {
        std::ifstream in(scenario_path);
        if (!in) throw ConfigError("cannot open scenario file: " + scenario_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        ec.scenario = scenario_from_config(buf.str());
    } else if (cfg.has("scenario_inline")) {
        // semicolon-separated key=value pairs
        std::string inline_text = cfg.require_string("scenario_inline");
        std::replace(inline_text.begin(), inline_text.end(), ';', '\n');
        ec.scenario = scenario_from_config(inline_text);
    }
    if (ec.dataset_path.empty() && !ec.scenario) {
        throw ConfigError("config needs dataset= or scenario=");
    }
    ec.synth_samples = static_cast<std::size_t>(cfg.get_int("synth_samples", 0));

    for (const std::string& name : cfg.get_string_list("regimes", {"small"})) {
        if (name.rfind("custom:", 0) == 0) {
            ec.regimes.push_back({"custom", static_cast<std::size_t>(
                                                std::stoull(name.substr(7)))});
        } else {
            ec.regimes.push_back({name, regime_size_by_name(name)});
        }
    }
    ec.multiples = cfg.get_double_list("multiples", {1, 2, 3, 4, 5, 6});
    if (!std::is_sorted(ec.multiples.begin(), ec.multiples.end())) {
        throw ConfigError("multiples must be sorted ascending");
    }
    for (double m : ec.multiples) {
        if (m < 1.0) throw ConfigError("multiples must be >= 1");
    }
    ec.methods = cfg.get_string_list("methods", {"none", "phase"});

    ec.p_star_by_regime["small"] = cfg.get_double("p_star_small", 1.5);
    ec.p_star_by_regime["medium"] = cfg.get_double("p_star_medium", 1.5);
    ec.p_star_by_regime["large"] = cfg.get_double("p_star_large", 0.75);
    ec.p_star_by_regime["custom"] = cfg.get_double("p_star_custom", 1.5);

    ec.epochs_by_method["none"] =
        static_cast<std::size_t>(cfg.get_int("epochs_none", 300));
    ec.epochs_by_method["phase"] =
        static_cast<std::size_t>(cfg.get_int("epochs_phase", 300));
    ec.epochs_by_method["amplitude"] =
        static_cast<std::size_t>(cfg.get_int("epochs_amplitude", 150));
    ec.epochs_by_method["noise"] =
        static_cast<std::size_t>(cfg.get_int("epochs_noise", 150));

    ec.batch_size = static_cast<std::size_t>(cfg.get_int("batch_size", 128));
    ec.learning_rate = cfg.get_double("learning_rate", 1e-3);
    ec.noise_variance = cfg.get_double("noise_variance", 1.0);
    ec.standardize = cfg.get_bool("standardize", true);
    ec.test_fraction = cfg.get_double("test_fraction", 0.2);
    ec.split_seed = static_cast<std::uint64_t>(cfg.get_int("split_seed", 1));
    ec.subsample = cfg.get_string("subsample", "random");
    ec.repetitions = static_cast<std::size_t>(cfg.get_int("repetitions", 5));
    if (ec.repetitions == 0) throw ConfigError("repetitions must be >= 1");
    ec.master_seed = static_cast<std::uint64_t>(cfg.get_int("master_seed", 0));

    if (cfg.get_bool("test_phase_drift", false) ||
        cfg.get_double("test_gain_drift_db", 0.0) > 0.0) {
        NonidealityProfile profile;
        profile.phase_drift = cfg.get_bool("test_phase_drift", false);
        profile.gain_drift_db = cfg.get_double("test_gain_drift_db", 0.0);
        ec.nonideality_test = profile;
    }
    ec.robustness_multiple = cfg.get_double("robustness_multiple", 5.0);

    // preset: small regime, phase method, x10 augmentation
    if (cfg.get_bool("preset_ten_percent", false)) {
        ec.regimes = {{"small", 4000}};
        ec.multiples = {10.0};
        ec.methods = {"phase"};
    }

    ec.echo = cfg.entries();
    // resolved defaults worth echoing even when unset
    auto echo_if_absent = [&](const std::string& k, const std::string& v) {
        if (!ec.echo.count(k)) ec.echo[k] = v;
    };
    echo_if_absent("test_fraction", std::to_string(ec.test_fraction));
    echo_if_absent("split_seed", std::to_string(ec.split_seed));
    echo_if_absent("repetitions", std::to_string(ec.repetitions));
    echo_if_absent("optimizer", "adam lr=" + std::to_string(ec.learning_rate) +
                                    " betas=0.9,0.999 eps=1e-8 batch=" +
                                    std::to_string(ec.batch_size));
    return ec;
}

ExperimentConfig experiment_config_from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return experiment_config_from_text(buf.str());
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_path,
                                ReportFormat format) {
    const Dataset source = load_source(config);
    auto [train_pool, test] = split(source, config.test_fraction, config.split_seed);

    // resume support: previously completed rows are reused as-is
    std::map<std::string, ReportRow> done;
    if (format == ReportFormat::csv && std::filesystem::exists(out_path)) {
        std::ifstream in(out_path);
        for (const ReportRow& r : read_report_csv(in)) {
            done[row_key(r.environment, r.regime, r.multiple, r.method, r.seed)] = r;
        }
    }

    ExperimentReport report;
    report.config_echo = config.echo;

    for (std::size_t ri = 0; ri < config.regimes.size(); ++ri) {
        const RegimeSpec& regime = config.regimes[ri];
        if (regime.train_size + test.size() > source.size() + test.size() ||
            regime.train_size > train_pool.size()) {
            throw ConfigError("regime " + regime.name + " needs " +
                              std::to_string(regime.train_size) +
                              " train samples, pool has " +
                              std::to_string(train_pool.size()));
        }
        const Dataset train = subsample(train_pool, regime.train_size,
                                        config.subsample,
                                        mix64(config.master_seed ^ (ri + 1)));

        CellParams params;
        params.p_star_db = config.p_star_by_regime.count(regime.name)
                               ? config.p_star_by_regime.at(regime.name)
                               : 1.5;
        params.noise_variance = config.noise_variance;
        params.standardize = config.standardize;

        for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
            const std::string& method = config.methods[mi];
            TrainConfig tc;
            tc.epochs = config.epochs_by_method.count(method)
                            ? config.epochs_by_method.at(method)
                            : 150;
            tc.batch_size = config.batch_size;
            tc.learning_rate = config.learning_rate;

            for (std::size_t xi = 0; xi < config.multiples.size(); ++xi) {
                for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
                    const std::uint64_t seed =
                        cell_seed(config.master_seed, ri, mi, xi, rep);
                    const std::string key = row_key(
                        train.env_tag, regime.name, config.multiples[xi], method, seed);
                    if (auto it = done.find(key); it != done.end()) {
                        report.rows.push_back(it->second);
                        report.row_wall_seconds.push_back(0.0);
                        continue;
                    }
                    const auto t0 = std::chrono::steady_clock::now();
                    try {
                        ReportRow row = run_cell(train, test, method,
                                                 config.multiples[xi], params, tc, seed);
                        row.regime = regime.name;
                        report.rows.push_back(std::move(row));
                        report.row_wall_seconds.push_back(
                            std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count());
                    } catch (const std::exception& e) {
                        report.failures.push_back({train.env_tag, regime.name, method,
                                                   config.multiples[xi], seed,
                                                   e.what()});
                    }
                }
            }
        }
    }

    write_report(report.rows, out_path, format);
    write_sidecar(report, out_path);
    return report;
}

ExperimentReport run_robustness(const ExperimentConfig& config,
                                const std::filesystem::path& out_path,
                                ReportFormat format) {
    if (!config.nonideality_test) {
        throw ConfigError("robustness run needs test_phase_drift or test_gain_drift_db");
    }
    if (!config.scenario) {
        throw ConfigError("robustness run needs a synthetic scenario source");
    }
    const Dataset source = load_source(config);
    auto [train_pool, test_clean] =
        split(source, config.test_fraction, config.split_seed);

    ExperimentReport report;
    report.config_echo = config.echo;

    const NonidealityProfile& profile = *config.nonideality_test;
    std::string tag = source.env_tag;
    if (profile.phase_drift) tag += "+phase-drift";
    if (profile.gain_drift_db > 0.0) tag += "+gain-drift";

    for (std::size_t ri = 0; ri < config.regimes.size(); ++ri) {
        const RegimeSpec& regime = config.regimes[ri];
        Dataset train = subsample(train_pool, regime.train_size, config.subsample,
                                  mix64(config.master_seed ^ (ri + 1)));
        train.env_tag = tag;

        CellParams params;
        params.p_star_db = config.p_star_by_regime.count(regime.name)
                               ? config.p_star_by_regime.at(regime.name)
                               : 1.5;
        params.noise_variance = config.noise_variance;
        params.standardize = config.standardize;

        for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
            // one perturbation draw per repetition, shared by every method
            const std::uint64_t perturb_seed = mix64(
                cell_seed(config.master_seed, ri, 0, 0, rep) ^ 0x7065727475524221ULL);
            const Dataset test_perturbed =
                apply_nonideality(test_clean, profile, perturb_seed);

            for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
                const std::string& method = config.methods[mi];
                TrainConfig tc;
                tc.epochs = config.epochs_by_method.count(method)
                                ? config.epochs_by_method.at(method)
                                : 150;
                tc.batch_size = config.batch_size;
                tc.learning_rate = config.learning_rate;
                const double multiple =
                    method == "none" ? 1.0 : config.robustness_multiple;

                const std::uint64_t seed =
                    cell_seed(config.master_seed, ri, mi, 0, rep);
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    ReportRow row = run_cell(train, test_perturbed, method, multiple,
                                             params, tc, seed);
                    row.regime = regime.name;
                    report.rows.push_back(std::move(row));
                    report.row_wall_seconds.push_back(
                        std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count());
                } catch (const std::exception& e) {
                    report.failures.push_back(
                        {tag, regime.name, method, multiple, seed, e.what()});
                }
            }
        }
    }

    write_report(report.rows, out_path, format);
    write_sidecar(report, out_path);
    return report;
}

}  // namespace csiloc
