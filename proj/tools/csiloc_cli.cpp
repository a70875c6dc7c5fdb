// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "csiloc/augment.hpp"
#include "csiloc/channel.hpp"
#include "csiloc/harness.hpp"
#include "csiloc/io.hpp"
#include "csiloc/mlp.hpp"

namespace {

using namespace csiloc;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ReportFormat format_from_path(const std::string& path) {
    return path.size() >= 5 && path.substr(path.size() - 5) == ".json"
               ? ReportFormat::json
               : ReportFormat::csv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CSI localization: synthetic channels, augmentation, MLP training"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "synthesize a labeled CSI dataset");
    std::string gen_scenario, gen_out;
    std::size_t gen_n = 1000;
    std::int64_t gen_seed = -1;
    gen->add_option("--scenario", gen_scenario, "scenario config file")->required();
    gen->add_option("--n", gen_n, "number of samples")->required();
    gen->add_option("--seed", gen_seed, "override scenario seed");
    gen->add_option("--out", gen_out, "output .csid path")->required();

    // augment
    auto* aug = app.add_subcommand("augment", "expand a training dataset");
    std::string aug_in, aug_out, aug_method = "phase";
    double aug_multiple = 0.0, aug_pstar = 1.5, aug_noise_var = 1.0;
    std::size_t aug_target = 0;
    std::uint64_t aug_seed = 0;
    aug->add_option("--in", aug_in)->required();
    aug->add_option("--out", aug_out)->required();
    aug->add_option("--method", aug_method, "phase | amplitude | noise")
        ->check(CLI::IsMember({"phase", "amplitude", "noise"}));
    aug->add_option("--multiple", aug_multiple, "target size = multiple * N (>= 1)");
    aug->add_option("--target-size", aug_target, "explicit N*");
    aug->add_option("--p-star-db", aug_pstar, "amplitude method bound, dB");
    aug->add_option("--noise-var", aug_noise_var, "noise method variance");
    aug->add_option("--seed", aug_seed);

    // train
    auto* tr = app.add_subcommand("train", "train the localization MLP");
    std::string tr_in, tr_model_out;
    std::size_t tr_epochs = 300, tr_batch = 128;
    double tr_lr = 1e-3;
    std::uint64_t tr_seed = 0;
    bool tr_no_standardize = false;
    tr->add_option("--in", tr_in, "training .csid")->required();
    tr->add_option("--epochs", tr_epochs);
    tr->add_option("--batch", tr_batch);
    tr->add_option("--lr", tr_lr);
    tr->add_option("--seed", tr_seed);
    tr->add_flag("--no-standardize", tr_no_standardize,
                 "train on raw features (no per-dimension normalization)");
    tr->add_option("--model-out", tr_model_out)->required();

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "evaluate a model on a dataset");
    std::string ev_model, ev_in;
    bool ev_no_standardize = false;
    ev->add_option("--model", ev_model)->required();
    ev->add_option("--in", ev_in, "test .csid")->required();
    ev->add_flag("--no-standardize", ev_no_standardize);

    // experiment
    auto* ex = app.add_subcommand("experiment", "run the full evaluation grid");
    std::string ex_config, ex_out;
    ex->add_option("--config", ex_config)->required();
    ex->add_option("--out", ex_out, "report path (.csv or .json)")->required();

    // robustness
    auto* rb = app.add_subcommand("robustness",
                                  "augmented vs plain training on perturbed tests");
    std::string rb_config, rb_out;
    rb->add_option("--config", rb_config)->required();
    rb->add_option("--out", rb_out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            Scenario sc = scenario_from_config(slurp(gen_scenario));
            if (gen_seed >= 0) sc.seed = static_cast<std::uint64_t>(gen_seed);
            const Dataset ds = synthesize_dataset(sc, gen_n);
            const std::size_t bytes = write_csid(ds, gen_out);
            std::cout << "wrote " << ds.size() << " samples (" << bytes << " bytes) to "
                      << gen_out << "\n";
        } else if (*aug) {
            const Dataset ds = read_csid(aug_in);
            AugmentPlan plan;
            plan.method = aug_method == "phase" ? AugmentMethod::phase
                          : aug_method == "amplitude" ? AugmentMethod::amplitude
                                                      : AugmentMethod::noise;
            if (aug_target > 0) {
                plan.target_size = aug_target;
            } else if (aug_multiple >= 1.0) {
                plan.target_size = static_cast<std::size_t>(
                    std::llround(aug_multiple * static_cast<double>(ds.size())));
            } else {
                throw ConfigError("need --multiple >= 1 or --target-size");
            }
            plan.p_star_db = aug_pstar;
            plan.noise_variance = aug_noise_var;
            plan.seed = aug_seed;
            const Dataset out = augment(ds, plan);
            write_csid(out, aug_out);
            std::cout << "augmented " << ds.size() << " -> " << out.size()
                      << " samples (" << aug_method << ") to " << aug_out << "\n";
        } else if (*tr) {
            const Dataset ds = read_csid(tr_in);
            EncodedSet enc = encode_dataset(ds);
            if (!tr_no_standardize) {
                const Standardizer s = standardize_fit(enc.features);
                enc.features = s.apply(enc.features);
            }
            TrainConfig tc;
            tc.epochs = tr_epochs;
            tc.batch_size = tr_batch;
            tc.learning_rate = tr_lr;
            tc.init_seed = tr_seed;
            tc.shuffle_seed = tr_seed + 1;
            MlpModel model = default_model(enc.features.cols(), tc.init_seed);
            const auto trace = train(model, enc, tc);
            save_model(model, tr_model_out, tc.init_seed, tc.shuffle_seed);
            std::cout << "final train MSE " << trace.back() << ", model saved to "
                      << tr_model_out << "\n";
            if (!tr_no_standardize) {
                std::cout << "note: trained on standardized features; evaluate "
                             "with matching preprocessing\n";
            }
        } else if (*ev) {
            const MlpModel model = load_model(ev_model);
            const Dataset ds = read_csid(ev_in);
            EncodedSet enc = encode_dataset(ds);
            if (!ev_no_standardize) {
                const Standardizer s = standardize_fit(enc.features);
                enc.features = s.apply(enc.features);
            }
            const double mse = evaluate_mse(model, enc);
            std::cout << "MSE  " << mse << " m^2\n";
            std::cout << "RMSE " << std::sqrt(mse) << " m\n";
        } else if (*ex) {
            const ExperimentConfig cfg = experiment_config_from_file(ex_config);
            const ExperimentReport report =
                run_experiment(cfg, ex_out, format_from_path(ex_out));
            std::cout << "wrote " << report.rows.size() << " rows ("
                      << report.failures.size() << " failed cells) to " << ex_out
                      << "\n";
        } else if (*rb) {
            const ExperimentConfig cfg = experiment_config_from_file(rb_config);
            const ExperimentReport report =
                run_robustness(cfg, rb_out, format_from_path(rb_out));
            std::cout << "wrote " << report.rows.size() << " rows ("
                      << report.failures.size() << " failed cells) to " << rb_out
                      << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
