// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "csiloc/types.hpp"

namespace csiloc {

/// Real feature layout: all real parts in canonical ap/rx/subcarrier order,
/// then all imaginary parts in the same order. Length 2 * m * n_rx * n_ap.
Eigen::VectorXd encode(const CsiSample& sample);

/// Features as rows, labels (x, y) as rows.
struct EncodedSet {
    Eigen::MatrixXd features;  // N x d
    Eigen::MatrixXd labels;    // N x 2
    Eigen::Index size() const { return features.rows(); }
};

EncodedSet encode_dataset(const Dataset& dataset);

/// Per-dimension affine normalizer fit on training features only.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd std_dev;  // floored at 1e-8

    Eigen::MatrixXd apply(const Eigen::MatrixXd& features) const;
};

Standardizer standardize_fit(const Eigen::MatrixXd& features);

/// Fully connected regression net: ReLU hidden layers, identity output head.
struct MlpModel {
    std::vector<Eigen::Index> layer_sizes;  // e.g. [d, 256, 256, 256, 2]
    std::vector<Eigen::MatrixXd> weights;   // weights[l]: sizes[l+1] x sizes[l]
    std::vector<Eigen::VectorXd> biases;

    Eigen::Index input_dim() const { return layer_sizes.front(); }
    Eigen::Index output_dim() const { return layer_sizes.back(); }
};

/// He-style uniform fan-in initialization, deterministic given init_seed.
MlpModel init_model(const std::vector<Eigen::Index>& layer_sizes,
                    std::uint64_t init_seed);

/// Default architecture of the localization experiments: 3 x 256 hidden.
MlpModel default_model(Eigen::Index input_dim, std::uint64_t init_seed);

Location forward(const MlpModel& model, const Eigen::VectorXd& x);
Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& x);

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

/// Mean squared Euclidean error over the batch plus its backprop gradients.
double loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& x,
                          const Eigen::MatrixXd& y, Gradients& grads);

struct TrainConfig {
    std::size_t epochs = 300;
    std::size_t batch_size = 128;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t shuffle_seed = 0;
    std::uint64_t init_seed = 0;
};

/// Adam mini-batch training with per-epoch reshuffle. Deterministic given
/// config. Throws TrainingError naming the epoch if the loss goes non-finite.
std::vector<double> train(MlpModel& model, const EncodedSet& train_set,
                          const TrainConfig& config);

/// (1/N) sum ||f(x_i) - y_i||^2, in squared meters.
double evaluate_mse(const MlpModel& model, const EncodedSet& test_set);

// Checkpoint: magic "MLPC" | u32 n_layers | u32 sizes... | u8 activation (0 =
// relu-hidden/identity-out) | u64 init_seed | u64 shuffle_seed | parameters as
// f64 little-endian, layer-major, W row-major then bias, per layer.
void save_model(const MlpModel& model, const std::filesystem::path& path,
                std::uint64_t init_seed = 0, std::uint64_t shuffle_seed = 0);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace csiloc
