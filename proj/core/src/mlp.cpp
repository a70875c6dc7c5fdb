// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#include "csiloc/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include "csiloc/rng.hpp"

namespace csiloc {

Eigen::VectorXd encode(const CsiSample& sample) {
    const Eigen::Index n = static_cast<Eigen::Index>(sample.csi.size());
    Eigen::VectorXd x(2 * n);
    for (Eigen::Index e = 0; e < n; ++e) {
        x[e] = sample.csi[static_cast<std::size_t>(e)].real();
        x[n + e] = sample.csi[static_cast<std::size_t>(e)].imag();
    }
    return x;
}

EncodedSet encode_dataset(const Dataset& dataset) {
    const Eigen::Index n = static_cast<Eigen::Index>(dataset.size());
    const Eigen::Index d = 2 * static_cast<Eigen::Index>(dataset.dims.flat_size());
    EncodedSet set;
    set.features.resize(n, d);
    set.labels.resize(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        const CsiSample& s = dataset.samples[static_cast<std::size_t>(i)];
        set.features.row(i) = encode(s).transpose();
        set.labels(i, 0) = s.label.x;
        set.labels(i, 1) = s.label.y;
    }
    return set;
}

Standardizer standardize_fit(const Eigen::MatrixXd& features) {
    if (features.rows() == 0) throw ConfigError("standardize_fit on empty set");
    Standardizer s;
    s.mean = features.colwise().mean();
    const Eigen::MatrixXd centered = features.rowwise() - s.mean.transpose();
    s.std_dev = (centered.array().square().colwise().sum() /
                 static_cast<double>(features.rows()))
                    .sqrt()
                    .matrix();
    s.std_dev = s.std_dev.cwiseMax(1e-8);
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& features) const {
    return (features.rowwise() - mean.transpose()).array().rowwise() /
           std_dev.transpose().array();
}

MlpModel init_model(const std::vector<Eigen::Index>& layer_sizes,
                    std::uint64_t init_seed) {
    if (layer_sizes.size() < 2) throw ConfigError("need at least input and output layer");
    MlpModel model;
    model.layer_sizes = layer_sizes;
    auto rng = substream(init_seed, 0x6d6c7000);  // independent of data streams
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const Eigen::Index fan_in = layer_sizes[l];
        const Eigen::Index fan_out = layer_sizes[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        std::uniform_real_distribution<double> u(-limit, limit);
        Eigen::MatrixXd w(fan_out, fan_in);
        for (Eigen::Index r = 0; r < fan_out; ++r) {
            for (Eigen::Index c = 0; c < fan_in; ++c) w(r, c) = u(rng);
        }
        model.weights.push_back(std::move(w));
        model.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return model;
}

MlpModel default_model(Eigen::Index input_dim, std::uint64_t init_seed) {
    return init_model({input_dim, 256, 256, 256, 2}, init_seed);
}

Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& x) {
    if (x.cols() != model.input_dim()) {
        throw DimensionError("feature length " + std::to_string(x.cols()) +
                             " != model input dim " +
                             std::to_string(model.input_dim()));
    }
    Eigen::MatrixXd a = x;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        Eigen::MatrixXd z =
            (a * model.weights[l].transpose()).rowwise() + model.biases[l].transpose();
        if (l + 1 < model.weights.size()) z = z.cwiseMax(0.0);  // ReLU hidden
        a = std::move(z);
    }
    return a;
}

Location forward(const MlpModel& model, const Eigen::VectorXd& x) {
    const Eigen::MatrixXd out = forward_batch(model, x.transpose());
    return {out(0, 0), out(0, 1)};
}

double loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& x,
                          const Eigen::MatrixXd& y, Gradients& grads) {
    if (x.rows() == 0) throw ConfigError("empty batch");
    const std::size_t n_layers = model.weights.size();
    const double batch = static_cast<double>(x.rows());

    // forward pass keeping activations
    std::vector<Eigen::MatrixXd> activations;
    activations.reserve(n_layers + 1);
    activations.push_back(x);
    for (std::size_t l = 0; l < n_layers; ++l) {
        Eigen::MatrixXd z = (activations.back() * model.weights[l].transpose())
                                .rowwise() +
                            model.biases[l].transpose();
        if (l + 1 < n_layers) z = z.cwiseMax(0.0);
        activations.push_back(std::move(z));
    }

    const Eigen::MatrixXd diff = activations.back() - y;
    const double loss = diff.array().square().sum() / batch;

    grads.weights.assign(n_layers, {});
    grads.biases.assign(n_layers, {});
    Eigen::MatrixXd delta = (2.0 / batch) * diff;
    for (std::size_t l = n_layers; l-- > 0;) {
        grads.weights[l] = delta.transpose() * activations[l];
        grads.biases[l] = delta.colwise().sum().transpose();
        if (l > 0) {
            delta = (delta * model.weights[l]).array() *
                    (activations[l].array() > 0.0).cast<double>();
        }
    }
    return loss;
}

std::vector<double> train(MlpModel& model, const EncodedSet& train_set,
                          const TrainConfig& config) {
    if (train_set.size() == 0) throw ConfigError("empty training set");
    if (train_set.features.cols() != model.input_dim()) {
        throw DimensionError("training features do not match model input dim");
    }
    if (config.epochs == 0 || config.batch_size == 0) {
        throw ConfigError("epochs and batch_size must be >= 1");
    }

    const Eigen::Index n = train_set.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(mix64(config.shuffle_seed));

    // Adam state
    Gradients m, v;
    m.weights.reserve(model.weights.size());
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        m.weights.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(),
                                                  model.weights[l].cols()));
        m.biases.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
        v.weights.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(),
                                                  model.weights[l].cols()));
        v.biases.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
    }

    std::vector<double> trace;
    trace.reserve(config.epochs);
    Gradients grads;
    std::size_t step = 0;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_loss = 0.0;
        std::size_t n_batches = 0;

        for (Eigen::Index start = 0; start < n;
             start += static_cast<Eigen::Index>(config.batch_size)) {
            const Eigen::Index b = std::min<Eigen::Index>(
                static_cast<Eigen::Index>(config.batch_size), n - start);
            Eigen::MatrixXd bx(b, train_set.features.cols());
            Eigen::MatrixXd by(b, 2);
            for (Eigen::Index r = 0; r < b; ++r) {
                bx.row(r) = train_set.features.row(order[static_cast<std::size_t>(start + r)]);
                by.row(r) = train_set.labels.row(order[static_cast<std::size_t>(start + r)]);
            }

            epoch_loss += loss_and_gradients(model, bx, by, grads);
            ++n_batches;
            ++step;

            const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
            const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < model.weights.size(); ++l) {
                m.weights[l] = config.beta1 * m.weights[l] +
                               (1.0 - config.beta1) * grads.weights[l];
                v.weights[l] = config.beta2 * v.weights[l].array().matrix() +
                               (1.0 - config.beta2) *
                                   grads.weights[l].array().square().matrix();
                model.weights[l].array() -=
                    config.learning_rate * (m.weights[l].array() / bias1) /
                    ((v.weights[l].array() / bias2).sqrt() + config.epsilon);

                m.biases[l] = config.beta1 * m.biases[l] +
                              (1.0 - config.beta1) * grads.biases[l];
                v.biases[l] = config.beta2 * v.biases[l] +
                              (1.0 - config.beta2) *
                                  grads.biases[l].array().square().matrix();
                model.biases[l].array() -=
                    config.learning_rate * (m.biases[l].array() / bias1) /
                    ((v.biases[l].array() / bias2).sqrt() + config.epsilon);
            }
        }

        const double mean_loss = epoch_loss / static_cast<double>(n_batches);
        if (!std::isfinite(mean_loss)) {
            throw TrainingError("training diverged (non-finite loss) at epoch " +
                                std::to_string(epoch));
        }
        trace.push_back(mean_loss);
    }
    return trace;
}

double evaluate_mse(const MlpModel& model, const EncodedSet& test_set) {
    if (test_set.size() == 0) throw ConfigError("evaluate_mse on empty set");
    const Eigen::MatrixXd pred = forward_batch(model, test_set.features);
    return (pred - test_set.labels).array().square().sum() /
           static_cast<double>(test_set.size());
}

namespace {

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw FormatError("truncated model checkpoint");
    return value;
}

}  // namespace

void save_model(const MlpModel& model, const std::filesystem::path& path,
                std::uint64_t init_seed, std::uint64_t shuffle_seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open for writing: " + path.string());
    out.write("MLPC", 4);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(model.layer_sizes.size()));
    for (Eigen::Index s : model.layer_sizes) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(s));
    }
    put<std::uint8_t>(out, 0);  // relu hidden, identity output
    put<std::uint64_t>(out, init_seed);
    put<std::uint64_t>(out, shuffle_seed);
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        const Eigen::MatrixXd& w = model.weights[l];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) put<double>(out, w(r, c));
        }
        for (Eigen::Index r = 0; r < model.biases[l].size(); ++r) {
            put<double>(out, model.biases[l][r]);
        }
    }
    if (!out) throw FormatError("write failure on model checkpoint");
}

MlpModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open for reading: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "MLPC", 4) != 0) {
        throw FormatError("bad model magic (expected MLPC)");
    }
    const auto n_layers = get<std::uint32_t>(in);
    if (n_layers < 2) throw FormatError("model needs at least 2 layers");
    MlpModel model;
    for (std::uint32_t i = 0; i < n_layers; ++i) {
        model.layer_sizes.push_back(static_cast<Eigen::Index>(get<std::uint32_t>(in)));
    }
    const auto activation = get<std::uint8_t>(in);
    if (activation != 0) throw FormatError("unknown activation tag");
    get<std::uint64_t>(in);  // init_seed, informational
    get<std::uint64_t>(in);  // shuffle_seed
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        Eigen::MatrixXd w(model.layer_sizes[l + 1], model.layer_sizes[l]);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = get<double>(in);
        }
        Eigen::VectorXd b(model.layer_sizes[l + 1]);
        for (Eigen::Index r = 0; r < b.size(); ++r) b[r] = get<double>(in);
        model.weights.push_back(std::move(w));
        model.biases.push_back(std::move(b));
    }
    return model;
}

}  // namespace csiloc
