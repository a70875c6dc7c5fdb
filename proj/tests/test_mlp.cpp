// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "csiloc/mlp.hpp"
#include "test_util.hpp"

using namespace csiloc;

namespace {

MlpModel random_small_model(std::uint64_t seed, Eigen::Index d = 8) {
    return init_model({d, 5, 4, 2}, seed);
}

EncodedSet random_set(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    EncodedSet set;
    set.features.resize(n, d);
    set.labels.resize(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) set.features(i, j) = u(rng);
        set.labels(i, 0) = u(rng);
        set.labels(i, 1) = u(rng);
    }
    return set;
}

// Independent scalar-loop reimplementation of the forward pass.
Eigen::Vector2d naive_forward(const MlpModel& model, const Eigen::VectorXd& x) {
    std::vector<double> a(x.data(), x.data() + x.size());
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        std::vector<double> z(static_cast<std::size_t>(model.weights[l].rows()));
        for (std::size_t r = 0; r < z.size(); ++r) {
            double acc = model.biases[l][static_cast<Eigen::Index>(r)];
            for (std::size_t c = 0; c < a.size(); ++c) {
                acc += model.weights[l](static_cast<Eigen::Index>(r),
                                        static_cast<Eigen::Index>(c)) *
                       a[c];
            }
            z[r] = (l + 1 < model.weights.size()) ? std::max(0.0, acc) : acc;
        }
        a = std::move(z);
    }
    return {a[0], a[1]};
}

}  // namespace

TEST_CASE("encode maps a single entry 3-4j to [3, -4]") {
    CsiSample s;
    s.csi = {{3.0f, -4.0f}};
    const Eigen::VectorXd x = encode(s);
    REQUIRE(x.size() == 2);
    CHECK(x[0] == 3.0);
    CHECK(x[1] == -4.0);
}

TEST_CASE("encode puts the reals block before the imaginaries block") {
    CsiSample s;
    s.csi = {{1.0f, 2.0f}, {3.0f, 4.0f}};
    const Eigen::VectorXd x = encode(s);
    REQUIRE(x.size() == 4);
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 3.0);
    CHECK(x[2] == 2.0);
    CHECK(x[3] == 4.0);
}

TEST_CASE("feature length for dims (234,4,4) is 7488") {
    CsiSample s;
    s.csi.resize(TensorDims{234, 4, 4}.flat_size());
    CHECK(encode(s).size() == 7488);  // 2 * 234 * 4 * 4
}

TEST_CASE("standardizer floors constant dimensions and centers the rest") {
    Eigen::MatrixXd f(2, 2);
    f << 5.0, 0.0, 5.0, 2.0;
    const Standardizer s = standardize_fit(f);
    const Eigen::MatrixXd out = s.apply(f);
    CHECK(out(0, 0) == 0.0);  // constant dim -> floored std, centered to 0
    CHECK(out(1, 0) == 0.0);
    CHECK(out(0, 1) == doctest::Approx(-1.0));
    CHECK(out(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("applying a fitted standardizer to its fit set gives mean 0 std 1") {
    std::mt19937_64 rng(1);
    const EncodedSet set = random_set(rng, 64, 10);
    const Standardizer s = standardize_fit(set.features);
    const Eigen::MatrixXd out = s.apply(set.features);
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        const double mean = out.col(j).mean();
        const double var = (out.col(j).array() - mean).square().sum() /
                           static_cast<double>(out.rows());
        CHECK(std::abs(mean) < 1e-6);
        CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-6);
    }
}

TEST_CASE("all-zero parameters predict the origin") {
    MlpModel model = init_model({4, 3, 2}, 0);
    for (auto& w : model.weights) w.setZero();
    for (auto& b : model.biases) b.setZero();
    const Location p = forward(model, Eigen::VectorXd::Ones(4));
    CHECK(p.x == 0.0);
    CHECK(p.y == 0.0);
}

TEST_CASE("hand-set single hidden unit: 2 * relu(3 - 1) = 4") {
    MlpModel model;
    model.layer_sizes = {1, 1, 2};
    model.weights = {Eigen::MatrixXd::Constant(1, 1, 1.0),
                     (Eigen::MatrixXd(2, 1) << 2.0, 0.0).finished()};
    model.biases = {Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Zero(2)};
    const Location p = forward(model, Eigen::VectorXd::Constant(1, 3.0));
    CHECK(p.x == 4.0);
    CHECK(p.y == 0.0);
    // negative pre-activation is clamped
    const Location q = forward(model, Eigen::VectorXd::Constant(1, 0.5));
    CHECK(q.x == 0.0);
}

TEST_CASE("forward matches an independent scalar reimplementation") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const MlpModel model = random_small_model(trial);
        Eigen::VectorXd x(8);
        for (Eigen::Index i = 0; i < 8; ++i) x[i] = u(rng);
        const Location p = forward(model, x);
        const Eigen::Vector2d q = naive_forward(model, x);
        CHECK(p.x == doctest::Approx(q[0]).epsilon(1e-12));
        CHECK(p.y == doctest::Approx(q[1]).epsilon(1e-12));
    }
}

TEST_CASE("forward rejects mismatched feature length") {
    const MlpModel model = random_small_model(0);
    CHECK_THROWS_AS(forward(model, Eigen::VectorXd::Zero(9)), DimensionError);
}

TEST_CASE("perfect predictions give zero loss and zero output-layer gradient") {
    MlpModel model = init_model({2, 2}, 3);
    model.weights[0] = Eigen::MatrixXd::Identity(2, 2);
    model.biases[0].setZero();
    Eigen::MatrixXd x(3, 2), y(3, 2);
    x << 1, 2, 3, 4, 5, 6;
    y = x;
    Gradients grads;
    const double loss = loss_and_gradients(model, x, y, grads);
    CHECK(loss == 0.0);
    CHECK(grads.weights[0].cwiseAbs().maxCoeff() == 0.0);
    CHECK(grads.biases[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("loss on a 2-sample batch equals the hand sum over 2") {
    MlpModel model = init_model({2, 2}, 4);
    model.weights[0] = Eigen::MatrixXd::Identity(2, 2);
    model.biases[0].setZero();
    Eigen::MatrixXd x(2, 2), y(2, 2);
    x << 1, 0, 0, 2;
    y << 0, 0, 0, 0;
    Gradients grads;
    // errors: ||(1,0)||^2 = 1 and ||(0,2)||^2 = 4 -> mean 2.5
    CHECK(loss_and_gradients(model, x, y, grads) == doctest::Approx(2.5));
}

TEST_CASE("backprop gradients match central finite differences") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 3; ++trial) {
        MlpModel model = init_model({6, 5, 4, 2}, 100 + trial);
        const EncodedSet batch = random_set(rng, 8, 6);
        Gradients grads;
        loss_and_gradients(model, batch.features, batch.labels, grads);

        const double h = 1e-4;
        auto check_param = [&](double& param, double grad) {
            const double saved = param;
            param = saved + h;
            Gradients scratch;
            const double up =
                loss_and_gradients(model, batch.features, batch.labels, scratch);
            param = saved - h;
            const double down =
                loss_and_gradients(model, batch.features, batch.labels, scratch);
            param = saved;
            const double fd = (up - down) / (2.0 * h);
            if (std::abs(fd) < 1e-6) {
                CHECK(std::abs(grad) < 1e-6);
            } else {
                CHECK(std::abs(grad - fd) / std::abs(fd) < 1e-4);
            }
        };

        for (std::size_t l = 0; l < model.weights.size(); ++l) {
            for (Eigen::Index r = 0; r < model.weights[l].rows(); ++r) {
                for (Eigen::Index c = 0; c < model.weights[l].cols(); ++c) {
                    check_param(model.weights[l](r, c), grads.weights[l](r, c));
                }
            }
            for (Eigen::Index r = 0; r < model.biases[l].size(); ++r) {
                check_param(model.biases[l][r], grads.biases[l][r]);
            }
        }
    }
}

TEST_CASE("learning rate zero leaves parameters unchanged") {
    std::mt19937_64 rng(8);
    MlpModel model = random_small_model(9);
    const MlpModel before = model;
    const EncodedSet set = random_set(rng, 32, 8);
    TrainConfig tc;
    tc.epochs = 3;
    tc.batch_size = 8;
    tc.learning_rate = 0.0;
    train(model, set, tc);
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        CHECK(model.weights[l] == before.weights[l]);
        CHECK(model.biases[l] == before.biases[l]);
    }
}

TEST_CASE("training is bit-deterministic given identical config") {
    std::mt19937_64 rng(10);
    const EncodedSet set = random_set(rng, 64, 8);
    TrainConfig tc;
    tc.epochs = 5;
    tc.batch_size = 16;
    tc.shuffle_seed = 7;
    tc.init_seed = 8;

    MlpModel a = random_small_model(tc.init_seed);
    MlpModel b = random_small_model(tc.init_seed);
    const auto trace_a = train(a, set, tc);
    const auto trace_b = train(b, set, tc);
    CHECK(trace_a == trace_b);
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        CHECK(a.weights[l] == b.weights[l]);
        CHECK(a.biases[l] == b.biases[l]);
    }
}

TEST_CASE("training fits a 200-sample linear problem to under 1% of initial loss") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    EncodedSet set;
    set.features.resize(200, 4);
    set.labels.resize(200, 2);
    Eigen::MatrixXd true_map(2, 4);
    true_map << 1.0, -2.0, 0.5, 0.0, 0.0, 1.0, -1.0, 2.0;
    for (Eigen::Index i = 0; i < 200; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) set.features(i, j) = u(rng);
        set.labels.row(i) = (true_map * set.features.row(i).transpose()).transpose();
    }
    MlpModel model = init_model({4, 32, 32, 2}, 99);
    TrainConfig tc;
    tc.epochs = 300;
    tc.batch_size = 32;
    const auto trace = train(model, set, tc);
    CHECK(trace.back() < 0.01 * trace.front());
}

TEST_CASE("evaluate_mse trivial and hand cases") {
    MlpModel model = init_model({2, 2}, 1);
    model.weights[0] = Eigen::MatrixXd::Identity(2, 2);
    model.biases[0].setZero();
    EncodedSet set;
    set.features.resize(1, 2);
    set.labels.resize(1, 2);

    // perfect predictor
    set.features << 3.0, 4.0;
    set.labels << 3.0, 4.0;
    CHECK(evaluate_mse(model, set) == 0.0);

    // prediction (1,1) against label (0,0) -> 2.0
    set.features << 1.0, 1.0;
    set.labels << 0.0, 0.0;
    CHECK(evaluate_mse(model, set) == 2.0);

    EncodedSet empty;
    empty.features.resize(0, 2);
    empty.labels.resize(0, 2);
    CHECK_THROWS_AS(evaluate_mse(model, empty), ConfigError);
}

TEST_CASE("evaluate_mse matches brute-force recomputation and is order-invariant") {
    std::mt19937_64 rng(14);
    const MlpModel model = random_small_model(15);
    EncodedSet set = random_set(rng, 40, 8);

    double brute = 0.0;
    for (Eigen::Index i = 0; i < set.size(); ++i) {
        const Location p = forward(model, set.features.row(i).transpose());
        const double dx = p.x - set.labels(i, 0);
        const double dy = p.y - set.labels(i, 1);
        brute += dx * dx + dy * dy;
    }
    brute /= static_cast<double>(set.size());
    const double mse = evaluate_mse(model, set);
    CHECK(std::abs(mse - brute) / brute < 1e-9);

    // permute the samples
    EncodedSet perm = set;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(set.size()));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index i = 0; i < set.size(); ++i) {
        perm.features.row(i) = set.features.row(order[static_cast<std::size_t>(i)]);
        perm.labels.row(i) = set.labels.row(order[static_cast<std::size_t>(i)]);
    }
    CHECK(std::abs(evaluate_mse(model, perm) - mse) / mse < 1e-12);
}

TEST_CASE("model checkpoints round-trip exactly") {
    const MlpModel model = random_small_model(20);
    const auto path = std::filesystem::temp_directory_path() / "csiloc_model_test.mlpc";
    save_model(model, path, 20, 21);
    const MlpModel back = load_model(path);
    REQUIRE(back.layer_sizes == model.layer_sizes);
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        CHECK(back.weights[l] == model.weights[l]);
        CHECK(back.biases[l] == model.biases[l]);
    }
    std::filesystem::remove(path);
}

TEST_CASE("training reports divergence with the epoch") {
    std::mt19937_64 rng(22);
    EncodedSet set = random_set(rng, 32, 4);
    set.labels *= 1e150;  // forces overflow under a huge learning rate
    MlpModel model = init_model({4, 8, 2}, 23);
    TrainConfig tc;
    tc.epochs = 50;
    tc.batch_size = 8;
    tc.learning_rate = 1e200;
    CHECK_THROWS_AS(train(model, set, tc), TrainingError);
}
