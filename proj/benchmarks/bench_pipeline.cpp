// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "csiloc/augment.hpp"
#include "csiloc/io.hpp"
#include "csiloc/mlp.hpp"

namespace {

csiloc::Dataset make_dataset(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    csiloc::Dataset ds;
    ds.dims = {234, 4, 4};
    ds.env_tag = "bench";
    ds.samples.resize(n);
    for (auto& s : ds.samples) {
        s.label = {1.0, 2.0};
        s.csi.resize(ds.dims.flat_size());
        for (auto& v : s.csi) v = {u(rng), u(rng)};
    }
    return ds;
}

void bm_augment_phase(benchmark::State& state) {
    const csiloc::Dataset ds = make_dataset(64);
    csiloc::AugmentPlan plan;
    plan.method = csiloc::AugmentMethod::phase;
    plan.target_size = 128;
    plan.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(csiloc::augment(ds, plan));
    }
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(bm_augment_phase);

void bm_augment_amplitude(benchmark::State& state) {
    const csiloc::Dataset ds = make_dataset(64);
    csiloc::AugmentPlan plan;
    plan.method = csiloc::AugmentMethod::amplitude;
    plan.target_size = 128;
    plan.p_star_db = 1.5;
    plan.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(csiloc::augment(ds, plan));
    }
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(bm_augment_amplitude);

void bm_csid_roundtrip(benchmark::State& state) {
    const csiloc::Dataset ds = make_dataset(64);
    for (auto _ : state) {
        std::stringstream buf;
        csiloc::write_csid(ds, buf);
        benchmark::DoNotOptimize(csiloc::read_csid(buf));
    }
}
BENCHMARK(bm_csid_roundtrip);

void bm_forward_batch(benchmark::State& state) {
    const csiloc::MlpModel model = csiloc::default_model(512, 3);
    Eigen::MatrixXd features = Eigen::MatrixXd::Random(128, 512);
    for (auto _ : state) {
        benchmark::DoNotOptimize(csiloc::forward_batch(model, features));
    }
    state.SetItemsProcessed(state.iterations() * 128);
}
BENCHMARK(bm_forward_batch);

}  // namespace
