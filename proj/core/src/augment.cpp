// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#include "csiloc/augment.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "csiloc/rng.hpp"

namespace csiloc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_common(const Dataset& dataset, const AugmentPlan& plan) {
    auto v = validate(dataset);
    if (!v.ok()) {
        throw ConfigError("augment input invalid: " + v.violations.front().message);
    }
    if (plan.target_size < dataset.size()) {
        throw ConfigError("target_size " + std::to_string(plan.target_size) +
                          " < dataset size " + std::to_string(dataset.size()));
    }
}

// Sources cycle round-robin over the originals: augmented j is built from
// original (j mod N).
std::size_t source_index(std::size_t augmented_index, std::size_t n) {
    return augmented_index % n;
}

cfloat scale_entry(cfloat v, const std::complex<double>& factor) {
    const std::complex<double> scaled =
        std::complex<double>(v.real(), v.imag()) * factor;
    return {static_cast<float>(scaled.real()), static_cast<float>(scaled.imag())};
}

Dataset augment_per_ap(const Dataset& dataset, const AugmentPlan& plan,
                       bool phase_method) {
    check_common(dataset, plan);
    const std::size_t n = dataset.size();
    const std::size_t n_aug = plan.target_size - n;

    Dataset out;
    out.dims = dataset.dims;
    out.env_tag = dataset.env_tag;
    out.samples = dataset.samples;
    out.samples.reserve(plan.target_size);

    for (std::size_t j = 0; j < n_aug; ++j) {
        const CsiSample& src = dataset.samples[source_index(j, n)];
        const std::vector<double> draws =
            phase_of_draws(plan, dataset.dims.n_ap, j, n_aug);
        CsiSample aug;
        aug.label = src.label;
        aug.csi = src.csi;
        for (std::uint32_t ap = 0; ap < dataset.dims.n_ap; ++ap) {
            const std::complex<double> factor =
                phase_method ? std::polar(1.0, draws[ap])
                             : std::complex<double>(std::pow(10.0, draws[ap] / 20.0), 0.0);
            for (cfloat& v : slice_ap(aug, dataset.dims, ap)) {
                v = scale_entry(v, factor);
            }
        }
        out.samples.push_back(std::move(aug));
    }
    return out;
}

}  // namespace

std::vector<double> phase_of_draws(const AugmentPlan& plan, std::uint32_t n_ap,
                                   std::size_t augmented_index,
                                   std::size_t n_augmented) {
    if (augmented_index >= n_augmented) {
        throw ConfigError("augmented_index " + std::to_string(augmented_index) +
                          " out of range (have " + std::to_string(n_augmented) +
                          " augmented samples)");
    }
    auto rng = substream(plan.seed, augmented_index);
    std::vector<double> draws(n_ap);
    if (plan.method == AugmentMethod::phase) {
        std::uniform_real_distribution<double> u(0.0, kTwoPi);
        for (double& d : draws) d = u(rng);
    } else if (plan.method == AugmentMethod::amplitude) {
        if (!plan.p_star_db) throw ConfigError("amplitude method requires p_star_db");
        if (*plan.p_star_db < 0.0) throw ConfigError("p_star_db must be >= 0");
        std::uniform_real_distribution<double> u(-*plan.p_star_db, *plan.p_star_db);
        for (double& d : draws) d = u(rng);
    } else {
        throw ConfigError("phase_of_draws: noise method has no per-AP vector");
    }
    return draws;
}

Dataset augment_phase(const Dataset& dataset, const AugmentPlan& plan) {
    if (plan.method != AugmentMethod::phase) {
        throw ConfigError("plan.method must be phase");
    }
    return augment_per_ap(dataset, plan, /*phase_method=*/true);
}

Dataset augment_amplitude(const Dataset& dataset, const AugmentPlan& plan) {
    if (plan.method != AugmentMethod::amplitude) {
        throw ConfigError("plan.method must be amplitude");
    }
    if (!plan.p_star_db) throw ConfigError("amplitude method requires p_star_db");
    return augment_per_ap(dataset, plan, /*phase_method=*/false);
}

Dataset augment_noise(const Dataset& dataset, const AugmentPlan& plan) {
    if (plan.method != AugmentMethod::noise) {
        throw ConfigError("plan.method must be noise");
    }
    if (plan.noise_variance < 0.0) throw ConfigError("noise_variance must be >= 0");
    check_common(dataset, plan);

    const std::size_t n = dataset.size();
    const std::size_t n_aug = plan.target_size - n;
    const double sigma = std::sqrt(plan.noise_variance / 2.0);

    Dataset out;
    out.dims = dataset.dims;
    out.env_tag = dataset.env_tag;
    out.samples = dataset.samples;
    out.samples.reserve(plan.target_size);

    for (std::size_t j = 0; j < n_aug; ++j) {
        const CsiSample& src = dataset.samples[source_index(j, n)];
        auto rng = substream(plan.seed, j);
        std::normal_distribution<double> gauss(0.0, 1.0);
        CsiSample aug;
        aug.label = src.label;
        aug.csi.resize(src.csi.size());
        for (std::size_t e = 0; e < src.csi.size(); ++e) {
            const double re = src.csi[e].real() + sigma * gauss(rng);
            const double im = src.csi[e].imag() + sigma * gauss(rng);
            aug.csi[e] = {static_cast<float>(re), static_cast<float>(im)};
        }
        out.samples.push_back(std::move(aug));
    }
    return out;
}

Dataset augment(const Dataset& dataset, const AugmentPlan& plan) {
    switch (plan.method) {
        case AugmentMethod::phase: return augment_phase(dataset, plan);
        case AugmentMethod::amplitude: return augment_amplitude(dataset, plan);
        case AugmentMethod::noise: return augment_noise(dataset, plan);
    }
    throw ConfigError("unknown augment method");
}

}  // namespace csiloc
