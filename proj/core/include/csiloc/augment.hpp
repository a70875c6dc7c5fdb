// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csiloc/types.hpp"

namespace csiloc {

enum class AugmentMethod { phase, amplitude, noise };

/// How to grow a training set of N samples to N* samples.
struct AugmentPlan {
    AugmentMethod method = AugmentMethod::phase;
    std::size_t target_size = 0;            // N*, >= N
    std::optional<double> p_star_db;        // amplitude method only, >= 0
    double noise_variance = 1.0;            // noise method only, >= 0
    std::uint64_t seed = 0;
};

/// Per-AP independent phase shift augmentation. Output keeps the N originals
/// first, then N* - N augmented samples; augmented sample j reuses source
/// (j mod N) and multiplies each AP block by e^{j theta_k} with theta_k
/// drawn uniformly in [0, 2pi), one draw per AP shared across all antennas
/// and subcarriers. Labels are copied verbatim.
Dataset augment_phase(const Dataset& dataset, const AugmentPlan& plan);

/// Per-AP random amplitude augmentation: same sizing and cycling, with each
/// AP block scaled by 10^{P_k / 20}, P_k ~ U[-P*, +P*] dB.
Dataset augment_amplitude(const Dataset& dataset, const AugmentPlan& plan);

/// Noise-injection baseline: each augmented entry gets an independent
/// circularly symmetric complex Gaussian of variance plan.noise_variance.
Dataset augment_noise(const Dataset& dataset, const AugmentPlan& plan);

/// Dispatch on plan.method.
Dataset augment(const Dataset& dataset, const AugmentPlan& plan);

/// The per-AP random vector (theta_k for phase, P_k in dB for amplitude)
/// that augmented sample `augmented_index` used. Replaying these draws and
/// applying them manually reproduces the augment output bitwise.
std::vector<double> phase_of_draws(const AugmentPlan& plan, std::uint32_t n_ap,
                                   std::size_t augmented_index,
                                   std::size_t n_augmented);

}  // namespace csiloc
