// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "csiloc/types.hpp"

namespace csiloc {

/// One multi-path component: complex gain, delay, arrival angles.
struct Mpc {
    std::complex<double> alpha;
    double tau = 0.0;      // seconds, >= 0
    double azimuth = 0.0;  // radians
    double elevation = 0.0;
};

/// Antenna gain a(azimuth, elevation, f). Isotropic returns 1 everywhere;
/// tabulated patterns use nearest-neighbor lookup over their sample grid.
struct AntennaPattern {
    struct TableEntry {
        double azimuth, elevation, freq_hz;
        std::complex<double> gain;
    };
    enum class Kind { isotropic, tabulated } kind = Kind::isotropic;
    std::vector<TableEntry> table;

    std::complex<double> gain(double azimuth, double elevation, double freq_hz) const;
};

struct Point2D {
    double x = 0.0, y = 0.0;
};

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

/// Synthetic measurement campaign description.
struct Scenario {
    TensorDims dims;
    std::string env_tag = "synthetic";
    std::vector<Point2D> ap_positions;       // length n_ap
    Rect area;                               // UE positions drawn uniformly here
    std::vector<double> subcarrier_freqs;    // length m, strictly increasing
    std::uint32_t mpc_count_min = 4;
    std::uint32_t mpc_count_max = 12;
    double noise_variance = 0.0;             // per complex entry, linear power
    double tau_max = 200e-9;                 // MPC delay prior upper bound
    double delay_decay = 60e-9;              // exponential power-delay constant
    double mpc_power_scale = 1.0;            // mean power scale of NLOS components
    bool los = false;                        // add geometric LOS component per AP
    AntennaPattern pattern;
    std::uint64_t seed = 0;
};

/// Per-AP transceiver nonideality applied to test sets.
struct NonidealityProfile {
    bool phase_drift = false;   // theta_k ~ U[0, 2pi) per AP per sample
    double gain_drift_db = 0.0; // g_k ~ U[-G, G] dB per AP per sample; 0 = off
};

/// Sum over MPCs of alpha_l * a(phi_l, theta_l, f) * exp(-j 2 pi f tau_l).
std::complex<double> channel_response(const std::vector<Mpc>& mpcs,
                                      const AntennaPattern& pattern, double freq_hz);

/// MPC draws and UE location for sample `index`; pure function of
/// (scenario, index) so the noiseless channel can be re-derived externally.
struct SampleGeometry {
    Location location;
    std::vector<std::vector<Mpc>> mpcs_per_ap;  // length n_ap
};
SampleGeometry draw_sample_geometry(const Scenario& scenario, std::uint64_t index);

/// Generates n_samples labeled CSI samples: h per entry via channel_response
/// plus circularly symmetric complex Gaussian noise of variance
/// scenario.noise_variance. Deterministic given scenario.seed.
Dataset synthesize_dataset(const Scenario& scenario, std::size_t n_samples);

/// Multiplies each AP block by e^{j theta_k} * 10^{g_k / 20} with fresh
/// draws per sample. Labels unchanged. Deterministic given seed.
Dataset apply_nonideality(const Dataset& dataset, const NonidealityProfile& profile,
                          std::uint64_t seed);

/// Parses a key-value scenario config (see README for keys).
Scenario scenario_from_config(const std::string& text);

}  // namespace csiloc
