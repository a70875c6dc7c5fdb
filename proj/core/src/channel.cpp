// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#include "csiloc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "csiloc/config.hpp"
#include "csiloc/rng.hpp"

namespace csiloc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSpeedOfLight = 299792458.0;

}  // namespace

std::complex<double> AntennaPattern::gain(double azimuth, double elevation,
                                          double freq_hz) const {
    if (kind == Kind::isotropic) return {1.0, 0.0};
    if (table.empty()) return {1.0, 0.0};
    // nearest neighbor in (azimuth, elevation, normalized frequency)
    const TableEntry* best = &table.front();
    double best_dist = std::numeric_limits<double>::infinity();
    for (const TableEntry& e : table) {
        const double da = azimuth - e.azimuth;
        const double de = elevation - e.elevation;
        const double df = (freq_hz - e.freq_hz) / std::max(freq_hz, 1.0);
        const double dist = da * da + de * de + df * df;
        if (dist < best_dist) {
            best_dist = dist;
            best = &e;
        }
    }
    return best->gain;
}

std::complex<double> channel_response(const std::vector<Mpc>& mpcs,
                                      const AntennaPattern& pattern, double freq_hz) {
    std::complex<double> h{0.0, 0.0};
    for (const Mpc& mpc : mpcs) {
        const double phase = -kTwoPi * freq_hz * mpc.tau;
        h += mpc.alpha * pattern.gain(mpc.azimuth, mpc.elevation, freq_hz) *
             std::polar(1.0, phase);
    }
    return h;
}

SampleGeometry draw_sample_geometry(const Scenario& scenario, std::uint64_t index) {
    auto rng = substream(scenario.seed, index);
    std::uniform_real_distribution<double> ux(scenario.area.x0, scenario.area.x1);
    std::uniform_real_distribution<double> uy(scenario.area.y0, scenario.area.y1);
    std::uniform_real_distribution<double> uphase(0.0, kTwoPi);
    std::uniform_real_distribution<double> utau(0.0, scenario.tau_max);
    std::uniform_real_distribution<double> uaz(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> uel(-std::numbers::pi / 2,
                                               std::numbers::pi / 2);
    std::uniform_int_distribution<std::uint32_t> ucount(scenario.mpc_count_min,
                                                        scenario.mpc_count_max);

    SampleGeometry geom;
    geom.location = {ux(rng), uy(rng)};
    geom.mpcs_per_ap.resize(scenario.dims.n_ap);
    for (std::uint32_t ap = 0; ap < scenario.dims.n_ap; ++ap) {
        auto& mpcs = geom.mpcs_per_ap[ap];
        if (scenario.los) {
            const Point2D p = scenario.ap_positions[ap];
            const double dx = geom.location.x - p.x;
            const double dy = geom.location.y - p.y;
            const double dist = std::sqrt(dx * dx + dy * dy);
            Mpc los;
            los.tau = dist / kSpeedOfLight;
            los.alpha = {1.0 / std::max(dist, 1.0), 0.0};
            los.azimuth = std::atan2(dy, dx);
            los.elevation = 0.0;
            mpcs.push_back(los);
        }
        const std::uint32_t count = ucount(rng);
        for (std::uint32_t l = 0; l < count; ++l) {
            Mpc mpc;
            mpc.tau = utau(rng);
            // exponential power-delay profile; field amplitude is sqrt(power)
            const double power =
                scenario.mpc_power_scale * std::exp(-mpc.tau / scenario.delay_decay);
            mpc.alpha = std::polar(std::sqrt(power), uphase(rng));
            mpc.azimuth = uaz(rng);
            mpc.elevation = uel(rng);
            mpcs.push_back(mpc);
        }
    }
    return geom;
}

Dataset synthesize_dataset(const Scenario& scenario, std::size_t n_samples) {
    if (n_samples == 0) throw ConfigError("n_samples must be positive");
    if (scenario.ap_positions.size() != scenario.dims.n_ap) {
        throw DimensionError("ap_positions length != n_ap");
    }
    if (scenario.subcarrier_freqs.size() != scenario.dims.m) {
        throw DimensionError("subcarrier_freqs length != m");
    }
    for (std::size_t i = 1; i < scenario.subcarrier_freqs.size(); ++i) {
        if (scenario.subcarrier_freqs[i] <= scenario.subcarrier_freqs[i - 1]) {
            throw ConfigError("subcarrier_freqs must be strictly increasing");
        }
    }

    Dataset ds;
    ds.dims = scenario.dims;
    ds.env_tag = scenario.env_tag;
    ds.samples.resize(n_samples);

    const double noise_sigma = std::sqrt(scenario.noise_variance / 2.0);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const SampleGeometry geom = draw_sample_geometry(scenario, i);
        // noise from a separate substream so geometry draws are re-derivable
        auto noise_rng = substream(scenario.seed ^ 0xA5A5A5A5A5A5A5A5ULL, i);
        std::normal_distribution<double> gauss(0.0, 1.0);

        CsiSample& s = ds.samples[i];
        s.label = geom.location;
        s.csi.resize(scenario.dims.flat_size());
        for (std::uint32_t ap = 0; ap < scenario.dims.n_ap; ++ap) {
            for (std::uint32_t rx = 0; rx < scenario.dims.n_rx; ++rx) {
                for (std::uint32_t sc = 0; sc < scenario.dims.m; ++sc) {
                    std::complex<double> h =
                        channel_response(geom.mpcs_per_ap[ap], scenario.pattern,
                                         scenario.subcarrier_freqs[sc]);
                    if (noise_sigma > 0.0) {
                        h += std::complex<double>(noise_sigma * gauss(noise_rng),
                                                  noise_sigma * gauss(noise_rng));
                    }
                    s.csi[flat_index(scenario.dims, ap, rx, sc)] =
                        cfloat(static_cast<float>(h.real()),
                               static_cast<float>(h.imag()));
                }
            }
        }
    }
    return ds;
}

Dataset apply_nonideality(const Dataset& dataset, const NonidealityProfile& profile,
                          std::uint64_t seed) {
    if (profile.gain_drift_db < 0.0) throw ConfigError("gain_drift_db must be >= 0");
    Dataset out = dataset;
    if (!profile.phase_drift && profile.gain_drift_db == 0.0) return out;

    std::uniform_real_distribution<double> uphase(0.0, kTwoPi);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        auto rng = substream(seed, i);
        std::uniform_real_distribution<double> ugain(-profile.gain_drift_db,
                                                     profile.gain_drift_db);
        for (std::uint32_t ap = 0; ap < out.dims.n_ap; ++ap) {
            double theta = profile.phase_drift ? uphase(rng) : 0.0;
            double gain_db = profile.gain_drift_db > 0.0 ? ugain(rng) : 0.0;
            const std::complex<double> factor =
                std::polar(std::pow(10.0, gain_db / 20.0), theta);
            for (cfloat& v : slice_ap(out.samples[i], out.dims, ap)) {
                const std::complex<double> scaled =
                    std::complex<double>(v.real(), v.imag()) * factor;
                v = cfloat(static_cast<float>(scaled.real()),
                           static_cast<float>(scaled.imag()));
            }
        }
    }
    return out;
}

Scenario scenario_from_config(const std::string& text) {
    const KeyValueConfig cfg = KeyValueConfig::parse(text);
    Scenario sc;
    sc.dims.m = static_cast<std::uint32_t>(cfg.get_int("m", 32));
    sc.dims.n_rx = static_cast<std::uint32_t>(cfg.get_int("n_rx", 2));
    sc.dims.n_ap = static_cast<std::uint32_t>(cfg.get_int("n_ap", 4));
    sc.env_tag = cfg.get_string("env_tag", "synthetic");
    sc.los = cfg.get_bool("los", sc.env_tag == "LOS");

    const auto area = cfg.get_double_list("area", {0.0, 0.0, 10.0, 10.0});
    if (area.size() != 4) throw ConfigError("area needs 4 numbers: x0,y0,x1,y1");
    sc.area = {area[0], area[1], area[2], area[3]};

    if (cfg.has("ap_positions")) {
        // "x1 y1; x2 y2; ..." pairs
        std::stringstream ss(cfg.require_string("ap_positions"));
        std::string pair;
        while (std::getline(ss, pair, ';')) {
            std::stringstream ps(pair);
            Point2D p;
            if (!(ps >> p.x >> p.y)) throw ConfigError("bad ap_positions entry: " + pair);
            sc.ap_positions.push_back(p);
        }
    } else {
        // default: spread APs around the area boundary corners
        const Point2D corners[4] = {{sc.area.x0, sc.area.y0},
                                    {sc.area.x1, sc.area.y0},
                                    {sc.area.x1, sc.area.y1},
                                    {sc.area.x0, sc.area.y1}};
        for (std::uint32_t k = 0; k < sc.dims.n_ap; ++k) {
            sc.ap_positions.push_back(corners[k % 4]);
        }
    }
    if (sc.ap_positions.size() != sc.dims.n_ap) {
        throw ConfigError("ap_positions count != n_ap");
    }

    const double f0 = cfg.get_double("freq_start_hz", 5.18e9);
    const double df = cfg.get_double("freq_spacing_hz", 312.5e3);
    for (std::uint32_t m = 0; m < sc.dims.m; ++m) {
        sc.subcarrier_freqs.push_back(f0 + m * df);
    }

    sc.mpc_count_min = static_cast<std::uint32_t>(cfg.get_int("mpc_count_min", 4));
    sc.mpc_count_max = static_cast<std::uint32_t>(cfg.get_int("mpc_count_max", 12));
    if (sc.mpc_count_min > sc.mpc_count_max || sc.mpc_count_min == 0) {
        throw ConfigError("need 1 <= mpc_count_min <= mpc_count_max");
    }
    sc.noise_variance = cfg.get_double("noise_variance", 0.0);
    sc.tau_max = cfg.get_double("tau_max", 200e-9);
    sc.delay_decay = cfg.get_double("delay_decay", 60e-9);
    sc.mpc_power_scale = cfg.get_double("mpc_power_scale", 1.0);
    sc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    return sc;
}

}  // namespace csiloc
