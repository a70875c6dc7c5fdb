// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csiloc {

using cfloat = std::complex<float>;

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tensor dimensions of one CSI sample: M subcarriers, N_RX antennas per AP,
/// N_AP access points. Flattened complex length is m * n_rx * n_ap.
struct TensorDims {
    std::uint32_t m = 0;
    std::uint32_t n_rx = 0;
    std::uint32_t n_ap = 0;

    std::size_t flat_size() const {
        return static_cast<std::size_t>(m) * n_rx * n_ap;
    }
    bool operator==(const TensorDims&) const = default;
};

/// 2-D ground-truth UE position in meters.
struct Location {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Location&) const = default;
};

/// One labeled CSI measurement. Entries are stored flat in canonical
/// [ap][rx][subcarrier] order with subcarrier fastest, so each AP's block
/// of n_rx * m entries is contiguous.
struct CsiSample {
    std::vector<cfloat> csi;
    Location label;
};

inline std::size_t flat_index(const TensorDims& d, std::uint32_t ap,
                              std::uint32_t rx, std::uint32_t sc) {
    return (static_cast<std::size_t>(ap) * d.n_rx + rx) * d.m + sc;
}

/// Ordered collection of CsiSamples sharing dimensions and environment tag.
/// Immutable by convention after construction; transforms build new datasets.
struct Dataset {
    TensorDims dims;
    std::string env_tag;
    std::vector<CsiSample> samples;

    std::size_t size() const { return samples.size(); }
};

struct Violation {
    std::size_t sample_index;  // SIZE_MAX when dataset-level
    std::string field;
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks every invariant of the data model: positive dims, per-sample size
/// conformance, finite entries and labels, sample count >= 1.
ValidationResult validate(const Dataset& dataset);

/// Contiguous view of the n_rx * m entries belonging to one AP.
/// Throws DimensionError when ap_index is out of range.
std::span<const cfloat> slice_ap(const CsiSample& sample, const TensorDims& dims,
                                 std::uint32_t ap_index);
std::span<cfloat> slice_ap(CsiSample& sample, const TensorDims& dims,
                           std::uint32_t ap_index);

}  // namespace csiloc
