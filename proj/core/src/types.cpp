// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#include "csiloc/types.hpp"

#include <cmath>
#include <limits>

namespace csiloc {

ValidationResult validate(const Dataset& dataset) {
    ValidationResult result;
    constexpr std::size_t kDatasetLevel = std::numeric_limits<std::size_t>::max();

    if (dataset.dims.m == 0 || dataset.dims.n_rx == 0 || dataset.dims.n_ap == 0) {
        result.violations.push_back(
            {kDatasetLevel, "dims", "all dimensions must be strictly positive"});
        return result;
    }
    if (dataset.samples.empty()) {
        result.violations.push_back({kDatasetLevel, "samples", "N >= 1 required"});
        return result;
    }

    const std::size_t expected = dataset.dims.flat_size();
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        const CsiSample& s = dataset.samples[i];
        if (s.csi.size() != expected) {
            result.violations.push_back(
                {i, "csi",
                 "entry count " + std::to_string(s.csi.size()) + " != " +
                     std::to_string(expected)});
            continue;
        }
        for (std::size_t e = 0; e < s.csi.size(); ++e) {
            if (!std::isfinite(s.csi[e].real()) || !std::isfinite(s.csi[e].imag())) {
                result.violations.push_back(
                    {i, "csi[" + std::to_string(e) + "]", "non-finite entry"});
                break;
            }
        }
        if (!std::isfinite(s.label.x) || !std::isfinite(s.label.y)) {
            result.violations.push_back({i, "label", "non-finite coordinate"});
        }
    }
    return result;
}

std::span<const cfloat> slice_ap(const CsiSample& sample, const TensorDims& dims,
                                 std::uint32_t ap_index) {
    if (ap_index >= dims.n_ap) {
        throw DimensionError("ap_index " + std::to_string(ap_index) +
                             " out of range (n_ap=" + std::to_string(dims.n_ap) + ")");
    }
    const std::size_t block = static_cast<std::size_t>(dims.n_rx) * dims.m;
    return {sample.csi.data() + ap_index * block, block};
}

std::span<cfloat> slice_ap(CsiSample& sample, const TensorDims& dims,
                           std::uint32_t ap_index) {
    if (ap_index >= dims.n_ap) {
        throw DimensionError("ap_index " + std::to_string(ap_index) +
                             " out of range (n_ap=" + std::to_string(dims.n_ap) + ")");
    }
    const std::size_t block = static_cast<std::size_t>(dims.n_rx) * dims.m;
    return {sample.csi.data() + ap_index * block, block};
}

}  // namespace csiloc
