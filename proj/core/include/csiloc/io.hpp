// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "csiloc/types.hpp"

namespace csiloc {

// .csid binary layout (all little-endian):
//   magic "CSID" | u32 version=1 | u32 n_samples | u32 m | u32 n_rx | u32 n_ap
//   | u8 env_tag_len (<=32) | env_tag bytes
// then per sample, in order:
//   label x, y as f64 | m*n_rx*n_ap entries as f32 (re, im) pairs,
//   ap-major, then rx, then subcarrier (subcarrier fastest).

constexpr std::uint32_t kCsidVersion = 1;
constexpr std::size_t kMaxEnvTagLen = 32;

std::size_t csid_header_bytes(const Dataset& dataset);
std::size_t csid_sample_bytes(const TensorDims& dims);

/// Serializes a validated dataset. Returns bytes written.
std::size_t write_csid(const Dataset& dataset, std::ostream& out);
std::size_t write_csid(const Dataset& dataset, const std::filesystem::path& path);

/// Inverse of write_csid. Throws FormatError on bad magic/version or
/// truncation, and on non-finite payload values (named by sample index).
Dataset read_csid(std::istream& in);
Dataset read_csid(const std::filesystem::path& path);

/// Axis order of an externally supplied flat complex array. Any permutation
/// of the four axes; e.g. WILD's documented N x M x N_RX x N_AP order is
/// {sample, subcarrier, rx, ap}.
enum class Axis : std::uint8_t { sample, ap, rx, subcarrier };

struct AxisOrder {
    Axis slowest, a1, a2, fastest;
};

/// Parses a descriptor like "sample,subcarrier,rx,ap" (slowest first).
AxisOrder parse_axis_order(const std::string& text);

/// Reorders raw complex values (paired re, im) + flat labels (paired x, y)
/// into a canonical dataset. Throws DimensionError on length mismatch.
Dataset ingest_raw(const std::vector<float>& complex_values,
                   const std::vector<double>& labels, const TensorDims& dims,
                   const std::string& env_tag, const AxisOrder& order);

/// One cell of the regime x multiple x method evaluation grid.
struct ReportRow {
    std::string environment;
    std::string regime;       // small | medium | large
    double multiple = 1.0;    // >= 1
    std::string method;       // none | phase | amplitude | noise
    double test_mse = 0.0;    // squared meters
    std::uint64_t seed = 0;
};

enum class ReportFormat { csv, json };

/// CSV header: environment,regime,multiple,method,test_mse,seed
/// test_mse printed with 6 decimal places. Rows must be nonempty.
std::size_t write_report(const std::vector<ReportRow>& rows, std::ostream& out,
                         ReportFormat format);
std::size_t write_report(const std::vector<ReportRow>& rows,
                         const std::filesystem::path& path, ReportFormat format);

std::vector<ReportRow> read_report_csv(std::istream& in);

}  // namespace csiloc
