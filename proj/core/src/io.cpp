// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#include "csiloc/io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace csiloc {

namespace {

static_assert(std::endian::native == std::endian::little,
              "wire format helpers assume a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw FormatError(std::string("truncated stream reading ") + what);
    return value;
}

std::string format_multiple(double m) {
    std::ostringstream os;
    os << m;  // 1.0 -> "1", 1.5 -> "1.5"
    return os.str();
}

std::string format_mse(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::size_t csid_header_bytes(const Dataset& dataset) {
    return 4 + 5 * 4 + 1 + dataset.env_tag.size();
}

std::size_t csid_sample_bytes(const TensorDims& dims) {
    return 16 + 8 * dims.flat_size();
}

std::size_t write_csid(const Dataset& dataset, std::ostream& out) {
    auto check = validate(dataset);
    if (!check.ok()) {
        throw FormatError("refusing to write invalid dataset: " +
                          check.violations.front().message);
    }
    if (dataset.env_tag.size() > kMaxEnvTagLen) {
        throw FormatError("env_tag longer than 32 bytes");
    }

    out.write("CSID", 4);
    put<std::uint32_t>(out, kCsidVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(dataset.samples.size()));
    put<std::uint32_t>(out, dataset.dims.m);
    put<std::uint32_t>(out, dataset.dims.n_rx);
    put<std::uint32_t>(out, dataset.dims.n_ap);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(dataset.env_tag.size()));
    out.write(dataset.env_tag.data(),
              static_cast<std::streamsize>(dataset.env_tag.size()));

    for (const CsiSample& s : dataset.samples) {
        put<double>(out, s.label.x);
        put<double>(out, s.label.y);
        out.write(reinterpret_cast<const char*>(s.csi.data()),
                  static_cast<std::streamsize>(s.csi.size() * sizeof(cfloat)));
    }
    if (!out) throw FormatError("write failure on output sink");
    return csid_header_bytes(dataset) +
           dataset.samples.size() * csid_sample_bytes(dataset.dims);
}

std::size_t write_csid(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open for writing: " + path.string());
    return write_csid(dataset, out);
}

Dataset read_csid(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "CSID", 4) != 0) {
        throw FormatError("bad magic (expected CSID)");
    }
    const auto version = get<std::uint32_t>(in, "version");
    if (version != kCsidVersion) {
        throw FormatError("unsupported version " + std::to_string(version));
    }
    const auto n_samples = get<std::uint32_t>(in, "n_samples");
    Dataset ds;
    ds.dims.m = get<std::uint32_t>(in, "m");
    ds.dims.n_rx = get<std::uint32_t>(in, "n_rx");
    ds.dims.n_ap = get<std::uint32_t>(in, "n_ap");
    if (ds.dims.m == 0 || ds.dims.n_rx == 0 || ds.dims.n_ap == 0) {
        throw FormatError("non-positive dimension in header");
    }
    const auto tag_len = get<std::uint8_t>(in, "env_tag_len");
    if (tag_len > kMaxEnvTagLen) throw FormatError("env_tag_len > 32");
    ds.env_tag.resize(tag_len);
    in.read(ds.env_tag.data(), tag_len);
    if (!in) throw FormatError("truncated stream reading env_tag");

    const std::size_t flat = ds.dims.flat_size();
    ds.samples.resize(n_samples);
    for (std::uint32_t i = 0; i < n_samples; ++i) {
        CsiSample& s = ds.samples[i];
        s.label.x = get<double>(in, "label.x");
        s.label.y = get<double>(in, "label.y");
        s.csi.resize(flat);
        in.read(reinterpret_cast<char*>(s.csi.data()),
                static_cast<std::streamsize>(flat * sizeof(cfloat)));
        if (!in) {
            throw FormatError("truncated payload at sample " + std::to_string(i) +
                              ": expected " + std::to_string(flat * sizeof(cfloat)) +
                              " CSI bytes, got " + std::to_string(in.gcount()));
        }
        for (const cfloat& v : s.csi) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw FormatError("non-finite CSI value in sample " +
                                  std::to_string(i));
            }
        }
        if (!std::isfinite(s.label.x) || !std::isfinite(s.label.y)) {
            throw FormatError("non-finite label in sample " + std::to_string(i));
        }
    }
    return ds;
}

Dataset read_csid(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open for reading: " + path.string());
    return read_csid(in);
}

AxisOrder parse_axis_order(const std::string& text) {
    std::array<Axis, 4> axes;
    std::array<bool, 4> seen{};
    std::stringstream ss(text);
    std::string token;
    std::size_t count = 0;
    while (std::getline(ss, token, ',')) {
        // trim
        const auto b = token.find_first_not_of(" \t");
        const auto e = token.find_last_not_of(" \t");
        if (b == std::string::npos) throw FormatError("empty axis name");
        token = token.substr(b, e - b + 1);
        Axis axis;
        if (token == "sample") axis = Axis::sample;
        else if (token == "ap") axis = Axis::ap;
        else if (token == "rx") axis = Axis::rx;
        else if (token == "subcarrier") axis = Axis::subcarrier;
        else throw FormatError("unknown axis name: " + token);
        if (count >= 4) throw FormatError("more than 4 axes in order descriptor");
        if (seen[static_cast<std::size_t>(axis)]) {
            throw FormatError("duplicate axis: " + token);
        }
        seen[static_cast<std::size_t>(axis)] = true;
        axes[count++] = axis;
    }
    if (count != 4) throw FormatError("axis order needs exactly 4 axes");
    return {axes[0], axes[1], axes[2], axes[3]};
}

Dataset ingest_raw(const std::vector<float>& complex_values,
                   const std::vector<double>& labels, const TensorDims& dims,
                   const std::string& env_tag, const AxisOrder& order) {
    if (labels.size() % 2 != 0) {
        throw DimensionError("labels length must be even (x, y pairs)");
    }
    const std::size_t n_samples = labels.size() / 2;
    const std::size_t flat = dims.flat_size();
    if (complex_values.size() != 2 * flat * n_samples) {
        throw DimensionError("complex value count " +
                             std::to_string(complex_values.size() / 2) +
                             " != n_samples * m * n_rx * n_ap = " +
                             std::to_string(flat * n_samples));
    }
    if (n_samples == 0) throw DimensionError("no samples");

    const std::array<Axis, 4> axes{order.slowest, order.a1, order.a2, order.fastest};
    auto extent = [&](Axis a) -> std::size_t {
        switch (a) {
            case Axis::sample: return n_samples;
            case Axis::ap: return dims.n_ap;
            case Axis::rx: return dims.n_rx;
            case Axis::subcarrier: return dims.m;
        }
        return 0;
    };
    // stride of each axis in the input layout
    std::size_t strides[4];  // indexed by Axis value
    std::size_t acc = 1;
    for (int i = 3; i >= 0; --i) {
        strides[static_cast<std::size_t>(axes[i])] = acc;
        acc *= extent(axes[i]);
    }

    Dataset ds;
    ds.dims = dims;
    ds.env_tag = env_tag;
    ds.samples.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        CsiSample& s = ds.samples[i];
        s.label = {labels[2 * i], labels[2 * i + 1]};
        s.csi.resize(flat);
        for (std::uint32_t ap = 0; ap < dims.n_ap; ++ap) {
            for (std::uint32_t rx = 0; rx < dims.n_rx; ++rx) {
                for (std::uint32_t sc = 0; sc < dims.m; ++sc) {
                    const std::size_t src =
                        i * strides[static_cast<std::size_t>(Axis::sample)] +
                        ap * strides[static_cast<std::size_t>(Axis::ap)] +
                        rx * strides[static_cast<std::size_t>(Axis::rx)] +
                        sc * strides[static_cast<std::size_t>(Axis::subcarrier)];
                    s.csi[flat_index(dims, ap, rx, sc)] = {
                        complex_values[2 * src], complex_values[2 * src + 1]};
                }
            }
        }
    }
    auto check = validate(ds);
    if (!check.ok()) {
        throw FormatError("ingested data invalid: " + check.violations.front().message);
    }
    return ds;
}

std::size_t write_report(const std::vector<ReportRow>& rows, std::ostream& out,
                         ReportFormat format) {
    if (rows.empty()) throw ConfigError("report rows must be nonempty");
    std::ostringstream buf;
    if (format == ReportFormat::csv) {
        buf << "environment,regime,multiple,method,test_mse,seed\n";
        for (const ReportRow& r : rows) {
            buf << r.environment << ',' << r.regime << ',' << format_multiple(r.multiple)
                << ',' << r.method << ',' << format_mse(r.test_mse) << ',' << r.seed
                << '\n';
        }
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const ReportRow& r : rows) {
            arr.push_back({{"environment", r.environment},
                           {"regime", r.regime},
                           {"multiple", r.multiple},
                           {"method", r.method},
                           {"test_mse", r.test_mse},
                           {"seed", r.seed}});
        }
        buf << arr.dump(2) << '\n';
    }
    const std::string text = buf.str();
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw FormatError("write failure on report sink");
    return text.size();
}

std::size_t write_report(const std::vector<ReportRow>& rows,
                         const std::filesystem::path& path, ReportFormat format) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open for writing: " + path.string());
    return write_report(rows, out, format);
}

std::vector<ReportRow> read_report_csv(std::istream& in) {
    std::vector<ReportRow> rows;
    std::string line;
    if (!std::getline(in, line)) return rows;  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        ReportRow r;
        std::string field;
        std::getline(ss, r.environment, ',');
        std::getline(ss, r.regime, ',');
        std::getline(ss, field, ',');
        r.multiple = std::stod(field);
        std::getline(ss, r.method, ',');
        std::getline(ss, field, ',');
        r.test_mse = std::stod(field);
        std::getline(ss, field, ',');
        r.seed = std::stoull(field);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace csiloc
