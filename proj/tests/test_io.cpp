// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "csiloc/io.hpp"
#include "test_util.hpp"

using namespace csiloc;

TEST_CASE("csid payload for dims (1,1,1) is 24 bytes per sample") {
    Dataset ds;
    ds.dims = {1, 1, 1};
    ds.env_tag = "t";
    ds.samples.resize(1);
    ds.samples[0].csi = {{1.0f, 2.0f}};
    ds.samples[0].label = {3.0, 4.0};

    std::ostringstream out;
    const std::size_t total = write_csid(ds, out);
    CHECK(csid_sample_bytes(ds.dims) == 24);
    CHECK(total == out.str().size());
    CHECK(total == csid_header_bytes(ds) + 24);
}

TEST_CASE("per-sample payload for dims (234,4,4) is 29968 bytes") {
    // 16 label bytes + 8 * 234 * 4 * 4
    CHECK(csid_sample_bytes({234, 4, 4}) == 29968);
}

TEST_CASE("csid round-trip is bit-exact on random datasets") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Dataset ds = testutil::random_dataset(rng);
        std::stringstream buf;
        const std::size_t bytes = write_csid(ds, buf);
        CHECK(bytes == buf.str().size());
        CHECK(bytes == csid_header_bytes(ds) +
                           ds.size() * csid_sample_bytes(ds.dims));
        const Dataset back = read_csid(buf);
        CHECK(testutil::bit_identical(ds, back));
        CHECK(validate(back).ok());
    }
}

TEST_CASE("read_csid rejects corrupted magic") {
    std::mt19937_64 rng(3);
    const Dataset ds = testutil::random_dataset(rng);
    std::stringstream buf;
    write_csid(ds, buf);
    std::string bytes = buf.str();
    bytes[3] = 'X';  // CSID -> CSIX
    std::istringstream in(bytes);
    CHECK_THROWS_AS(read_csid(in), FormatError);
}

TEST_CASE("read_csid rejects truncated payload naming the sample") {
    std::mt19937_64 rng(5);
    const Dataset ds = testutil::random_dataset(rng);
    std::stringstream buf;
    write_csid(ds, buf);
    std::string bytes = buf.str();
    bytes.resize(bytes.size() - 5);
    std::istringstream in(bytes);
    CHECK_THROWS_WITH_AS(read_csid(in), doctest::Contains("truncated"), FormatError);
}

TEST_CASE("ingest_raw is trivially canonical for dims (1,1,1)") {
    const std::vector<float> values{1.0f, 2.0f, 3.0f, 4.0f};  // 2 samples
    const std::vector<double> labels{0.0, 0.0, 1.0, 1.0};
    const Dataset ds = ingest_raw(values, labels, {1, 1, 1}, "raw",
                                  parse_axis_order("sample,ap,rx,subcarrier"));
    REQUIRE(ds.size() == 2);
    CHECK(ds.samples[0].csi[0] == cfloat{1.0f, 2.0f});
    CHECK(ds.samples[1].csi[0] == cfloat{3.0f, 4.0f});
}

TEST_CASE("ingest_raw permutes subcarrier-major input of dims (2,1,2)") {
    // Input layout sample, subcarrier, rx, ap. Entry value encodes its own
    // coordinates so placement can be checked entrywise.
    const TensorDims dims{2, 1, 2};
    std::vector<float> values;
    for (int sc = 0; sc < 2; ++sc) {
        for (int rx = 0; rx < 1; ++rx) {
            for (int ap = 0; ap < 2; ++ap) {
                values.push_back(static_cast<float>(100 * ap + 10 * rx + sc));
                values.push_back(0.0f);
            }
        }
    }
    const Dataset ds = ingest_raw(values, {0.0, 0.0}, dims, "raw",
                                  parse_axis_order("sample,subcarrier,rx,ap"));
    for (std::uint32_t ap = 0; ap < 2; ++ap) {
        for (std::uint32_t sc = 0; sc < 2; ++sc) {
            CHECK(ds.samples[0].csi[flat_index(dims, ap, 0, sc)].real() ==
                  doctest::Approx(100.0 * ap + sc));
        }
    }
}

TEST_CASE("ingest_raw round-trips every axis permutation against brute force") {
    const TensorDims dims{3, 2, 2};
    const std::vector<std::string> orders = {
        "sample,ap,rx,subcarrier", "sample,subcarrier,rx,ap",
        "ap,sample,subcarrier,rx", "subcarrier,rx,ap,sample"};
    for (const std::string& order_text : orders) {
        const AxisOrder order = parse_axis_order(order_text);
        // build input by enumerating the input layout and encoding coordinates
        const std::size_t n_samples = 2;
        std::vector<float> values(2 * n_samples * dims.flat_size());
        auto extent = [&](Axis a) -> std::size_t {
            switch (a) {
                case Axis::sample: return n_samples;
                case Axis::ap: return dims.n_ap;
                case Axis::rx: return dims.n_rx;
                case Axis::subcarrier: return dims.m;
            }
            return 0;
        };
        const Axis axes[4] = {order.slowest, order.a1, order.a2, order.fastest};
        std::size_t flat = 0;
        std::size_t idx[4];
        for (idx[0] = 0; idx[0] < extent(axes[0]); ++idx[0])
            for (idx[1] = 0; idx[1] < extent(axes[1]); ++idx[1])
                for (idx[2] = 0; idx[2] < extent(axes[2]); ++idx[2])
                    for (idx[3] = 0; idx[3] < extent(axes[3]); ++idx[3]) {
                        std::size_t coord[4] = {};  // by Axis enum value
                        for (int a = 0; a < 4; ++a) {
                            coord[static_cast<int>(axes[a])] = idx[a];
                        }
                        const float tagged =
                            static_cast<float>(1000 * coord[0] + 100 * coord[1] +
                                               10 * coord[2] + coord[3]);
                        values[2 * flat] = tagged;
                        values[2 * flat + 1] = -tagged;
                        ++flat;
                    }
        const Dataset ds = ingest_raw(values, {0, 0, 1, 1}, dims, "raw", order);
        for (std::size_t i = 0; i < n_samples; ++i) {
            for (std::uint32_t ap = 0; ap < dims.n_ap; ++ap)
                for (std::uint32_t rx = 0; rx < dims.n_rx; ++rx)
                    for (std::uint32_t sc = 0; sc < dims.m; ++sc) {
                        const float expected = static_cast<float>(
                            1000 * i + 100 * ap + 10 * rx + sc);
                        CHECK(ds.samples[i].csi[flat_index(dims, ap, rx, sc)] ==
                              cfloat{expected, -expected});
                    }
        }
    }
}

TEST_CASE("ingest_raw rejects length mismatches") {
    CHECK_THROWS_AS(ingest_raw({1.0f, 2.0f}, {0.0, 0.0, 0.0}, {1, 1, 1}, "raw",
                               parse_axis_order("sample,ap,rx,subcarrier")),
                    DimensionError);
    CHECK_THROWS_AS(ingest_raw({1.0f, 2.0f, 3.0f, 4.0f}, {0.0, 0.0}, {1, 1, 1}, "raw",
                               parse_axis_order("sample,ap,rx,subcarrier")),
                    DimensionError);
}

TEST_CASE("report CSV matches the documented schema") {
    const std::vector<ReportRow> rows = {
        {"NLOS", "small", 1.0, "none", 5.204818, 42}};
    std::ostringstream out;
    write_report(rows, out, ReportFormat::csv);
    CHECK(out.str() ==
          "environment,regime,multiple,method,test_mse,seed\n"
          "NLOS,small,1,none,5.204818,42\n");
}

TEST_CASE("write_report rejects empty rows") {
    std::ostringstream out;
    CHECK_THROWS_AS(write_report({}, out, ReportFormat::csv), ConfigError);
}

TEST_CASE("JSON report parses back to identical rows") {
    const std::vector<ReportRow> rows = {
        {"LOS", "medium", 3.0, "phase", 0.183591, 7},
        {"NLOS", "large", 6.0, "amplitude", 1.026412, 8}};
    std::ostringstream out;
    write_report(rows, out, ReportFormat::json);
    const auto parsed = nlohmann::json::parse(out.str());
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i]["environment"] == rows[i].environment);
        CHECK(parsed[i]["regime"] == rows[i].regime);
        CHECK(parsed[i]["multiple"].get<double>() == rows[i].multiple);
        CHECK(parsed[i]["method"] == rows[i].method);
        CHECK(parsed[i]["test_mse"].get<double>() == rows[i].test_mse);
        CHECK(parsed[i]["seed"].get<std::uint64_t>() == rows[i].seed);
    }
}

TEST_CASE("CSV report parses back through read_report_csv") {
    std::mt19937_64 rng(13);
    std::vector<ReportRow> rows;
    for (int i = 0; i < 10; ++i) {
        rows.push_back({"NLOS", "small", static_cast<double>(1 + i % 6), "phase",
                        std::uniform_real_distribution<double>(0, 10)(rng),
                        static_cast<std::uint64_t>(i)});
    }
    std::stringstream buf;
    write_report(rows, buf, ReportFormat::csv);
    const auto back = read_report_csv(buf);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].environment == rows[i].environment);
        CHECK(back[i].multiple == rows[i].multiple);
        // mse printed at 6 decimals
        CHECK(back[i].test_mse == doctest::Approx(rows[i].test_mse).epsilon(1e-5));
        CHECK(back[i].seed == rows[i].seed);
    }
}
