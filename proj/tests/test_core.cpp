// SPDX-License-Identifier: Apache-2.0
//
// csiloc - CSI data augmentation and indoor localization toolkit

#include <doctest.h>

#include <limits>
#include <set>

#include "csiloc/types.hpp"
#include "test_util.hpp"

using namespace csiloc;

namespace {

Dataset make_dataset(TensorDims dims, std::size_t n) {
    Dataset ds;
    ds.dims = dims;
    ds.env_tag = "synthetic";
    ds.samples.resize(n);
    float counter = 0.0f;
    for (CsiSample& s : ds.samples) {
        s.csi.resize(dims.flat_size());
        for (cfloat& v : s.csi) v = {counter, counter + 0.5f};
        counter += 1.0f;
    }
    return ds;
}

}  // namespace

TEST_CASE("validate accepts a conforming dataset") {
    const Dataset ds = make_dataset({4, 2, 3}, 5);
    CHECK(validate(ds).ok());
}

TEST_CASE("validate reports NaN with the offending sample index") {
    Dataset ds = make_dataset({2, 2, 2}, 10);
    ds.samples[7].csi[3] = {1.0f, std::numeric_limits<float>::quiet_NaN()};
    const auto result = validate(ds);
    REQUIRE_FALSE(result.ok());
    CHECK(result.violations[0].sample_index == 7);
}

TEST_CASE("validate rejects an empty sample list") {
    Dataset ds;
    ds.dims = {2, 1, 1};
    const auto result = validate(ds);
    REQUIRE_FALSE(result.ok());
    CHECK(result.violations[0].message.find(">= 1") != std::string::npos);
}

TEST_CASE("validate rejects dimension mismatch and non-finite labels") {
    Dataset ds = make_dataset({2, 1, 2}, 3);
    ds.samples[1].csi.pop_back();
    CHECK_FALSE(validate(ds).ok());

    Dataset ds2 = make_dataset({2, 1, 2}, 3);
    ds2.samples[0].label.x = std::numeric_limits<double>::infinity();
    CHECK_FALSE(validate(ds2).ok());
}

TEST_CASE("slice_ap returns exactly one AP block") {
    const TensorDims dims{2, 1, 2};
    Dataset ds = make_dataset(dims, 1);
    auto block = slice_ap(ds.samples[0], dims, 1);
    REQUIRE(block.size() == 2);
    CHECK(block[0] == ds.samples[0].csi[flat_index(dims, 1, 0, 0)]);
    CHECK(block[1] == ds.samples[0].csi[flat_index(dims, 1, 0, 1)]);
}

TEST_CASE("slice_ap rejects out-of-range index") {
    const TensorDims dims{2, 1, 2};
    Dataset ds = make_dataset(dims, 1);
    CHECK_THROWS_AS(slice_ap(ds.samples[0], dims, dims.n_ap), DimensionError);
}

TEST_CASE("writing through one AP slice leaves other blocks bit-identical") {
    const TensorDims dims{3, 2, 3};
    Dataset ds = make_dataset(dims, 1);
    const CsiSample before = ds.samples[0];
    for (cfloat& v : slice_ap(ds.samples[0], dims, 1)) v *= 2.0f;
    for (std::uint32_t ap : {0u, 2u}) {
        auto mod = slice_ap(ds.samples[0], dims, ap);
        auto orig = slice_ap(const_cast<CsiSample&>(before), dims, ap);
        for (std::size_t e = 0; e < mod.size(); ++e) CHECK(mod[e] == orig[e]);
    }
}

TEST_CASE("slice_ap blocks partition the sample with no overlap or omission") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Dataset ds = testutil::random_dataset(rng, 5, 3, 4, 2);
        std::set<const cfloat*> seen;
        for (std::uint32_t ap = 0; ap < ds.dims.n_ap; ++ap) {
            for (const cfloat& v : slice_ap(ds.samples[0], ds.dims, ap)) {
                CHECK(seen.insert(&v).second);  // no overlap
            }
        }
        CHECK(seen.size() == ds.dims.flat_size());  // no omission
        CHECK(ds.dims.flat_size() ==
              std::size_t{ds.dims.m} * ds.dims.n_rx * ds.dims.n_ap);
    }
}
