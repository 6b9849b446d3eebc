// Copyright 2026 The fopf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "fopf/model_io.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace fopf {
namespace {

void expect_same_forest(const SupervisedModel& a, const SupervisedModel& b) {
    EXPECT_EQ(*a.training, *b.training);
    EXPECT_EQ(a.metric, b.metric);
    EXPECT_EQ(a.cost, b.cost);
    EXPECT_EQ(a.label, b.label);
    EXPECT_EQ(a.predecessor, b.predecessor);
    EXPECT_EQ(a.order, b.order);
    EXPECT_EQ(a.prototypes.members, b.prototypes.members);
}

TEST(ModelIo, StandardRoundTrip) {
    std::mt19937_64 rng(60);
    Dataset d = oracle::random_dataset(rng, 50, 3, 3);
    SupervisedModel m = train(d, Metric::manhattan);
    std::string bytes = encode_model({m, {}, {}});
    EXPECT_EQ(bytes.substr(0, 4), "OPF1");
    ModelFile back = decode_model(bytes);
    EXPECT_FALSE(back.is_fuzzy());
    expect_same_forest(m, back.forest);
    Dataset t = oracle::random_dataset(rng, 20, 3, 3);
    EXPECT_EQ(classify_batch(m, t), classify_batch(back.forest, t));
}

TEST(ModelIo, FuzzyRoundTripWithScaler) {
    std::mt19937_64 rng(61);
    Dataset raw = oracle::random_dataset(rng, 40, 2, 2);
    MinMaxScaler s = MinMaxScaler::fit(raw);
    FuzzyModel m = train_fuzzy(s.apply(raw), 0.4, 6);
    std::string bytes = encode_model({m.forest, m.membership, s});
    EXPECT_EQ(bytes.substr(0, 4), "FOPF");
    ModelFile back = decode_model(bytes);
    ASSERT_TRUE(back.is_fuzzy());
    expect_same_forest(m.forest, back.forest);
    EXPECT_EQ(back.membership->value, m.membership.value);
    EXPECT_EQ(back.membership->params.sigma, 0.4);
    EXPECT_EQ(back.membership->k_used, m.membership.k_used);
    ASSERT_TRUE(back.scaler.has_value());
    EXPECT_EQ(back.scaler->lo, s.lo);
    EXPECT_EQ(back.scaler->hi, s.hi);
    EXPECT_EQ(encode_model(back), bytes);
}

TEST(ModelIo, CorruptInputsAreDataErrors) {
    SupervisedModel m = train(testing::line_fixture());
    std::string bytes = encode_model({m, {}, {}});
    EXPECT_THROW(decode_model("XXXX" + bytes.substr(4)), DataError);
    EXPECT_THROW(decode_model(bytes.substr(0, bytes.size() - 1)), DataError);
    EXPECT_THROW(decode_model(bytes + '\0'), DataError);
    EXPECT_THROW(decode_model(bytes.substr(0, 10)), DataError);
    std::string bad_version = bytes;
    bad_version[4] = 9;
    EXPECT_THROW(decode_model(bad_version), DataError);
    EXPECT_THROW(load_model("/nonexistent/model.bin"), DataError);
}

} // namespace
} // namespace fopf
