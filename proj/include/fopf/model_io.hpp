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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fopf/dataset.hpp"
#include "fopf/detail/binary_io.hpp"
#include "fopf/fuzzy.hpp"
#include "fopf/supervised.hpp"

// Model container, little-endian throughout:
//
//   char[4]  magic            "OPF1" (standard) or "FOPF" (fuzzy)
//   u32      version          1
//   u32      metric           Metric code
//   u64      n, n_features, n_classes
//   i64      label_values[n_classes]
//   f64      features[n * n_features]
//   i32      true_label[n]
//   f64      cost[n]
//   i32      label[n]
//   i64      predecessor[n]   -1 for none
//   u64      order[n]
//   u64      n_prototypes, then u64 prototypes[n_prototypes]
//   u8       has_scaler, then f64 lo[n_features], f64 hi[n_features]
//   FOPF only:
//   f64      sigma, rho_min, rho_max
//   u64      k_used
//   u8       degenerate
//   f64      membership[n]
namespace fopf {

inline constexpr std::string_view kStandardMagic = "OPF1";
inline constexpr std::string_view kFuzzyMagic = "FOPF";
inline constexpr std::uint32_t kModelVersion = 1;

struct ModelFile {
    SupervisedModel forest;
    std::optional<MembershipMap> membership; // present for fuzzy models
    std::optional<MinMaxScaler> scaler;      // training-time scaling, if any

    bool is_fuzzy() const noexcept { return membership.has_value(); }
};

inline std::string encode_model(const ModelFile& file) {
    const SupervisedModel& m = file.forest;
    const Dataset& d = *m.training;
    const std::size_t n = d.size();
    detail::ByteWriter out;
    out.put_bytes(file.is_fuzzy() ? kFuzzyMagic : kStandardMagic);
    out.put(kModelVersion);
    out.put(static_cast<std::uint32_t>(m.metric));
    out.put(static_cast<std::uint64_t>(n));
    out.put(static_cast<std::uint64_t>(d.n_features()));
    out.put(static_cast<std::uint64_t>(d.n_classes()));
    out.put_all(d.label_values());
    out.put_all(d.raw_features());
    for (ClassId l : d.labels()) out.put(static_cast<std::int32_t>(l));
    out.put_all<double>(m.cost);
    for (ClassId l : m.label) out.put(static_cast<std::int32_t>(l));
    for (NodeId p : m.predecessor) out.put(p == kNoNode ? std::int64_t{-1} : static_cast<std::int64_t>(p));
    for (NodeId o : m.order) out.put(static_cast<std::uint64_t>(o));
    out.put(static_cast<std::uint64_t>(m.prototypes.size()));
    for (NodeId p : m.prototypes.members) out.put(static_cast<std::uint64_t>(p));
    out.put(static_cast<std::uint8_t>(file.scaler ? 1 : 0));
    if (file.scaler) {
        out.put_all<double>(file.scaler->lo);
        out.put_all<double>(file.scaler->hi);
    }
    if (file.membership) {
        const MembershipMap& mm = *file.membership;
        out.put(mm.params.sigma);
        out.put(mm.params.rho_min);
        out.put(mm.params.rho_max);
        out.put(static_cast<std::uint64_t>(mm.k_used));
        out.put(static_cast<std::uint8_t>(mm.degenerate ? 1 : 0));
        out.put_all<double>(mm.value);
    }
    return out.take();
}

inline ModelFile decode_model(std::string_view bytes, const std::string& source = "<model>") {
    detail::ByteReader in(bytes, source);
    auto magic = in.get_bytes(4);
    const bool fuzzy = magic == kFuzzyMagic;
    if (!fuzzy && magic != kStandardMagic) throw DataError(source + ": not an OPF model file (bad magic)");
    if (auto v = in.get<std::uint32_t>(); v != kModelVersion)
        throw DataError(source + ": unsupported model version " + std::to_string(v));
    const Metric metric = metric_from_code(in.get<std::uint32_t>());
    const auto n64 = in.get<std::uint64_t>();
    const auto f64 = in.get<std::uint64_t>();
    const auto c64 = in.get<std::uint64_t>();
    if (n64 < 2 || f64 < 1 || c64 < 1 || n64 > in.remaining() || f64 > in.remaining() || c64 > in.remaining())
        throw DataError(source + ": implausible model header");
    const auto n = static_cast<std::size_t>(n64);
    const auto nf = static_cast<std::size_t>(f64);
    const auto nc = static_cast<std::size_t>(c64);
    if (n * nf > in.remaining() / 8) throw DataError(source + ": truncated file (feature block)");

    auto label_values = in.get_n<std::int64_t>(nc);
    auto features = in.get_n<double>(n * nf);
    std::vector<ClassId> true_label;
    for (auto v : in.get_n<std::int32_t>(n)) true_label.push_back(v);
    auto training = std::make_shared<const Dataset>(nf, std::move(features), std::move(true_label), nc,
                                                    std::move(label_values));

    ModelFile file;
    SupervisedModel& m = file.forest;
    m.training = training;
    m.metric = metric;
    m.cost = in.get_n<double>(n);
    for (auto v : in.get_n<std::int32_t>(n)) {
        if (v < 1 || static_cast<std::size_t>(v) > nc) throw DataError(source + ": label map entry out of range");
        m.label.push_back(v);
    }
    for (auto v : in.get_n<std::int64_t>(n)) {
        if (v < -1 || v >= static_cast<std::int64_t>(n)) throw DataError(source + ": predecessor out of range");
        m.predecessor.push_back(v < 0 ? kNoNode : static_cast<NodeId>(v));
    }
    std::vector<bool> seen(n, false);
    for (auto v : in.get_n<std::uint64_t>(n)) {
        if (v >= n || seen[v]) throw DataError(source + ": order is not a permutation");
        seen[v] = true;
        m.order.push_back(static_cast<NodeId>(v));
    }
    const auto n_proto = in.get<std::uint64_t>();
    if (n_proto > n) throw DataError(source + ": too many prototypes");
    for (auto v : in.get_n<std::uint64_t>(static_cast<std::size_t>(n_proto))) {
        if (v >= n) throw DataError(source + ": prototype out of range");
        m.prototypes.members.push_back(static_cast<NodeId>(v));
    }
    if (in.get<std::uint8_t>() != 0) {
        MinMaxScaler s;
        s.lo = in.get_n<double>(nf);
        s.hi = in.get_n<double>(nf);
        file.scaler = std::move(s);
    }
    if (fuzzy) {
        MembershipMap mm;
        mm.params.sigma = in.get<double>();
        mm.params.rho_min = in.get<double>();
        mm.params.rho_max = in.get<double>();
        mm.k_used = static_cast<std::size_t>(in.get<std::uint64_t>());
        mm.degenerate = in.get<std::uint8_t>() != 0;
        mm.value = in.get_n<double>(n);
        file.membership = std::move(mm);
    }
    if (in.remaining() != 0) throw DataError(source + ": trailing bytes after model");
    return file;
}

inline void save_model(const ModelFile& file, const std::string& path) { write_file(path, encode_model(file)); }

inline ModelFile load_model(const std::string& path) { return decode_model(read_file(path), path); }

} // namespace fopf
