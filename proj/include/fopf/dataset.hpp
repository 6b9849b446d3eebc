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

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "fopf/detail/binary_io.hpp"
#include "fopf/error.hpp"
#include "fopf/log.hpp"
#include "fopf/seed.hpp"

namespace fopf {

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// Internal class ids are contiguous and 1-based.
using ClassId = int;

struct SampleView {
    NodeId id;
    ClassId label;
    std::span<const double> features;
};

/// Immutable labeled dataset with row-major 64-bit features.
///
/// Loaders remap arbitrary integer labels onto 1..n_classes in order of
/// first appearance; `label_value(c)` recovers the original value. An
/// optional per-sample source id is kept so that LibOPF files with
/// non-contiguous ids survive a load/save cycle.
class Dataset {
public:
    Dataset() = default;

    Dataset(std::size_t n_features, std::vector<double> features, std::vector<ClassId> labels,
            std::size_t n_classes, std::vector<std::int64_t> label_values = {},
            std::vector<std::int64_t> source_ids = {})
        : n_features_(n_features),
          n_classes_(n_classes),
          features_(std::move(features)),
          labels_(std::move(labels)),
          label_values_(std::move(label_values)),
          source_ids_(std::move(source_ids)) {
        if (label_values_.empty())
            for (std::size_t c = 1; c <= n_classes_; ++c) label_values_.push_back(static_cast<std::int64_t>(c));
        validate();
    }

    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    std::size_t n_features() const noexcept { return n_features_; }
    std::size_t n_classes() const noexcept { return n_classes_; }

    std::span<const double> features(NodeId i) const noexcept {
        return {features_.data() + i * n_features_, n_features_};
    }
    ClassId label(NodeId i) const noexcept { return labels_[i]; }
    SampleView sample(NodeId i) const noexcept { return {i, labels_[i], features(i)}; }

    std::span<const ClassId> labels() const noexcept { return labels_; }
    std::span<const double> raw_features() const noexcept { return features_; }
    std::span<const std::int64_t> label_values() const noexcept { return label_values_; }
    std::int64_t label_value(ClassId c) const { return label_values_.at(static_cast<std::size_t>(c - 1)); }

    bool has_source_ids() const noexcept { return !source_ids_.empty(); }
    std::int64_t source_id(NodeId i) const noexcept {
        return source_ids_.empty() ? static_cast<std::int64_t>(i) : source_ids_[i];
    }

    /// Subset in the given order; ids are renumbered, source ids and the
    /// label mapping carry over.
    Dataset select(std::span<const NodeId> rows) const {
        std::vector<double> f;
        std::vector<ClassId> l;
        std::vector<std::int64_t> src;
        f.reserve(rows.size() * n_features_);
        for (NodeId r : rows) {
            auto x = features(r);
            f.insert(f.end(), x.begin(), x.end());
            l.push_back(labels_[r]);
            src.push_back(source_id(r));
        }
        return Dataset(n_features_, std::move(f), std::move(l), n_classes_, label_values_, std::move(src));
    }

    /// Same samples with replaced feature matrix (used by scaling).
    Dataset with_features(std::vector<double> features) const {
        return Dataset(n_features_, std::move(features), labels_, n_classes_, label_values_, source_ids_);
    }

    friend bool operator==(const Dataset& a, const Dataset& b) {
        if (a.n_features_ != b.n_features_ || a.n_classes_ != b.n_classes_ || a.labels_ != b.labels_ ||
            a.label_values_ != b.label_values_ || a.features_.size() != b.features_.size())
            return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a.source_id(i) != b.source_id(i)) return false;
        // Bitwise so that -0.0 and 0.0 are distinguished.
        for (std::size_t i = 0; i < a.features_.size(); ++i)
            if (std::bit_cast<std::uint64_t>(a.features_[i]) != std::bit_cast<std::uint64_t>(b.features_[i]))
                return false;
        return true;
    }

private:
    void validate() const {
        if (n_features_ == 0) throw DataError("dataset must have at least one feature");
        if (features_.size() != labels_.size() * n_features_)
            throw DataError("feature matrix size does not match samples x features");
        if (label_values_.size() != n_classes_) throw DataError("label mapping size does not match class count");
        if (!source_ids_.empty() && source_ids_.size() != labels_.size())
            throw DataError("source id count does not match sample count");
        for (std::size_t i = 0; i < features_.size(); ++i)
            if (!std::isfinite(features_[i]))
                throw DataError("non-finite feature value at sample " + std::to_string(i / n_features_));
        if (labels_.empty()) return;
        std::vector<bool> seen(n_classes_ + 1, false);
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            ClassId l = labels_[i];
            if (l < 1 || static_cast<std::size_t>(l) > n_classes_)
                throw DataError("label " + std::to_string(l) + " of sample " + std::to_string(i) +
                                " outside [1, " + std::to_string(n_classes_) + "]");
            seen[static_cast<std::size_t>(l)] = true;
        }
        for (std::size_t c = 1; c <= n_classes_; ++c)
            if (!seen[c]) throw DataError("class " + std::to_string(c) + " has no samples");
    }

    std::size_t n_features_ = 0;
    std::size_t n_classes_ = 0;
    std::vector<double> features_;
    std::vector<ClassId> labels_;
    std::vector<std::int64_t> label_values_;
    std::vector<std::int64_t> source_ids_;
};

// ---------------------------------------------------------------------------
// File helpers

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure(path + ": cannot open file for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw RuntimeFailure(path + ": write failed");
}

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw RuntimeFailure("cannot format number");
    return std::string(buf.data(), end);
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

inline bool parse_int(std::string_view s, std::int64_t& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

} // namespace detail

/// Parses CSV text: n feature columns followed by one integer label column.
/// When `labeled` is false every column is a feature and all samples get
/// class 1.
inline Dataset parse_csv(std::string_view text, bool has_header, const std::string& source = "<csv>",
                         bool labeled = true) {
    std::vector<double> features;
    std::vector<ClassId> labels;
    std::vector<std::int64_t> label_values;
    std::map<std::int64_t, ClassId> remap;
    std::size_t n_columns = 0;
    std::size_t line_no = 0;
    bool header_pending = has_header;

    auto fail = [&](const std::string& msg) -> DataError {
        return DataError(source + ": row " + std::to_string(line_no) + ": " + msg);
    };

    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        std::string_view line =
            text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (detail::trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        auto cols = detail::split_commas(line);
        if (n_columns == 0) {
            n_columns = cols.size();
            if (labeled && n_columns < 2) throw fail("need at least one feature column and a label column");
        } else if (cols.size() != n_columns) {
            throw fail("expected " + std::to_string(n_columns) + " columns, found " + std::to_string(cols.size()));
        }
        std::size_t n_feat = labeled ? n_columns - 1 : n_columns;
        for (std::size_t c = 0; c < n_feat; ++c) {
            double v = 0.0;
            if (!detail::parse_double(cols[c], v))
                throw fail("malformed value '" + std::string(cols[c]) + "' in column " + std::to_string(c + 1));
            if (!std::isfinite(v)) throw fail("non-finite value in column " + std::to_string(c + 1));
            features.push_back(v);
        }
        if (labeled) {
            std::int64_t raw = 0;
            if (!detail::parse_int(cols.back(), raw))
                throw fail("malformed label '" + std::string(cols.back()) + "'");
            auto [it, inserted] = remap.try_emplace(raw, static_cast<ClassId>(remap.size() + 1));
            if (inserted) label_values.push_back(raw);
            labels.push_back(it->second);
        } else {
            labels.push_back(1);
        }
    }
    if (labels.empty()) throw DataError(source + ": no samples");
    std::size_t n_feat = labeled ? n_columns - 1 : n_columns;
    if (!labeled) label_values = {1};
    std::size_t n_classes = label_values.size();
    return Dataset(n_feat, std::move(features), std::move(labels), n_classes, std::move(label_values));
}

inline Dataset load_csv(const std::string& path, bool has_header = false, bool labeled = true) {
    return parse_csv(read_file(path), has_header, path, labeled);
}

/// CSV text with original label values; features in shortest round-trip form.
inline std::string to_csv(const Dataset& d) {
    std::string out;
    for (NodeId i = 0; i < d.size(); ++i) {
        for (double v : d.features(i)) {
            out += format_double(v);
            out += ',';
        }
        out += std::to_string(d.label_value(d.label(i)));
        out += '\n';
    }
    return out;
}

inline void save_csv(const Dataset& d, const std::string& path) { write_file(path, to_csv(d)); }

// ---------------------------------------------------------------------------
// LibOPF binary: int32 header (n_samples, n_classes, n_features), then per
// sample int32 id, int32 label, n_features float32. Little-endian.

inline Dataset decode_opf_binary(std::string_view bytes, const std::string& source = "<opf>") {
    detail::ByteReader in(bytes, source);
    auto n_samples = in.get<std::int32_t>();
    auto n_classes = in.get<std::int32_t>();
    auto n_features = in.get<std::int32_t>();
    if (n_samples < 0 || n_classes < 1 || n_features < 1)
        throw DataError(source + ": invalid header (" + std::to_string(n_samples) + ", " +
                        std::to_string(n_classes) + ", " + std::to_string(n_features) + ")");
    const auto record = 8u + 4u * static_cast<std::uint64_t>(n_features);
    const auto expected = record * static_cast<std::uint64_t>(n_samples);
    if (in.remaining() < expected)
        throw DataError(source + ": truncated file (header claims " + std::to_string(n_samples) +
                        " samples, payload holds " + std::to_string(in.remaining() / record) + ")");
    if (in.remaining() > expected)
        throw DataError(source + ": header/payload size mismatch (" + std::to_string(in.remaining() - expected) +
                        " trailing bytes)");

    std::vector<double> features;
    std::vector<ClassId> labels;
    std::vector<std::int64_t> ids;
    features.reserve(static_cast<std::size_t>(n_samples) * static_cast<std::size_t>(n_features));
    for (std::int32_t i = 0; i < n_samples; ++i) {
        ids.push_back(in.get<std::int32_t>());
        auto label = in.get<std::int32_t>();
        if (label < 1 || label > n_classes)
            throw DataError(source + ": sample " + std::to_string(i) + " has label " + std::to_string(label) +
                            " outside [1, " + std::to_string(n_classes) + "]");
        labels.push_back(label);
        for (std::int32_t f = 0; f < n_features; ++f) {
            float v = in.get<float>();
            if (!std::isfinite(v))
                throw DataError(source + ": sample " + std::to_string(i) + " has a non-finite feature");
            features.push_back(static_cast<double>(v));
        }
    }
    bool identity = true;
    for (std::size_t i = 0; i < ids.size(); ++i) identity = identity && ids[i] == static_cast<std::int64_t>(i);
    if (identity) ids.clear();
    return Dataset(static_cast<std::size_t>(n_features), std::move(features), std::move(labels),
                   static_cast<std::size_t>(n_classes), {}, std::move(ids));
}

inline std::string encode_opf_binary(const Dataset& d) {
    constexpr auto kMax = static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max());
    if (d.size() > kMax || d.n_features() > kMax) throw DataError("dataset too large for the LibOPF format");
    // Original label values are written when they already are 1..n_classes
    // in some order; anything else falls back to the internal ids.
    std::vector<bool> hit(d.n_classes() + 1, false);
    bool keep_values = true;
    for (auto v : d.label_values()) {
        if (v < 1 || static_cast<std::size_t>(v) > d.n_classes() || hit[static_cast<std::size_t>(v)]) {
            keep_values = false;
            break;
        }
        hit[static_cast<std::size_t>(v)] = true;
    }
    if (!keep_values) log::warn("LibOPF output: label values are not 1..n_classes; writing internal class ids");
    detail::ByteWriter out;
    out.put(static_cast<std::int32_t>(d.size()));
    out.put(static_cast<std::int32_t>(d.n_classes()));
    out.put(static_cast<std::int32_t>(d.n_features()));
    for (NodeId i = 0; i < d.size(); ++i) {
        out.put(static_cast<std::int32_t>(d.source_id(i)));
        out.put(static_cast<std::int32_t>(keep_values ? d.label_value(d.label(i)) : d.label(i)));
        for (double v : d.features(i)) out.put(static_cast<float>(v));
    }
    return out.take();
}

inline Dataset load_opf_binary(const std::string& path) { return decode_opf_binary(read_file(path), path); }

inline void save_opf_binary(const Dataset& d, const std::string& path) { write_file(path, encode_opf_binary(d)); }

// ---------------------------------------------------------------------------
// Splitting

struct SplitSpec {
    double train_fraction = 0.6;
    double eval_fraction = 0.2;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;

    void validate() const {
        for (double f : {train_fraction, eval_fraction, test_fraction})
            if (!(f > 0.0 && f < 1.0)) throw ConfigError("split fractions must lie in (0,1)");
        if (std::abs(train_fraction + eval_fraction + test_fraction - 1.0) > 1e-9)
            throw ConfigError("split fractions must sum to 1");
    }
};

struct SplitParts {
    Dataset train;
    Dataset eval;
    Dataset test;
};

namespace detail {

// Largest-remainder apportionment of n items over three fractions, each
// part receiving at least one item.
inline std::array<std::size_t, 3> apportion(std::size_t n, const std::array<double, 3>& frac) {
    std::array<std::size_t, 3> count{};
    std::array<double, 3> rem{};
    std::size_t assigned = 0;
    for (int p = 0; p < 3; ++p) {
        double exact = frac[p] * static_cast<double>(n);
        count[p] = static_cast<std::size_t>(std::floor(exact));
        rem[p] = exact - static_cast<double>(count[p]);
        assigned += count[p];
    }
    while (assigned < n) {
        int best = 0;
        for (int p = 1; p < 3; ++p)
            if (rem[p] > rem[best]) best = p;
        ++count[best];
        rem[best] = -1.0;
        ++assigned;
    }
    for (int p = 0; p < 3; ++p) {
        if (count[p] > 0) continue;
        int donor = 0;
        for (int q = 1; q < 3; ++q)
            if (count[q] > count[donor]) donor = q;
        --count[donor];
        ++count[p];
    }
    return count;
}

} // namespace detail

/// Per-class stratified three-way split. Every class lands in every part.
inline SplitParts stratified_split(const Dataset& d, const SplitSpec& spec) {
    spec.validate();
    std::vector<std::vector<NodeId>> by_class(d.n_classes() + 1);
    for (NodeId i = 0; i < d.size(); ++i) by_class[static_cast<std::size_t>(d.label(i))].push_back(i);

    auto rng = make_rng(spec.seed, SeedPurpose::split);
    std::array<std::vector<NodeId>, 3> parts;
    const std::array<double, 3> frac{spec.train_fraction, spec.eval_fraction, spec.test_fraction};
    for (std::size_t c = 1; c <= d.n_classes(); ++c) {
        auto& members = by_class[c];
        if (members.size() < 3)
            throw DataError("class " + std::to_string(d.label_value(static_cast<ClassId>(c))) + " has " +
                            std::to_string(members.size()) + " samples; a three-way split needs at least 3");
        std::shuffle(members.begin(), members.end(), rng);
        auto counts = detail::apportion(members.size(), frac);
        std::size_t pos = 0;
        for (int p = 0; p < 3; ++p)
            for (std::size_t k = 0; k < counts[p]; ++k) parts[p].push_back(members[pos++]);
    }
    for (auto& p : parts) std::sort(p.begin(), p.end());
    return {d.select(parts[0]), d.select(parts[1]), d.select(parts[2])};
}

// ---------------------------------------------------------------------------
// Synthetic data

enum class SyntheticKind { blobs, concentric_rings };

/// 2-D toy sets. Blobs: one isotropic Gaussian (sd 0.5) per class, centres
/// on a circle of radius 10. Rings: two classes on annuli of radius 1 and 3
/// with Gaussian radial noise of 0.1.
inline Dataset generate_synthetic(SyntheticKind kind, std::size_t n, std::uint64_t seed,
                                  std::size_t n_classes = 3) {
    if (n < 10) throw ConfigError("synthetic datasets need n >= 10");
    if (kind == SyntheticKind::concentric_rings) n_classes = 2;
    if (n_classes < 1 || n_classes > n) throw ConfigError("invalid class count for synthetic data");

    auto rng = make_rng(seed, SeedPurpose::generate);
    std::vector<double> features;
    std::vector<ClassId> labels;
    features.reserve(2 * n);
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::size_t count = n / n_classes + (c < n % n_classes ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i) {
            double x = 0.0;
            double y = 0.0;
            if (kind == SyntheticKind::blobs) {
                double angle = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(n_classes);
                std::normal_distribution<double> noise(0.0, 0.5);
                x = 10.0 * std::cos(angle) + noise(rng);
                y = 10.0 * std::sin(angle) + noise(rng);
            } else {
                std::uniform_real_distribution<double> theta(0.0, 2.0 * std::numbers::pi);
                std::normal_distribution<double> noise(0.0, 0.1);
                double r = (c == 0 ? 1.0 : 3.0) + noise(rng);
                double t = theta(rng);
                x = r * std::cos(t);
                y = r * std::sin(t);
            }
            features.push_back(x);
            features.push_back(y);
            labels.push_back(static_cast<ClassId>(c + 1));
        }
    }
    return Dataset(2, std::move(features), std::move(labels), n_classes);
}

// ---------------------------------------------------------------------------
// Optional min-max scaling (never applied implicitly).

struct MinMaxScaler {
    std::vector<double> lo;
    std::vector<double> hi;

    static MinMaxScaler fit(const Dataset& d) {
        MinMaxScaler s;
        s.lo.assign(d.n_features(), std::numeric_limits<double>::infinity());
        s.hi.assign(d.n_features(), -std::numeric_limits<double>::infinity());
        for (NodeId i = 0; i < d.size(); ++i) {
            auto x = d.features(i);
            for (std::size_t f = 0; f < x.size(); ++f) {
                s.lo[f] = std::min(s.lo[f], x[f]);
                s.hi[f] = std::max(s.hi[f], x[f]);
            }
        }
        return s;
    }

    // Constant features map to 0.
    void apply_inplace(std::span<double> x) const {
        for (std::size_t f = 0; f < x.size(); ++f) {
            double range = hi[f] - lo[f];
            x[f] = range > 0.0 ? (x[f] - lo[f]) / range : 0.0;
        }
    }

    Dataset apply(const Dataset& d) const {
        if (d.n_features() != lo.size()) throw DataError("scaler dimensionality mismatch");
        std::vector<double> f(d.raw_features().begin(), d.raw_features().end());
        for (NodeId i = 0; i < d.size(); ++i)
            apply_inplace(std::span<double>(f.data() + i * d.n_features(), d.n_features()));
        return d.with_features(std::move(f));
    }
};

} // namespace fopf
