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

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "fopf/error.hpp"

namespace fopf {

enum class Metric : std::uint32_t {
    euclidean = 0,
    squared_euclidean = 1,
    manhattan = 2,
};

inline std::string_view to_string(Metric m) noexcept {
    switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::squared_euclidean: return "squared-euclidean";
    case Metric::manhattan: return "manhattan";
    }
    return "euclidean";
}

inline Metric parse_metric(std::string_view name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "squared-euclidean" || name == "sqeuclidean") return Metric::squared_euclidean;
    if (name == "manhattan") return Metric::manhattan;
    throw ConfigError("unknown metric '" + std::string(name) + "'");
}

inline Metric metric_from_code(std::uint32_t code) {
    if (code > static_cast<std::uint32_t>(Metric::manhattan))
        throw DataError("unknown metric code " + std::to_string(code));
    return static_cast<Metric>(code);
}

// Hot path; lengths are checked by callers that accept external input.
inline double distance_unchecked(Metric m, std::span<const double> a, std::span<const double> b) noexcept {
    double acc = 0.0;
    switch (m) {
    case Metric::euclidean:
    case Metric::squared_euclidean:
        for (std::size_t i = 0; i < a.size(); ++i) {
            double t = a[i] - b[i];
            acc += t * t;
        }
        return m == Metric::euclidean ? std::sqrt(acc) : acc;
    case Metric::manhattan:
        for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
        return acc;
    }
    return acc;
}

inline double distance(Metric m, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DataError("distance: length mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
    return distance_unchecked(m, a, b);
}

} // namespace fopf
