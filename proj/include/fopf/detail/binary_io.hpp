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

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "fopf/error.hpp"

// Little-endian encoding helpers shared by the dataset and model formats.
namespace fopf::detail {

template <class T>
concept Scalar = std::is_arithmetic_v<T>;

template <Scalar T>
auto to_bits(T v) noexcept {
    if constexpr (std::is_same_v<T, float>) return std::bit_cast<std::uint32_t>(v);
    else if constexpr (std::is_same_v<T, double>) return std::bit_cast<std::uint64_t>(v);
    else return static_cast<std::make_unsigned_t<T>>(v);
}

class ByteWriter {
public:
    template <Scalar T>
    void put(T v) {
        auto bits = to_bits(v);
        for (std::size_t i = 0; i < sizeof(T); ++i)
            buf_.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    }

    template <Scalar T>
    void put_all(std::span<const T> values) {
        for (T v : values) put(v);
    }

    void put_bytes(std::string_view bytes) { buf_.append(bytes); }

    const std::string& bytes() const noexcept { return buf_; }
    std::string take() noexcept { return std::move(buf_); }

private:
    std::string buf_;
};

class ByteReader {
public:
    ByteReader(std::string_view data, std::string source) : data_(data), source_(std::move(source)) {}

    template <Scalar T>
    T get() {
        require(sizeof(T));
        using Bits = decltype(to_bits(T{}));
        Bits bits = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            bits |= static_cast<Bits>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += sizeof(T);
        if constexpr (std::is_floating_point_v<T>) return std::bit_cast<T>(bits);
        else return static_cast<T>(bits);
    }

    template <Scalar T>
    std::vector<T> get_n(std::size_t n) {
        if (n > remaining() / sizeof(T)) require(remaining() + 1);
        std::vector<T> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(get<T>());
        return out;
    }

    std::string_view get_bytes(std::size_t n) {
        require(n);
        auto s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    std::size_t remaining() const noexcept { return data_.size() - pos_; }
    std::size_t position() const noexcept { return pos_; }

private:
    void require(std::size_t n) const {
        if (data_.size() - pos_ < n)
            throw DataError(source_ + ": truncated file (needed " + std::to_string(n) +
                            " bytes at offset " + std::to_string(pos_) + ", " +
                            std::to_string(data_.size() - pos_) + " available)");
    }

    std::string_view data_;
    std::size_t pos_ = 0;
    std::string source_;
};

} // namespace fopf::detail
