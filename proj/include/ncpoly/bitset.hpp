// Copyright 2026 The ncpoly Authors
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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ncpoly {

/// Growable bitset with the handful of set operations the polyhedral
/// routines need (intersection, subset tests, popcount).
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const { return bits_; }

  void resize(std::size_t bits) {
    bits_ = bits;
    words_.resize((bits + 63) / 64, 0);
  }

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  Bitset operator&(const Bitset& o) const {
    Bitset out(std::max(bits_, o.bits_));
    for (std::size_t k = 0; k < std::min(words_.size(), o.words_.size()); ++k) out.words_[k] = words_[k] & o.words_[k];
    return out;
  }
  Bitset operator|(const Bitset& o) const {
    Bitset out(std::max(bits_, o.bits_));
    for (std::size_t k = 0; k < out.words_.size(); ++k) {
      const std::uint64_t a = k < words_.size() ? words_[k] : 0;
      const std::uint64_t b = k < o.words_.size() ? o.words_[k] : 0;
      out.words_[k] = a | b;
    }
    return out;
  }

  /// this ⊆ o
  bool subset_of(const Bitset& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      const std::uint64_t b = k < o.words_.size() ? o.words_[k] : 0;
      if (words_[k] & ~b) return false;
    }
    return true;
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_; ++i) {
      if (test(i)) out.push_back(i);
    }
    return out;
  }

  friend bool operator==(const Bitset& a, const Bitset& b) { return a.words_ == b.words_; }
  friend bool operator<(const Bitset& a, const Bitset& b) { return a.words_ < b.words_; }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ncpoly
