/*
 * Copyright (c) 2026, The dsad Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dsad/error.hpp"

namespace dsad {

/// Bit i of a subset mask stands for label i of the owning frame.
using SubsetMask = std::uint32_t;

/// Rendering of the whole frame in text output.
inline constexpr std::string_view kThetaName = "\xCE\x98";  // "Θ"

/// Finite set of mutually exclusive hypotheses. Cheap to copy; all copies share
/// one immutable label list.
class Frame {
 public:
  static constexpr std::size_t kMinSize = 2;
  static constexpr std::size_t kMaxSize = 16;

  explicit Frame(std::vector<std::string> labels) {
    if (labels.empty()) throw InvalidArgument("frame needs at least one label");
    if (labels.size() < kMinSize || labels.size() > kMaxSize)
      throw InvalidArgument("frame size " + std::to_string(labels.size()) + " outside [2, 16]");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i].empty()) throw InvalidArgument("frame labels must be nonempty");
      for (std::size_t j = 0; j < i; ++j)
        if (labels[i] == labels[j]) throw InvalidArgument("duplicate frame label '" + labels[i] + "'");
    }
    labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
  }

  Frame(std::initializer_list<std::string> labels) : Frame(std::vector<std::string>(labels)) {}

  std::size_t size() const noexcept { return labels_->size(); }
  const std::string& label(std::size_t i) const { return labels_->at(i); }
  const std::vector<std::string>& labels() const noexcept { return *labels_; }

  SubsetMask full_mask() const noexcept { return (SubsetMask{1} << size()) - 1; }

  /// Index of `name`, or size() when absent.
  std::size_t find(std::string_view name) const noexcept {
    for (std::size_t i = 0; i < labels_->size(); ++i)
      if ((*labels_)[i] == name) return i;
    return size();
  }

  std::size_t index_of(std::string_view name) const {
    const auto i = find(name);
    if (i == size()) throw InvalidArgument("label '" + std::string(name) + "' not in frame");
    return i;
  }

  /// Label-union text: "a|b", or Θ for the whole frame.
  std::string name_of(SubsetMask bits) const {
    if (bits == full_mask()) return std::string(kThetaName);
    std::string out;
    for (std::size_t i = 0; i < size(); ++i) {
      if (!(bits >> i & 1u)) continue;
      if (!out.empty()) out += '|';
      out += (*labels_)[i];
    }
    return out.empty() ? std::string("{}") : out;
  }

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.labels_ == b.labels_ || *a.labels_ == *b.labels_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> labels_;
};

inline Frame make_frame(std::vector<std::string> labels) { return Frame(std::move(labels)); }

/// Nonempty subset of a frame.
class HypothesisSet {
 public:
  HypothesisSet(Frame frame, SubsetMask bits) : frame_(std::move(frame)), bits_(bits) {
    if (bits_ == 0) throw InvalidArgument("the empty hypothesis set is not allowed");
    if ((bits_ & ~frame_.full_mask()) != 0) throw InvalidArgument("hypothesis set exceeds its frame");
  }

  static HypothesisSet singleton(const Frame& frame, std::size_t index) {
    if (index >= frame.size()) throw InvalidArgument("label index out of range");
    return {frame, SubsetMask{1} << index};
  }

  static HypothesisSet theta(const Frame& frame) { return {frame, frame.full_mask()}; }

  static HypothesisSet of(const Frame& frame, std::initializer_list<std::string_view> names) {
    SubsetMask bits = 0;
    for (auto n : names) bits |= SubsetMask{1} << frame.index_of(n);
    return {frame, bits};
  }

  /// Parses "a|b|c"; "Θ", "Theta" and "*" denote the whole frame.
  static HypothesisSet parse(const Frame& frame, std::string_view text) {
    if (text == kThetaName || text == "Theta" || text == "*") return theta(frame);
    SubsetMask bits = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto bar = text.find('|', start);
      const auto part = text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
      if (part.empty()) throw InvalidArgument("empty label in subset '" + std::string(text) + "'");
      bits |= SubsetMask{1} << frame.index_of(part);
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
    return {frame, bits};
  }

  const Frame& frame() const noexcept { return frame_; }
  SubsetMask bits() const noexcept { return bits_; }
  int cardinality() const noexcept { return std::popcount(bits_); }
  bool is_singleton() const noexcept { return cardinality() == 1; }
  bool is_theta() const noexcept { return bits_ == frame_.full_mask(); }
  bool contains(std::size_t index) const noexcept { return index < 32 && (bits_ >> index & 1u); }

  /// Complement within the frame; empty complements (of Θ) are reported as nullopt by callers.
  SubsetMask complement_bits() const noexcept { return frame_.full_mask() & ~bits_; }

  std::string name() const { return frame_.name_of(bits_); }

  friend bool operator==(const HypothesisSet& a, const HypothesisSet& b) {
    return a.bits_ == b.bits_ && a.frame_ == b.frame_;
  }

 private:
  Frame frame_;
  SubsetMask bits_;
};

}  // namespace dsad
