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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dsad/bpa.hpp"
#include "support/oracles.hpp"

namespace dsad {
namespace {

const Frame kClasses = make_frame({"c1", "c2", "c3"});

// Per-class ranges for one feature: c1 [1, 4], c2 [2.5, 4.5], c3 [3, 6].
const std::vector<ClassRange> kExampleRanges{{1.0, 4.0}, {2.5, 4.5}, {3.0, 6.0}};

// Training ranges used for the worked item 86, one row per feature.
const std::vector<std::vector<ClassRange>> kItem86Ranges{
    {{4.3, 5.8}, {4.9, 6.9}, {4.9, 7.9}},
    {{2.3, 4.4}, {2.0, 3.3}, {2.2, 3.8}},
    {{1.0, 1.9}, {3.3, 5.1}, {4.5, 6.7}},
    {{0.1, 0.6}, {1.0, 1.7}, {1.4, 2.5}},
};

TEST(Threshold, RankFollowsNormalFraction) {
  std::vector<double> values(630);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>((i * 7919) % 630);
  // a permutation of 0..629, so the k-th smallest is k-1
  EXPECT_EQ(modified_median_threshold(values, 458, 699), 412.0);
  values.pop_back();
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(modified_median_threshold(values, 458, 699), sorted[411]);

  std::vector<double> ten{9, 3, 7, 1, 5, 2, 8, 4, 10, 6};
  EXPECT_EQ(modified_median_threshold(ten, 1, 2), 5.0);
  EXPECT_THROW(modified_median_threshold(std::vector<double>{}, 1, 2), InvalidArgument);
}

TEST(Threshold, AgreesWithSortOracle) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> len(1, 200), val(1, 10);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> v(static_cast<std::size_t>(len(gen)));
    for (auto& x : v) x = val(gen);
    const std::size_t labels = 699, normals = 1 + static_cast<std::size_t>(t) % 698;
    EXPECT_EQ(modified_median_threshold(v, normals, labels),
              oracle::kth_smallest_by_sort(v, static_cast<double>(normals) / labels));
  }
}

TEST(Sigmoid, Examples) {
  const auto mid = sigmoid_mass(2.0, {2.0});
  EXPECT_EQ(mid.mass_of(kNormalBit), 0.5);
  EXPECT_EQ(mid.mass_of(kAbnormalBit), 0.5);
  EXPECT_EQ(mid.theta_mass(), 0.0);
  EXPECT_NEAR(sigmoid_mass(3.0, {5.0}).mass_of(kNormalBit), 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(sigmoid_mass(3.0, {5.0}).mass_of(kNormalBit), 0.8807970779778823, 1e-15);
  EXPECT_NEAR(sigmoid_mass(10.0, {5.0}).mass_of(kNormalBit), 0.0066928509242848554, 1e-15);
}

TEST(Sigmoid, ClampsAtSaturation) {
  const auto lo = sigmoid_mass(1e6, {0.0});
  EXPECT_EQ(lo.mass_of(kNormalBit), kSigmoidClamp);
  EXPECT_GT(lo.mass_of(kAbnormalBit), 0.0);
  const auto hi = sigmoid_mass(-1e6, {0.0});
  EXPECT_EQ(hi.size(), 2u);
  EXPECT_THROW(sigmoid_mass(std::nan(""), {0.0}), InvalidArgument);
}

TEST(Sigmoid, MonotoneAndComplementary) {
  double prev = 2.0;
  for (double v = -80.0; v <= 80.0; v += 0.125) {
    const auto m = sigmoid_mass(v, {1.5});
    const double n = m.mass_of(kNormalBit);
    // strict where doubles can still resolve the step, non-increasing in the saturated tails
    if (std::abs(v - 1.5) < 25.0)
      EXPECT_LT(n, prev) << v;
    else
      EXPECT_LE(n, prev) << v;
    EXPECT_NEAR(n + m.mass_of(kAbnormalBit), 1.0, 1e-15);
    EXPECT_GE(std::min(n, m.mass_of(kAbnormalBit)), kSigmoidClamp * 0.5);
    prev = n;
  }
}

TEST(ScaledSigmoid, Examples) {
  const ScaledSigmoidBpa bpa;
  const auto mid = scaled_sigmoid_mass(30.0, bpa);
  EXPECT_NEAR(mid.mass_of(kNormalBit), 0.5, 1e-12);
  EXPECT_NEAR(mid.mass_of(kAbnormalBit), 0.49, 1e-12);
  EXPECT_NEAR(mid.theta_mass(), 0.01, 1e-12);
  EXPECT_NEAR(scaled_sigmoid_mass(0.0, bpa).mass_of(kNormalBit), 0.7, 1e-9);
  EXPECT_NEAR(scaled_sigmoid_mass(94665.0, bpa).mass_of(kNormalBit), 0.3, 1e-9);
  EXPECT_THROW(scaled_sigmoid_mass(-1.0, bpa), InvalidArgument);
}

TEST(ScaledSigmoid, StaysWithinBounds) {
  const ScaledSigmoidBpa bpa;
  for (double v = 0.0; v < 80.0; v += 0.25) {
    const double n = scaled_sigmoid_mass(v, bpa).mass_of(kNormalBit);
    EXPECT_GT(n, bpa.floor - 1e-15);
    EXPECT_LT(n, bpa.ceiling + 1e-15);
  }
  for (double v = 1.0; v < 60.0; v += 1.0) {
    const double n = scaled_sigmoid_mass(v, bpa).mass_of(kNormalBit);
    EXPECT_GT(n, bpa.floor);
    EXPECT_LT(n, bpa.ceiling);
  }
}

TEST(TableBpa, RowLookup) {
  TableBpa spoofed;
  spoofed.rows = {TableRow{0.9, 0.09, 0.01}, TableRow{0.1, 0.89, 0.01}};
  const auto m = table_mass(1, spoofed);
  EXPECT_EQ(m.mass_of(kNormalBit), 0.1);
  EXPECT_EQ(m.mass_of(kAbnormalBit), 0.89);
  EXPECT_EQ(m.theta_mass(), 0.01);
  EXPECT_EQ(table_mass(0, spoofed).mass_of(kNormalBit), 0.9);
  EXPECT_THROW(table_mass(2, spoofed), InvalidArgument);
  EXPECT_THROW(table_mass(-1, spoofed), InvalidArgument);
}

TEST(Boundaries, FitMinMax) {
  const std::vector<std::vector<double>> rows{{1.0, 10.0}, {3.0, 8.0}, {5.0, 2.0}, {4.0, 3.0}, {9.0, 9.0}};
  const std::vector<std::size_t> labels{0, 0, 1, 1, 2};
  const auto b = fit_boundaries(rows, labels, 3, 2);
  EXPECT_EQ(b.ranges[0][0].min, 1.0);
  EXPECT_EQ(b.ranges[0][0].max, 3.0);
  EXPECT_EQ(b.ranges[1][1].min, 2.0);
  EXPECT_EQ(b.ranges[1][1].max, 3.0);
  EXPECT_EQ(b.ranges[0][2].min, 9.0);
  EXPECT_EQ(b.ranges[0][2].max, 9.0);
  const std::vector<std::size_t> missing_class{0, 0, 1, 1, 1};
  EXPECT_THROW(fit_boundaries(rows, missing_class, 3, 2), InvalidArgument);
}

TEST(Boundaries, IdenticalClassesGiveIdenticalRanges) {
  const std::vector<std::vector<double>> rows{{1.0}, {2.0}, {1.0}, {2.0}};
  const std::vector<std::size_t> labels{0, 0, 1, 1};
  const auto b = fit_boundaries(rows, labels, 2, 1);
  EXPECT_EQ(b.ranges[0][0].min, b.ranges[0][1].min);
  EXPECT_EQ(b.ranges[0][0].max, b.ranges[0][1].max);
}

TEST(BoundaryMass, ExampleRanges) {
  const auto below = boundary_mass(2.0, kExampleRanges, kClasses);
  EXPECT_NEAR(below.mass_of(0b001), 0.9, 1e-15);
  EXPECT_NEAR(below.theta_mass(), 0.1, 1e-15);
  EXPECT_EQ(boundary_mass(3.5, kExampleRanges, kClasses), vacuous_mass(kClasses));
  EXPECT_EQ(boundary_mass(3.0, kExampleRanges, kClasses), vacuous_mass(kClasses));
  EXPECT_EQ(boundary_mass(4.0, kExampleRanges, kClasses), vacuous_mass(kClasses));
  EXPECT_NEAR(boundary_mass(2.7, kExampleRanges, kClasses).mass_of(0b011), 0.9, 1e-15);
  EXPECT_NEAR(boundary_mass(4.2, kExampleRanges, kClasses).mass_of(0b110), 0.9, 1e-15);
  EXPECT_NEAR(boundary_mass(5.0, kExampleRanges, kClasses).mass_of(0b100), 0.9, 1e-15);
  // outside every range: nearest class
  EXPECT_NEAR(boundary_mass(0.2, kExampleRanges, kClasses).mass_of(0b001), 0.9, 1e-15);
  EXPECT_NEAR(boundary_mass(9.0, kExampleRanges, kClasses).mass_of(0b100), 0.9, 1e-15);
}

TEST(BoundaryMass, TrainingRangesForItem86) {
  const auto f2 = boundary_mass(3.4, kItem86Ranges[1], kClasses);
  EXPECT_NEAR(f2.mass_of(0b101), 0.9, 1e-15);
  EXPECT_NEAR(f2.theta_mass(), 0.1, 1e-15);
  EXPECT_NEAR(boundary_mass(6.0, kItem86Ranges[0], kClasses).mass_of(0b110), 0.9, 1e-15);
  EXPECT_NEAR(boundary_mass(4.5, kItem86Ranges[2], kClasses).mass_of(0b110), 0.9, 1e-15);
  EXPECT_NEAR(boundary_mass(1.6, kItem86Ranges[3], kClasses).mass_of(0b110), 0.9, 1e-15);
}

TEST(BoundaryMass, GrowingARangeOnlyAddsMembership) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int t = 0; t < 2000; ++t) {
    std::vector<ClassRange> r(3);
    for (auto& c : r) {
      double a = u(gen), b = u(gen);
      c = {std::min(a, b), std::max(a, b)};
    }
    auto grown = r;
    const auto c = static_cast<std::size_t>(t % 3);
    grown[c].min -= u(gen) / 5;
    grown[c].max += u(gen) / 5;
    const double v = u(gen);
    const SubsetMask before = membership_set(v, r), after = membership_set(v, grown);
    EXPECT_EQ(before & after, before);
    EXPECT_EQ(after & ~(SubsetMask{1} << c), before & ~(SubsetMask{1} << c));
    // output is a function of S(value) alone
    if (before != 0) {
      std::vector<ClassRange> copy = r;
      const auto m1 = boundary_mass(v, r, kClasses);
      const auto m2 = boundary_mass(v, copy, kClasses);
      EXPECT_EQ(m1, m2);
      if (before == 0b111)
        EXPECT_EQ(m1, vacuous_mass(kClasses));
      else
        EXPECT_NEAR(m1.mass_of(before), 0.9, 1e-15);
    }
  }
}

TEST(Fsv, Examples) {
  const std::vector<std::vector<double>> separated{{1, 2, 3}, {7, 8, 9}};
  EXPECT_NEAR(fsv(separated), 1.0 / std::sqrt(58.0 / 5.0), 1e-15);
  EXPECT_NEAR(fsv(separated), 0.29361010975735174, 1e-12);
  EXPECT_EQ(fsv(std::vector<std::vector<double>>{{5, 5, 5}, {9, 9, 9}}), 0.0);
  EXPECT_NEAR(fsv(std::vector<std::vector<double>>{{1, 2, 3}, {1, 2, 3}}), 1.0 / oracle::sd({1, 2, 3, 1, 2, 3}), 1e-15);
  EXPECT_THROW(fsv(std::vector<std::vector<double>>{{4, 4}, {4, 4}}), DegenerateFeature);
  EXPECT_THROW(fsv(std::vector<std::vector<double>>{{1, 2}}), InvalidArgument);
}

TEST(Fsv, TranslationAndScaling) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 2);
    std::vector<std::vector<double>> g(n, std::vector<double>(6));
    for (std::size_t c = 0; c < n; ++c)
      for (auto& x : g[c]) x = z(gen) + 3.0 * static_cast<double>(c);
    const double base = fsv(g);
    auto shifted = g, scaled = g;
    const double lambda = -2.5;
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t i = 0; i < 6; ++i) {
        shifted[c][i] += 17.0;
        scaled[c][i] *= lambda;
      }
    EXPECT_NEAR(fsv(shifted), base, 1e-9 * std::max(1.0, base));
    EXPECT_NEAR(fsv(scaled), base * std::pow(std::abs(lambda), static_cast<double>(n - 1)), 1e-9 * std::max(1.0, base));
  }
}

TEST(SelectFeature, Examples) {
  // feature 3 is tight and separated; features 0..2 overlap
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> labels;
  for (int i = 0; i < 10; ++i) {
    const double noise = (i % 5) * 0.7;
    rows.push_back({noise, 3.0 - noise, noise * noise, 1.0 + 0.01 * (i % 5)});
    labels.push_back(i < 5 ? 0u : 1u);
    if (i >= 5) rows.back()[3] += 10.0;
  }
  EXPECT_EQ(select_feature(rows, labels, 0b11, 4), 3u);

  std::vector<std::vector<double>> copies;
  for (const auto& r : rows) copies.push_back({r[0], r[0], r[0]});
  EXPECT_EQ(select_feature(copies, labels, 0b11, 3), 0u);
  EXPECT_THROW(select_feature(rows, labels, 0b01, 4), InvalidArgument);
}

TEST(SelectFeature, PairFormulaUsesOnlyNamedClasses) {
  std::vector<std::vector<double>> rows{{1}, {2}, {4}, {6}, {7}, {20}, {40}};
  std::vector<std::size_t> labels{0, 0, 1, 1, 1, 2, 2};
  const std::vector<std::vector<double>> g{{1, 2}, {4, 6, 7}};
  const double expected = oracle::sd({1, 2}) * oracle::sd({4, 6, 7}) / oracle::sd({1, 2, 4, 6, 7});
  EXPECT_NEAR(fsv(g), expected, 1e-15);
  EXPECT_EQ(select_feature(rows, labels, 0b011, 1), 0u);
}

TEST(SelectFeature, InvariantUnderPerFeatureTranslation) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < 30; ++i) {
      const auto c = i % 3;
      rows.push_back({z(gen) + c, 2 * z(gen) + 3.0 * c, z(gen) * 0.5 + c * 0.2, z(gen)});
      labels.push_back(c);
    }
    const auto chosen = select_feature(rows, labels, 0b111, 4);
    auto moved = rows;
    for (auto& r : moved)
      for (std::size_t j = 0; j < 4; ++j) r[j] += 10.0 * static_cast<double>(j + 1);
    EXPECT_EQ(select_feature(moved, labels, 0b111, 4), chosen);
  }
}

TEST(DistanceMass, Examples) {
  const DistanceModel model{0, {1.0, 2.0, 3.0}};
  const auto m = distance_mass(2.4, model, kClasses);
  EXPECT_NEAR(m.mass_of(0b010), 0.8, 1e-15);
  EXPECT_NEAR(m.theta_mass(), 0.2, 1e-15);
  EXPECT_NEAR(distance_mass(1.0, model, kClasses).mass_of(0b001), 0.8, 1e-15);
  const DistanceModel tie{0, {1.0, 3.0, 9.0}};
  EXPECT_NEAR(distance_mass(2.0, tie, kClasses).mass_of(0b001), 0.8, 1e-15);
  EXPECT_THROW(distance_mass(2.0, DistanceModel{0, {1.0, 2.0}}, kClasses), InvalidArgument);
}

TEST(DistanceMass, TranslationInvariant) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < 1000; ++t) {
    DistanceModel model{0, {u(gen), u(gen), u(gen)}};
    const double v = u(gen), shift = u(gen) * 4;
    const auto before = nearest_mean(v, model.means);
    for (auto& m : model.means) m += shift;
    const auto after = nearest_mean(v + shift, model.means);
    // ties are measure-zero for continuous draws; rounding can only matter at near-ties
    if (before != after) {
      const double a = std::abs(v - (model.means[before] - shift)), b = std::abs(v - (model.means[after] - shift));
      EXPECT_NEAR(a, b, 1e-12);
    }
  }
}

}  // namespace
}  // namespace dsad
