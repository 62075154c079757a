#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "basketflex/basket.hpp"
#include "basketflex/error.hpp"
#include "error_helpers.hpp"
#include "generators.hpp"

using namespace basketflex;
using bftest::code_of;
using bftest::Rng;

namespace {

const Month kJan(2020, 1);

ItemId id(const char* s) { return ItemId(s); }

WeightVector abc(double a, double b, double c) { return WeightVector::normalize({{id("A"), a}, {id("B"), b}, {id("C"), c}}); }

ExpenditureRelativeVector rel(double a, double b, double c, Month m = kJan) {
  return {m, {{id("A"), a}, {id("B"), b}, {id("C"), c}}};
}

PriceSet prices_abc(double a, double b, double c, Month m = kJan) {
  PriceSet p;
  p.emplace(id("A"), PriceRelativeSeries(id("A"), {{m, a}}));
  p.emplace(id("B"), PriceRelativeSeries(id("B"), {{m, b}}));
  p.emplace(id("C"), PriceRelativeSeries(id("C"), {{m, c}}));
  return p;
}

double sum_shares(const WeightVector& w) {
  double s = 0;
  for (const auto& [k, v] : w.shares()) s += v;
  return s;
}

}  // namespace

TEST(WeightVectorFromShares, KeepsSharesExactly) {
  const std::map<ItemId, double> shares{{id("A"), 0.1 + 0.2}, {id("B"), 1.0 - (0.1 + 0.2)}};
  const auto w = WeightVector::from_shares(shares);
  EXPECT_EQ(w.shares(), shares);
  EXPECT_EQ(code_of([] { WeightVector::from_shares({{id("A"), 0.5}, {id("B"), 0.4}}); }),
            ErrorCode::WeightSumOutOfRange);
  EXPECT_EQ(code_of([] { WeightVector::from_shares({{id("A"), 1.5}, {id("B"), -0.5}}); }),
            ErrorCode::NegativeWeight);
}

// --- normalize_weights ------------------------------------------------------

TEST(NormalizeWeights, SymmetricPair) {
  auto w = normalize_weights({{id("A"), 2}, {id("B"), 2}});
  EXPECT_DOUBLE_EQ(w.at(id("A")), 0.5);
  EXPECT_DOUBLE_EQ(w.at(id("B")), 0.5);
  EXPECT_DOUBLE_EQ(w.raw_sum(), 4.0);
}

TEST(NormalizeWeights, SingleItem) {
  auto w = normalize_weights({{id("A"), 1}});
  EXPECT_DOUBLE_EQ(w.at(id("A")), 1.0);
}

TEST(NormalizeWeights, HandArithmetic) {
  auto w = normalize_weights({{id("A"), 0.4}, {id("B"), 0.25}});
  EXPECT_NEAR(w.at(id("A")), 0.6154, 1e-4);
  EXPECT_NEAR(w.at(id("B")), 0.3846, 1e-4);
  EXPECT_NEAR(sum_shares(w), 1.0, 1e-12);
}

TEST(NormalizeWeights, Errors) {
  EXPECT_EQ(code_of([] { normalize_weights({}); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([] { normalize_weights({{id("A"), -0.1}, {id("B"), 1}}); }), ErrorCode::NegativeWeight);
  EXPECT_EQ(code_of([] { normalize_weights({{id("A"), 0}, {id("B"), 0}}); }), ErrorCode::ZeroTotal);
  EXPECT_EQ(code_of([] { normalize_weights({{id("A"), NAN}}); }), ErrorCode::NonFiniteValue);
  EXPECT_EQ(code_of([] { ItemId(""); }), ErrorCode::EmptyIdentifier);
}

TEST(NormalizeWeights, NegativeWeightNamesItem) {
  try {
    normalize_weights({{id("A"), 1}, {id("bad"), -1}});
    FAIL();
  } catch (const Error& e) {
    ASSERT_EQ(e.subjects().size(), 1u);
    EXPECT_EQ(e.subjects()[0], "bad");
  }
}

TEST(NormalizeWeights, ZeroEntryKeptAsZeroShare) {
  auto w = normalize_weights({{id("A"), 0}, {id("B"), 3}});
  EXPECT_EQ(w.at(id("A")), 0.0);
  EXPECT_EQ(w.at(id("B")), 1.0);
}

TEST(ItemIdTest, IdentityIgnoresLabel) {
  EXPECT_EQ(ItemId("x", "one"), ItemId("x", "two"));
  EXPECT_EQ(ItemId("x").label(), "x");
  EXPECT_EQ(ItemId("x", "Ex").label(), "Ex");
  EXPECT_NE(ItemId("x"), ItemId("X"));
}

// --- adjusted_weights -------------------------------------------------------

TEST(AdjustedWeights, IdentityWhenExpenditureUnchanged) {
  auto out = adjusted_weights(abc(0.5, 0.3, 0.2), rel(1, 1, 1));
  EXPECT_NEAR(out.at(id("A")), 0.5, 1e-15);
  EXPECT_NEAR(out.at(id("B")), 0.3, 1e-15);
  EXPECT_NEAR(out.at(id("C")), 0.2, 1e-15);
  EXPECT_EQ(out.period(), kJan);
}

TEST(AdjustedWeights, WorkedExample) {
  // Denominator 0.5*1 + 0.3*0.5 + 0.2*1.5 = 0.95.
  auto out = adjusted_weights(abc(0.5, 0.3, 0.2), rel(1.0, 0.5, 1.5));
  EXPECT_NEAR(out.at(id("A")), 0.5263, 1e-4);
  EXPECT_NEAR(out.at(id("B")), 0.1579, 1e-4);
  EXPECT_NEAR(out.at(id("C")), 0.3158, 1e-4);
  EXPECT_NEAR(out.at(id("A")), 0.5 / 0.95, 1e-15);
  EXPECT_NEAR(out.at(id("B")), 0.15 / 0.95, 1e-15);
  EXPECT_NEAR(out.at(id("C")), 0.3 / 0.95, 1e-15);
}

TEST(AdjustedWeights, DegreeZeroHomogeneity) {
  auto a = adjusted_weights(abc(0.5, 0.3, 0.2), rel(2, 1, 3));
  auto b = adjusted_weights(abc(0.5, 0.3, 0.2), rel(4, 2, 6));
  EXPECT_LT(bftest::max_abs_diff(a, b), 1e-15);
}

TEST(AdjustedWeights, Errors) {
  EXPECT_EQ(code_of([] { adjusted_weights(abc(0.5, 0.3, 0.2), rel(1, 0, 1)); }), ErrorCode::NonPositiveRelative);
  EXPECT_EQ(code_of([] { adjusted_weights(abc(0.5, 0.3, 0.2), rel(1, -1, 1)); }), ErrorCode::NonPositiveRelative);
  EXPECT_EQ(code_of([] {
              adjusted_weights(abc(0.5, 0.3, 0.2), {kJan, {{id("A"), 1.0}, {id("B"), 1.0}}});
            }),
            ErrorCode::ItemSetMismatch);
  EXPECT_EQ(code_of([] {
              auto r = rel(1, 1, 1);
              r.relatives[id("D")] = 1.0;
              adjusted_weights(abc(0.5, 0.3, 0.2), r);
            }),
            ErrorCode::ItemSetMismatch);
  EXPECT_EQ(code_of([] { adjusted_weights(abc(0.5, 0.3, 0.2), rel(1, INFINITY, 1)); }), ErrorCode::NonPositiveRelative);
}

TEST(AdjustedWeights, PropertySumAndNonNegativity) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    auto w = bftest::random_weights(rng, bftest::uniform_int(rng, 1, 30));
    auto out = adjusted_weights(w, bftest::random_relatives(rng, w, kJan, 1e-3, 1e3));
    EXPECT_NEAR(sum_shares(out), 1.0, 1e-12);
    for (const auto& [k, v] : out.shares()) EXPECT_GE(v, 0.0);
  }
}

TEST(AdjustedWeights, PropertyConstantRelativesAreIdentity) {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    auto w = bftest::random_weights(rng, bftest::uniform_int(rng, 1, 25));
    const double c = bftest::uniform(rng, 1e-3, 1e3);
    EXPECT_LT(bftest::max_abs_diff(adjusted_weights(w, bftest::constant_relatives(w, kJan, c)), w), 1e-12);
  }
}

TEST(AdjustedWeights, PropertyHomogeneity) {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    auto w = bftest::random_weights(rng, bftest::uniform_int(rng, 2, 25));
    auto r = bftest::random_relatives(rng, w, kJan);
    auto scaled = r;
    const double lambda = bftest::uniform(rng, 1e-3, 1e3);
    for (auto& [k, v] : scaled.relatives) v *= lambda;
    EXPECT_LT(bftest::max_abs_diff(adjusted_weights(w, r), adjusted_weights(w, scaled)), 1e-12);
  }
}

TEST(AdjustedWeights, PropertyMonotonicity) {
  Rng rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    auto w = bftest::random_weights(rng, bftest::uniform_int(rng, 2, 25));
    auto r = bftest::random_relatives(rng, w, kJan);
    const auto items = w.items();
    auto it = items.begin();
    std::advance(it, bftest::uniform_int(rng, 0, static_cast<int>(items.size()) - 1));
    auto bumped = r;
    bumped.relatives[*it] *= bftest::uniform(rng, 1.01, 3.0);
    auto before = adjusted_weights(w, r);
    auto after = adjusted_weights(w, bumped);
    EXPECT_GT(after.at(*it), before.at(*it));
    for (const auto& other : items) {
      if (other != *it) {
        EXPECT_LT(after.at(other), before.at(other));
      }
    }
  }
}

// --- monthly_inflation ------------------------------------------------------

TEST(MonthlyInflation, OfficialExample) {
  auto p = monthly_inflation(abc(0.5, 0.3, 0.2), prices_abc(1.01, 0.98, 1.02), kJan);
  EXPECT_NEAR(p.monthly_pct, 0.30, 1e-12);
  EXPECT_NEAR(p.contributions.at(id("A")), 0.50, 1e-12);
  EXPECT_NEAR(p.contributions.at(id("B")), -0.60, 1e-12);
  EXPECT_NEAR(p.contributions.at(id("C")), 0.40, 1e-12);
  EXPECT_FALSE(p.annual_pct.has_value());
  EXPECT_EQ(p.period, kJan);
}

TEST(MonthlyInflation, AdjustedExample) {
  auto p = monthly_inflation(abc(0.5263, 0.1579, 0.3158), prices_abc(1.01, 0.98, 1.02), kJan);
  EXPECT_NEAR(p.monthly_pct, 0.8421, 1e-3);
  // Unrounded weights: (0.5*1 - 0.15*2 + 0.3*2) / 0.95.
  auto exact = monthly_inflation(adjusted_weights(abc(0.5, 0.3, 0.2), rel(1.0, 0.5, 1.5)),
                                 prices_abc(1.01, 0.98, 1.02), kJan);
  EXPECT_NEAR(exact.monthly_pct, 0.8 / 0.95, 1e-12);
}

TEST(MonthlyInflation, NoPriceChange) {
  Rng rng(21);
  auto w = bftest::random_weights(rng, 7);
  PriceSet flat;
  for (const auto& item : w.items()) flat.emplace(item, PriceRelativeSeries(item, {{kJan, 1.0}}));
  auto p = monthly_inflation(w, flat, kJan);
  EXPECT_EQ(p.monthly_pct, 0.0);
  for (const auto& [k, v] : p.contributions) EXPECT_EQ(v, 0.0);
}

TEST(MonthlyInflation, Errors) {
  EXPECT_EQ(code_of([] { monthly_inflation(abc(0.5, 0.3, 0.2), prices_abc(1, 1, 1), kJan + 1); }),
            ErrorCode::MissingPriceRelative);
  EXPECT_EQ(code_of([] {
              auto p = prices_abc(1, 1, 1);
              p.erase(id("C"));
              monthly_inflation(abc(0.5, 0.3, 0.2), p, kJan);
            }),
            ErrorCode::MissingPriceRelative);
  EXPECT_EQ(code_of([] {
              auto p = prices_abc(1, 1, 1);
              p.emplace(id("D"), PriceRelativeSeries(id("D"), {{kJan, 1.1}}));
              monthly_inflation(abc(0.5, 0.3, 0.2), p, kJan);
            }),
            ErrorCode::ItemSetMismatch);
}

TEST(MonthlyInflation, PropertyAdditivityAndConvexity) {
  Rng rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    auto w = bftest::random_weights(rng, bftest::uniform_int(rng, 1, 25));
    auto prices = bftest::random_prices(rng, w.items(), kJan, 1, 0.8, 1.25);
    auto p = monthly_inflation(w, prices, kJan);
    double sum = 0, lo = INFINITY, hi = -INFINITY;
    for (const auto& [k, v] : p.contributions) sum += v;
    for (const auto& [k, s] : prices) {
      lo = std::min(lo, (*s.at(kJan) - 1) * 100);
      hi = std::max(hi, (*s.at(kJan) - 1) * 100);
    }
    EXPECT_NEAR(sum, p.monthly_pct, 1e-9);
    EXPECT_GE(p.monthly_pct, lo - 1e-12);
    EXPECT_LE(p.monthly_pct, hi + 1e-12);
  }
}

// --- PriceRelativeSeries ----------------------------------------------------

TEST(PriceRelativeSeriesTest, Validation) {
  EXPECT_EQ(code_of([] { PriceRelativeSeries(id("A"), {}); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([] { PriceRelativeSeries(id("A"), {{kJan, 1.0}, {kJan + 2, 1.0}}); }), ErrorCode::GapInSeries);
  EXPECT_EQ(code_of([] { PriceRelativeSeries(id("A"), {{kJan + 1, 1.0}, {kJan, 1.0}}); }), ErrorCode::GapInSeries);
  EXPECT_EQ(code_of([] { PriceRelativeSeries(id("A"), {{kJan, 0.0}}); }), ErrorCode::NonPositivePrice);
  PriceRelativeSeries s(id("A"), {{kJan, 1.0}, {kJan + 1, 1.5}});
  EXPECT_EQ(s.first(), kJan);
  EXPECT_EQ(s.last(), kJan + 1);
  EXPECT_EQ(s.at(kJan + 1), 1.5);
  EXPECT_FALSE(s.at(kJan + 2).has_value());
}

// --- chain_annual -----------------------------------------------------------

namespace {
std::vector<InflationPoint> constant_monthly(int months, double pct) {
  std::vector<InflationPoint> out;
  for (int k = 0; k < months; ++k) out.push_back({kJan + k, pct, std::nullopt, {}});
  return out;
}
}  // namespace

TEST(ChainAnnual, ZeroInflation) {
  auto out = chain_annual(constant_monthly(12, 0.0));
  ASSERT_TRUE(out[11].annual_pct.has_value());
  EXPECT_EQ(*out[11].annual_pct, 0.0);
}

TEST(ChainAnnual, OnePercentMonthly) {
  auto out = chain_annual(constant_monthly(12, 1.0));
  for (int k = 0; k < 11; ++k) EXPECT_FALSE(out[static_cast<std::size_t>(k)].annual_pct.has_value());
  ASSERT_TRUE(out[11].annual_pct.has_value());
  EXPECT_NEAR(*out[11].annual_pct, 12.6825, 1e-3);
  EXPECT_NEAR(*out[11].annual_pct, (std::pow(1.01, 12) - 1) * 100, 1e-10);
}

TEST(ChainAnnual, ElevenMonthsOnly) {
  for (const auto& p : chain_annual(constant_monthly(11, 1.0))) EXPECT_FALSE(p.annual_pct.has_value());
}

TEST(ChainAnnual, TrailingWindow) {
  auto in = constant_monthly(13, 0.0);
  in[0].monthly_pct = 5.0;  // drops out of the window at month 13
  in[12].monthly_pct = 2.0;
  auto out = chain_annual(in);
  EXPECT_NEAR(*out[11].annual_pct, 5.0, 1e-12);
  EXPECT_NEAR(*out[12].annual_pct, 2.0, 1e-12);
}

TEST(ChainAnnual, GapIsRejected) {
  auto in = constant_monthly(3, 0.0);
  in[2].period = kJan + 5;
  EXPECT_EQ(code_of([&] { chain_annual(in); }), ErrorCode::GapInSeries);
}

TEST(ChainAnnual, PropertyClosedFormWithConstantInputs) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto w = bftest::random_weights(rng, bftest::uniform_int(rng, 1, 10));
    std::map<ItemId, double> item_rel;
    for (const auto& item : w.items()) item_rel[item] = bftest::uniform(rng, 0.95, 1.05);
    PriceSet prices;
    const int months = bftest::uniform_int(rng, 12, 30);
    for (const auto& [item, r] : item_rel) {
      std::vector<std::pair<Month, double>> pts;
      for (int k = 0; k < months; ++k) pts.emplace_back(kJan + k, r);
      prices.emplace(item, PriceRelativeSeries(item, pts));
    }
    std::vector<InflationPoint> monthly;
    for (int k = 0; k < months; ++k) monthly.push_back(monthly_inflation(w, prices, kJan + k));
    double m = 0;
    for (const auto& [item, r] : item_rel) m += w.at(item) * (r - 1);
    const double closed = (std::pow(1 + m, 12) - 1) * 100;
    for (const auto& p : chain_annual(monthly)) {
      if (p.period - kJan >= 11) {
        EXPECT_NEAR(*p.annual_pct, closed, 1e-10);
      }
    }
  }
}

TEST(FixedBaseAnnual, MatchesChainForConstantWeightsAndSingleItem) {
  std::vector<std::pair<Month, double>> pts;
  for (int k = 0; k < 12; ++k) pts.emplace_back(kJan + k, 1.01);
  PriceSet p;
  p.emplace(id("A"), PriceRelativeSeries(id("A"), pts));
  auto w = normalize_weights({{id("A"), 1}});
  auto v = fixed_base_annual_pct(w, p, kJan + 11);
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(*v, (std::pow(1.01, 12) - 1) * 100, 1e-10);
  EXPECT_FALSE(fixed_base_annual_pct(w, p, kJan + 10).has_value());
}

TEST(FixedBaseAnnual, RepricesBasketItemByItem) {
  // Item A doubles over the year, B flat: 0.5*2 + 0.5*1 - 1 = 50%.
  std::vector<std::pair<Month, double>> a, b;
  for (int k = 0; k < 12; ++k) {
    a.emplace_back(kJan + k, k == 0 ? 2.0 : 1.0);
    b.emplace_back(kJan + k, 1.0);
  }
  PriceSet p;
  p.emplace(id("A"), PriceRelativeSeries(id("A"), a));
  p.emplace(id("B"), PriceRelativeSeries(id("B"), b));
  auto v = fixed_base_annual_pct(normalize_weights({{id("A"), 1}, {id("B"), 1}}), p, kJan + 11);
  EXPECT_NEAR(*v, 50.0, 1e-12);
}

// --- exclude_items ----------------------------------------------------------

TEST(ExcludeItems, CoreIndexExample) {
  auto w = normalize_weights(
      {{id("food"), 0.2}, {id("fv"), 0.05}, {id("energy"), 0.1}, {id("housing"), 0.4}, {id("other"), 0.25}});
  auto core = exclude_items(w, {id("food"), id("fv"), id("energy")});
  EXPECT_EQ(core.size(), 2u);
  EXPECT_NEAR(core.at(id("housing")), 0.6154, 1e-4);
  EXPECT_NEAR(core.at(id("other")), 0.3846, 1e-4);
}

TEST(ExcludeItems, EmptyExclusionIsIdentity) {
  auto w = abc(0.5, 0.3, 0.2);
  EXPECT_LT(bftest::max_abs_diff(exclude_items(w, {}), w), 1e-15);
}

TEST(ExcludeItems, AllButOne) {
  auto core = exclude_items(abc(0.5, 0.3, 0.2), {id("A"), id("B")});
  EXPECT_EQ(core.at(id("C")), 1.0);
}

TEST(ExcludeItems, Errors) {
  EXPECT_EQ(code_of([] { exclude_items(abc(0.5, 0.3, 0.2), {id("Z")}); }), ErrorCode::UnknownItem);
  EXPECT_EQ(code_of([] { exclude_items(abc(0.5, 0.3, 0.2), {id("A"), id("B"), id("C")}); }),
            ErrorCode::AllItemsExcluded);
}

TEST(ExcludeItems, PropertyIdempotentAndCommuting) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = bftest::uniform_int(rng, 3, 20);
    auto w = bftest::random_weights(rng, n);
    auto ids = bftest::item_ids(n);
    std::set<ItemId> a, b;
    for (int k = 0; k < n - 1; ++k) {  // the last item always survives
      const double u = bftest::uniform(rng, 0, 1);
      if (u < 0.25) a.insert(ids[static_cast<std::size_t>(k)]);
      else if (u < 0.5) b.insert(ids[static_cast<std::size_t>(k)]);
    }
    auto once = exclude_items(w, a);
    EXPECT_LT(bftest::max_abs_diff(exclude_items(once, {}), once), 1e-15);
    // Excluding an already-excluded set again is a no-op on the item set.
    auto ab = exclude_items(exclude_items(w, a), b);
    auto ba = exclude_items(exclude_items(w, b), a);
    EXPECT_LT(bftest::max_abs_diff(ab, ba), 1e-12);
    std::set<ItemId> both = a;
    both.insert(b.begin(), b.end());
    EXPECT_LT(bftest::max_abs_diff(ab, exclude_items(w, both)), 1e-12);
    auto twice = exclude_items(exclude_items(w, both), {});
    EXPECT_LT(bftest::max_abs_diff(twice, exclude_items(w, both)), 1e-15);
  }
}

// --- weighting_bias ---------------------------------------------------------

TEST(WeightingBias, MonthlyExample) {
  std::vector<InflationPoint> off{{kJan, 0.30, std::nullopt, {}}};
  std::vector<InflationPoint> adj{{kJan, 0.8421, std::nullopt, {}}};
  auto b = weighting_bias(off, adj);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(b[0].monthly_pp, -0.5421, 1e-3);
  EXPECT_FALSE(b[0].annual_pp.has_value());
}

TEST(WeightingBias, IdenticalSeriesGiveZero) {
  auto s = chain_annual(constant_monthly(14, 0.7));
  for (const auto& b : weighting_bias(s, s)) {
    EXPECT_EQ(b.monthly_pp, 0.0);
    if (b.annual_pp) {
      EXPECT_EQ(*b.annual_pp, 0.0);
    }
  }
}

TEST(WeightingBias, AnnualUnderstatementIsNegative) {
  std::vector<InflationPoint> off{{kJan, 0.1, 1.0, {}}};
  std::vector<InflationPoint> adj{{kJan, 0.1, 1.2, {}}};
  auto b = weighting_bias(off, adj);
  ASSERT_TRUE(b[0].annual_pp.has_value());
  EXPECT_NEAR(*b[0].annual_pp, -0.2, 1e-12);
  EXPECT_LT(*b[0].annual_pp, 0.0);
}

TEST(WeightingBias, MisalignedSeries) {
  std::vector<InflationPoint> off{{kJan, 0.1, std::nullopt, {}}};
  std::vector<InflationPoint> adj{{kJan + 1, 0.1, std::nullopt, {}}};
  EXPECT_EQ(code_of([&] { weighting_bias(off, adj); }), ErrorCode::PeriodMismatch);
  std::vector<InflationPoint> longer{{kJan, 0.1, std::nullopt, {}}, {kJan + 1, 0.1, std::nullopt, {}}};
  EXPECT_EQ(code_of([&] { weighting_bias(off, longer); }), ErrorCode::PeriodMismatch);
}
