#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "fedforge/errors.hpp"
#include "fedforge/logreg/callbacks.hpp"
#include "fedforge/logreg/dataset.hpp"
#include "fedforge/logreg/model.hpp"
#include "fedforge/logreg/split.hpp"
#include "fedforge/rng.hpp"
#include "test_support.hpp"

namespace fedforge::logreg {
namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_sna_csv(in, "t.csv");
}

Bytes model_bytes(double b0, double b1) { return serialize_model({b0, b1}); }

// --- dataset ---------------------------------------------------------------

TEST(DatasetTest, TwoRowsInFileOrder) {
  auto ds = parse(
      "User ID,Gender,Age,EstimatedSalary,Purchased\n"
      "15624510,Male,19,19000,0\n"
      "15810944,Male,35,20000,1\n");
  ASSERT_EQ(ds.rows.size(), 2u);
  EXPECT_EQ(ds.rows[0], (Sample{19, 0}));
  EXPECT_EQ(ds.rows[1], (Sample{35, 1}));
}

TEST(DatasetTest, ColumnOrderAndBlankLines) {
  auto ds = parse("Purchased,Age\n1,40.5\n\n0,22\n");
  ASSERT_EQ(ds.rows.size(), 2u);
  EXPECT_EQ(ds.rows[0], (Sample{40.5, 1}));
}

TEST(DatasetTest, BadLabelCitesLine) {
  try {
    parse("Age,Purchased\n20,0\n21,1\n22,0\n23,2\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":5:"), std::string::npos) << e.what();
  }
}

TEST(DatasetTest, Malformed) {
  EXPECT_THROW(parse("Age,Gender\n20,Male\n"), ParseError);
  EXPECT_THROW(parse("Age,Purchased\nabc,0\n"), ParseError);
  EXPECT_THROW(parse("Age,Purchased\n20\n"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(load_sna_csv("/nonexistent/file.csv"), ParseError);
}

TEST(DatasetTest, SyntheticDeterministic) {
  auto a = gen_synthetic(1, 400, 0, 2);
  auto b = gen_synthetic(1, 400, 0, 2);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_NE(a.rows, gen_synthetic(2, 400, 0, 2).rows);
}

TEST(DatasetTest, SyntheticPositiveFraction) {
  for (double b0 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    auto ds = gen_synthetic(1, 400, b0, 2);
    auto y = ds.labels();
    double frac = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    EXPECT_GE(frac, 0.2) << b0;
    EXPECT_LE(frac, 0.8) << b0;
  }
}

TEST(DatasetTest, SyntheticSteepSlopeIsThreshold) {
  auto ds = gen_synthetic(3, 400, 0, 1e6);
  auto ages = ds.ages();
  double mean = std::accumulate(ages.begin(), ages.end(), 0.0) / ages.size();
  int agree = 0;
  for (const auto& r : ds.rows) agree += (r.age > mean) == (r.purchased == 1);
  EXPECT_GE(agree, 399);
}

TEST(DatasetTest, WriteThenParseRoundTrip) {
  auto ds = gen_synthetic(11, 50, 0.3, 1.5);
  std::ostringstream out;
  write_sna_csv(ds, out, 11);
  auto back = parse(out.str());
  EXPECT_EQ(back.rows, ds.rows);
}

TEST(DatasetTest, BundledSurrogateMatchesGenerator) {
  auto file = load_sna_csv(testing::surrogate_csv());
  EXPECT_EQ(file.rows.size(), 400u);
  EXPECT_EQ(file.rows, gen_synthetic(1, 400, 0, 2).rows);
}

// --- split / partition -----------------------------------------------------

TEST(SplitTest, FirstSplitMixOutput) {
  EXPECT_EQ(SplitMix64(42).next(), 0xbdd732262feb6e95ull);
}

TEST(SplitTest, TenRowsSeed42MatchesReplay) {
  // Replayed by an independent implementation of the shuffle.
  EXPECT_EQ(shuffled_indices(10, 42),
            (std::vector<std::size_t>{0, 9, 5, 8, 6, 4, 7, 2, 1, 3}));
  Dataset ds;
  for (int i = 0; i < 10; ++i) ds.rows.push_back({static_cast<double>(i), i % 2});
  auto s = split(ds, 0.2, 42);
  EXPECT_EQ(s.test_rows, (std::vector<std::size_t>{0, 9}));
  EXPECT_EQ(s.x_test, (std::vector<double>{0, 9}));
  EXPECT_EQ(s.y_test, (std::vector<int>{0, 1}));
  EXPECT_EQ(s.train_rows.size(), 8u);
}

TEST(SplitTest, FourHundredRows) {
  auto s = split(gen_synthetic(1, 400, 0, 2), 0.2, 42);
  EXPECT_EQ(s.x_train.size(), 320u);
  EXPECT_EQ(s.x_test.size(), 80u);
  std::vector<std::size_t> all(s.train_rows);
  all.insert(all.end(), s.test_rows.begin(), s.test_rows.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
}

TEST(SplitTest, DeterministicPerSeed) {
  auto ds = gen_synthetic(1, 100, 0, 2);
  EXPECT_EQ(split(ds, 0.2, 5).test_rows, split(ds, 0.2, 5).test_rows);
  EXPECT_NE(split(ds, 0.2, 5).test_rows, split(ds, 0.2, 6).test_rows);
}

TEST(SplitTest, EmptySideRejected) {
  auto ds = gen_synthetic(1, 10, 0, 2);
  EXPECT_THROW(split(ds, 0.0, 1), SplitError);
  EXPECT_THROW(split(ds, 1.0, 1), SplitError);
  Dataset one{"one", {{30, 1}}};
  EXPECT_THROW(split(one, 0.2, 1), SplitError);
}

TEST(PartitionTest, Sizes) {
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
  std::vector<int> y{1, 0, 1, 0, 1, 0, 1};
  auto parts = partition_horizontal(x, y, 3);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0].x.size(), 3u);
  EXPECT_EQ(parts[1].x.size(), 2u);
  EXPECT_EQ(parts[2].x.size(), 2u);
  std::vector<double> cat;
  std::vector<int> caty;
  for (auto& p : parts) {
    cat.insert(cat.end(), p.x.begin(), p.x.end());
    caty.insert(caty.end(), p.y.begin(), p.y.end());
  }
  EXPECT_EQ(cat, x);
  EXPECT_EQ(caty, y);

  std::vector<double> x320(320);
  std::vector<int> y320(320);
  auto halves = partition_horizontal(x320, y320, 2);
  EXPECT_EQ(halves[0].x.size(), 160u);
  EXPECT_EQ(halves[1].x.size(), 160u);
}

TEST(PartitionTest, SizesPropertyAndIdentity) {
  for (std::size_t n = 1; n <= 40; ++n) {
    std::vector<double> x(n);
    std::iota(x.begin(), x.end(), 0.0);
    std::vector<int> y(n, 1);
    EXPECT_EQ(partition_horizontal(x, y, 1)[0], (Partition{x, y}));
    for (std::size_t k = 1; k <= n; ++k) {
      auto parts = partition_horizontal(x, y, k);
      ASSERT_EQ(parts.size(), k);
      for (std::size_t i = 0; i + 1 < k; ++i) {
        EXPECT_GE(parts[i].x.size(), parts[i + 1].x.size());
        EXPECT_LE(parts[i].x.size() - parts.back().x.size(), 1u);
      }
    }
  }
}

TEST(PartitionTest, Errors) {
  std::vector<double> x{1, 2};
  std::vector<int> y{0, 1};
  EXPECT_THROW(partition_horizontal(x, y, 3), PartitionError);
  EXPECT_THROW(partition_horizontal(x, y, 0), PartitionError);
  std::vector<int> short_y{0};
  EXPECT_THROW(partition_horizontal(x, short_y, 1), PartitionError);
}

// --- model -----------------------------------------------------------------

TEST(NormalizeTest, Examples) {
  EXPECT_EQ(normalize(std::vector<double>{1, 2, 3}), (std::vector<double>{-1, 0, 1}));
  EXPECT_EQ(normalize(std::vector<double>{5, 5, 5}), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(normalize(std::vector<double>{42}), (std::vector<double>{0}));
  EXPECT_THROW(normalize(std::vector<double>{}), DomainError);
}

TEST(NormalizeTest, CenteredAndUnitSpread) {
  SplitMix64 rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> xs(2 + rng.next_below(100));
    for (auto& x : xs) x = 18 + 42 * rng.next_double();
    auto z = normalize(xs);
    double mean = std::accumulate(z.begin(), z.end(), 0.0) / z.size();
    EXPECT_NEAR(mean, 0.0, 1e-12);
    double ss = 0;
    for (double v : z) ss += v * v;
    EXPECT_NEAR(ss / (z.size() - 1), 1.0, 1e-12);
  }
}

TEST(PredictTest, Examples) {
  EXPECT_EQ(predict(std::vector<double>{0.5}, {1, 2})[0], 0.8807970779778823);
  EXPECT_EQ(predict(std::vector<double>{0}, {600, 0})[0], 1.0);
  EXPECT_EQ(predict(std::vector<double>{0}, {-600, 0})[0], 1.0 / (1.0 + std::exp(500.0)));
  for (double p : predict(std::vector<double>{-3, 0, 7}, {0, 0})) EXPECT_EQ(p, 0.5);
}

TEST(GradientTest, Examples) {
  auto g = gradient(std::vector<double>{0}, std::vector<int>{1}, std::vector<double>{0.5});
  EXPECT_EQ(g.d_b0, -0.25);
  EXPECT_EQ(g.d_b1, 0.0);
  auto z = gradient(std::vector<double>{1, 2}, std::vector<int>{1, 0},
                    std::vector<double>{1.0, 0.0});
  EXPECT_EQ(z.d_b0, 0.0);
  EXPECT_EQ(z.d_b1, 0.0);
  EXPECT_THROW(gradient(std::vector<double>{1}, std::vector<int>{1, 0},
                        std::vector<double>{0.5}),
               DomainError);
}

double sse(const std::vector<double>& x, const std::vector<int>& y, double b0, double b1) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = 1.0 / (1.0 + std::exp(-(b0 + b1 * x[i])));
    s += (y[i] - p) * (y[i] - p);
  }
  return s;
}

TEST(GradientTest, MatchesFiniteDifferences) {
  constexpr double h = 1e-6;
  SplitMix64 rng(2024);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(3 + rng.next_below(10));
    std::vector<int> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = 4 * rng.next_double() - 2;
      y[i] = static_cast<int>(rng.next_below(2));
    }
    ModelVector m{2 * rng.next_double() - 1, 2 * rng.next_double() - 1};
    auto g = gradient(x, y, predict(x, m));
    double fd0 = (sse(x, y, m.b0 + h, m.b1) - sse(x, y, m.b0 - h, m.b1)) / (2 * h);
    double fd1 = (sse(x, y, m.b0, m.b1 + h) - sse(x, y, m.b0, m.b1 - h)) / (2 * h);
    EXPECT_LT(std::abs(g.d_b0 - fd0) / std::abs(fd0), 1e-5) << t;
    EXPECT_LT(std::abs(g.d_b1 - fd1) / std::abs(fd1), 1e-5) << t;
  }
}

TEST(TrainTest, ZeroEpochsReturnsInit) {
  std::vector<double> x{1, 2, 3};
  std::vector<int> y{0, 1, 1};
  EXPECT_EQ(train_logreg(x, y, {0.001, 0}, {0.7, -0.3}), (ModelVector{0.7, -0.3}));
}

TEST(TrainTest, SingleSampleOneEpoch) {
  auto m = train_logreg(std::vector<double>{37}, std::vector<int>{1}, {0.001, 1});
  EXPECT_EQ(m.b0, 0.00025);
  EXPECT_EQ(m.b1, 0.0);
}

TEST(TrainTest, SyntheticAccuracy) {
  auto s = split(gen_synthetic(1, 400, 0, 2), 0.2, 42);
  auto m = train_logreg(s.x_train, s.y_train);
  EXPECT_GT(evaluate(s.x_test, s.y_test, m).accuracy, 0.75);
}

TEST(TrainTest, DivergenceDetected) {
  // Eight positives at p = 0.5 give d_b0 = -2, so one step overflows.
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> y(8, 1);
  EXPECT_THROW(train_logreg(x, y, {std::numeric_limits<double>::max(), 3}), DivergenceError);
  EXPECT_THROW(train_logreg(x, y, {0.001, -1}), DomainError);
  EXPECT_THROW(train_logreg(x, y, {std::nan(""), 3}), DomainError);
}

TEST(EvaluateTest, TieIsClassOne) {
  auto r = evaluate(std::vector<double>{1, 2, 3}, std::vector<int>{1, 1, 1}, {0, 0});
  EXPECT_EQ(r.y_pred, (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_THROW(evaluate(std::vector<double>{}, std::vector<int>{}, {0, 0}), DomainError);
}

TEST(EvaluateTest, PerfectAndInverted) {
  std::vector<double> x{1, 2, 3, 4};
  std::vector<int> y{0, 0, 1, 1};
  EXPECT_EQ(evaluate(x, y, {0, 10}).accuracy, 1.0);
  EXPECT_EQ(evaluate(x, y, {0, -10}).accuracy, 0.0);
}

TEST(SerializeTest, ZerosAndRoundTrip) {
  EXPECT_EQ(serialize_model({0, 0}), Bytes(16, 0));
  EXPECT_EQ(serialize_model({1.0, -2.0}),
            (Bytes{0x3f, 0xf0, 0, 0, 0, 0, 0, 0, 0xc0, 0, 0, 0, 0, 0, 0, 0}));
  SplitMix64 rng(77);
  for (int i = 0; i < 1000; ++i) {
    double a, b;
    do a = std::bit_cast<double>(rng.next()); while (!std::isfinite(a));
    do b = std::bit_cast<double>(rng.next()); while (!std::isfinite(b));
    auto back = deserialize_model(serialize_model({a, b}));
    ASSERT_EQ(std::bit_cast<std::uint64_t>(back.b0), std::bit_cast<std::uint64_t>(a));
    ASSERT_EQ(std::bit_cast<std::uint64_t>(back.b1), std::bit_cast<std::uint64_t>(b));
  }
  EXPECT_THROW(deserialize_model(Bytes(15)), DecodeError);
  EXPECT_THROW(deserialize_model(Bytes(17)), DecodeError);
}

// --- callbacks -------------------------------------------------------------

TEST(CallbackTest, CentServerMean) {
  std::vector<Bytes> msgs{model_bytes(1, 2), model_bytes(3, 4)};
  EXPECT_EQ(deserialize_model(cb_cent_server(std::nullopt, msgs)), (ModelVector{2, 3}));
  std::vector<Bytes> one{model_bytes(0.1, 0.7)};
  EXPECT_EQ(deserialize_model(cb_cent_server(std::nullopt, one)), (ModelVector{0.1, 0.7}));
  EXPECT_THROW(cb_cent_server(std::nullopt, std::vector<Bytes>{}), CallbackError);
}

TEST(CallbackTest, CentServerMatchesBruteForceMean) {
  SplitMix64 rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<Bytes> msgs;
    double s0 = 0, s1 = 0;
    for (int i = 0; i < 5; ++i) {
      double a = rng.next_double() * 10 - 5, b = rng.next_double() * 10 - 5;
      s0 += a;
      s1 += b;
      msgs.push_back(model_bytes(a, b));
    }
    auto m = deserialize_model(cb_cent_server(std::nullopt, msgs));
    EXPECT_EQ(m.b0, s0 / 5);
    EXPECT_EQ(m.b1, s1 / 5);
  }
}

TEST(CallbackTest, CentClient) {
  auto s = split(gen_synthetic(1, 400, 0, 2), 0.2, 42);
  auto parts = partition_horizontal(s.x_train, s.y_train, 2);
  PrivateData pd = parts[0];
  Bytes zero = model_bytes(0, 0);
  auto out = cb_cent_client(zero, pd, zero);
  EXPECT_EQ(deserialize_model(out), train_logreg(parts[0].x, parts[0].y));
  EXPECT_EQ(cb_cent_client(zero, pd, zero), out);
  EXPECT_EQ(cb_cent_client(zero, pd, model_bytes(0.3, 0.4), {0.001, 0}), model_bytes(0.3, 0.4));
  EXPECT_THROW(cb_cent_client(zero, std::nullopt, zero), CallbackError);
  EXPECT_THROW(cb_cent_client(zero, pd, Bytes(3)), CallbackError);
}

TEST(CallbackTest, DecentServerAppendsOwnModel) {
  auto s = split(gen_synthetic(1, 400, 0, 2), 0.2, 42);
  auto parts = partition_horizontal(s.x_train, s.y_train, 2);
  auto own = train_logreg(parts[1].x, parts[1].y);
  // Own update only: mean of identical values.
  std::vector<Bytes> self{serialize_model(own)};
  EXPECT_EQ(deserialize_model(cb_decent_server(parts[1], self)), own);

  auto peer = train_logreg(parts[0].x, parts[0].y);
  std::vector<Bytes> msgs{serialize_model(peer)};
  auto m = deserialize_model(cb_decent_server(parts[1], msgs));
  EXPECT_EQ(m.b0, (0.0 + peer.b0 + own.b0) / 2);
  EXPECT_EQ(m.b1, (0.0 + peer.b1 + own.b1) / 2);
  EXPECT_THROW(cb_decent_server(std::nullopt, msgs), CallbackError);
}

// Summation order matters in floating point; the engine's sort by source id
// is what makes a run reproducible.
TEST(CallbackTest, MeanIsOrderSensitive) {
  std::vector<Bytes> a{model_bytes(1e16, 0), model_bytes(1, 0), model_bytes(-1e16, 0)};
  std::vector<Bytes> b{model_bytes(1e16, 0), model_bytes(-1e16, 0), model_bytes(1, 0)};
  EXPECT_NE(cb_cent_server(std::nullopt, a), cb_cent_server(std::nullopt, b));
  EXPECT_EQ(cb_cent_server(std::nullopt, a), cb_cent_server(std::nullopt, a));
}

}  // namespace
}  // namespace fedforge::logreg
