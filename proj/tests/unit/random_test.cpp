#include <levysde/core/parallel.hpp>
#include <levysde/core/random.hpp>
#include <levysde/core/stats.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace levysde;

TEST(CounterStream, SameKeySameSequence) {
    auto a = CounterStream::derive(42, StreamPurpose::Jumps, {7});
    auto b = CounterStream::derive(42, StreamPurpose::Jumps, {7});
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(CounterStream, PurposesAndPathsAreDistinct) {
    auto a = CounterStream::derive(42, StreamPurpose::Jumps, {7});
    auto b = CounterStream::derive(42, StreamPurpose::Brownian, {7});
    auto c = CounterStream::derive(42, StreamPurpose::Jumps, {8});
    auto d = CounterStream::derive(43, StreamPurpose::Jumps, {7});
    const auto x = a();
    EXPECT_NE(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
}

TEST(CounterStream, ChildDoesNotConsumeParent) {
    auto a = CounterStream::derive(1, StreamPurpose::Test);
    auto b = CounterStream::derive(1, StreamPurpose::Test);
    (void)a.child({3, 4})();
    EXPECT_EQ(a(), b());
}

TEST(CounterStream, UniformMoments) {
    auto s = CounterStream::derive(9, StreamPurpose::Test);
    std::vector<double> u(200000);
    for (auto& x : u) x = s.uniform();
    const auto e = estimate(u);
    EXPECT_NEAR(e.mean, 0.5, 4 * e.se);
    for (double x : u) {
        ASSERT_GE(x, 0.0);
        ASSERT_LT(x, 1.0);
    }
}

TEST(ParallelFor, VisitsEveryIndexOnceAndPropagatesLowestError) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, {4});
    for (int h : hits) EXPECT_EQ(h, 1);

    try {
        parallel_for(100, [](std::size_t i) {
            if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
        }, {3});
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "17");
    }
}

TEST(Estimate, MeanAndStandardError) {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    const auto e = estimate(xs);
    EXPECT_DOUBLE_EQ(e.mean, 2.5);
    // sum of squared deviations 5, sample variance 5/3
    EXPECT_DOUBLE_EQ(e.se, std::sqrt(5.0 / 3.0 / 4.0));
    EXPECT_EQ(estimate(std::vector<double>{}).mean, 0.0);
}
