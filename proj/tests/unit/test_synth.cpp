#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "expect_error.hpp"
#include "scca/matops.hpp"
#include "scca/rng.hpp"
#include "scca/synth.hpp"

using namespace scca;

TEST(Rng, FixedStream) {
    // mt19937_64 is fully specified: its 10000th output for the default seed is fixed by the standard
    std::mt19937_64 ref;
    ref.discard(9999);
    EXPECT_EQ(ref(), 9981545732273789042ULL);
    Rng a(42, RngStream::Data), b(42, RngStream::Data), c(42, RngStream::Test), d(43, RngStream::Data);
    const auto va = a.next();
    EXPECT_EQ(va, b.next());
    EXPECT_NE(va, c.next());
    EXPECT_NE(va, d.next());
}

TEST(Rng, Distributions) {
    Rng rng(1, RngStream::Test);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    EXPECT_NEAR(su / n, 0.5, 0.005);
    EXPECT_NEAR(sn / n, 0.0, 0.01);
    EXPECT_NEAR(sn2 / n, 1.0, 0.02);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
    for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, ShuffleIsPermutation) {
    Rng rng(3, RngStream::CvShuffle);
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[static_cast<std::size_t>(i)] = i;
    rng.shuffle(v);
    std::vector<int> s = v;
    std::sort(s.begin(), s.end());
    for (int i = 0; i < 50; ++i) EXPECT_EQ(s[static_cast<std::size_t>(i)], i);
    EXPECT_NE(v, s);
}

TEST(SynthNonlinear, Structure) {
    const TwoViews d = synth_nonlinear(200, 0.3, 5);
    ASSERT_EQ(d.x.rows(), 2);
    ASSERT_EQ(d.y.rows(), 2);
    ASSERT_EQ(d.x.cols(), 200);
    EXPECT_EQ(d.x.row(0), d.x.row(1));
    EXPECT_GE(d.x.minCoeff(), -2.0);
    EXPECT_LT(d.x.maxCoeff(), 2.0);
    // noiseless version is exact
    const TwoViews clean = synth_nonlinear(50, 0.0, 5);
    for (Index j = 0; j < 50; ++j) {
        const double z = clean.x(0, j);
        EXPECT_EQ(clean.y(0, j), z * z);
        EXPECT_EQ(clean.y(1, j), std::sin(std::numbers::pi * z));
    }
    // prefix stability: the first samples do not depend on n
    EXPECT_EQ(synth_nonlinear(100, 0.3, 5).x.leftCols(50), synth_nonlinear(50, 0.3, 5).x);
    EXPECT_EQ(synth_nonlinear(100, 0.3, 5).y, synth_nonlinear(100, 0.3, 5).y);
    EXPECT_NE(synth_nonlinear(100, 0.3, 6).y, synth_nonlinear(100, 0.3, 5).y);
    expect_error([] { synth_nonlinear(5); }, ErrorKind::InvalidInput);
    expect_error([] { synth_nonlinear(20, -1.0); }, ErrorKind::InvalidInput);
}

TEST(SynthTopics, SharedLoadingsAndRank) {
    const PairedTopics a = synth_paired_topics(40, 30, 25, 5, 0.0, 9);
    const PairedTopics b = synth_paired_topics(80, 30, 25, 5, 0.1, 9);
    EXPECT_EQ(a.loadings_x, b.loadings_x);
    EXPECT_EQ(a.loadings_y, b.loadings_y);
    ASSERT_EQ(a.x.rows(), 30);
    ASSERT_EQ(a.y.rows(), 25);
    ASSERT_EQ(a.pairing.size(), 40u);
    EXPECT_EQ(a.pairing[17], 17);
    // noiseless views are rank k
    EXPECT_EQ(thin_svd(a.x, 1e-9).numeric_rank, 5);
    EXPECT_EQ(thin_svd(a.y, 1e-9).numeric_rank, 5);
    expect_error([] { synth_paired_topics(40, 3, 25, 5, 0.1, 0); }, ErrorKind::InvalidInput);
}

TEST(LabelsToIndicator, SortedClasses) {
    const Matrix m = labels_to_indicator({3, -1, 3, 7});
    ASSERT_EQ(m.rows(), 3);
    ASSERT_EQ(m.cols(), 4);
    EXPECT_EQ(m(0, 1), 1.0);
    EXPECT_EQ(m(1, 0), 1.0);
    EXPECT_EQ(m(1, 2), 1.0);
    EXPECT_EQ(m(2, 3), 1.0);
    EXPECT_EQ(m.sum(), 4.0);
    expect_error([] { labels_to_indicator({2, 2, 2}); }, ErrorKind::InvalidInput);
}
