#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "shepp/rng.hpp"
#include "shepp/sequences.hpp"

using namespace shepp;

TEST(Generate, HarmonicCapped) {
    const auto v = generate(LengthSequence::harmonic(1.0, 0.99), 3);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_DOUBLE_EQ(v[0], 0.99);
    EXPECT_DOUBLE_EQ(v[1], 0.5);
    EXPECT_DOUBLE_EQ(v[2], 1.0 / 3.0);
}

TEST(Generate, Constant) {
    const auto v = generate(LengthSequence::constant(0.3, 0.99), 2);
    EXPECT_EQ(v, (std::vector<double>{0.3, 0.3}));
}

TEST(Generate, InverseSqrtCapBinds) {
    const auto v = generate(LengthSequence::inverse_sqrt(1.0, 0.49), 4);
    EXPECT_EQ(v, (std::vector<double>{0.49, 0.49, 0.49, 0.49}));
    EXPECT_DOUBLE_EQ(generate(LengthSequence::inverse_sqrt(1.0, 0.49), 5)[4], 1.0 / std::sqrt(5.0));
}

TEST(Generate, PowerDecay) {
    const auto v = generate(LengthSequence::power_decay(0.8, 2.0), 3);
    EXPECT_DOUBLE_EQ(v[0], 0.8);
    EXPECT_DOUBLE_EQ(v[1], 0.2);
    EXPECT_DOUBLE_EQ(v[2], 0.8 / 9.0);
}

TEST(Generate, ExplicitPrefixAndErrors) {
    const auto seq = LengthSequence::explicit_list({0.5, 0.4, 0.4, 0.1});
    EXPECT_EQ(generate(seq, 2), (std::vector<double>{0.5, 0.4}));
    EXPECT_THROW(generate(seq, 5), LengthError);
    EXPECT_THROW(generate(LengthSequence::explicit_list({0.2, 0.3}), 2), ValidationError);
    EXPECT_THROW(generate(LengthSequence::explicit_list({1.0, 0.3}), 2), ValidationError);
    EXPECT_THROW(generate(LengthSequence::explicit_list({0.3, 0.0}), 2), ValidationError);
}

TEST(Generate, BadParameters) {
    EXPECT_THROW(generate(LengthSequence::harmonic(0.0), 3), ValidationError);
    EXPECT_THROW(generate(LengthSequence::harmonic(1.0, 1.0), 3), ValidationError);
    EXPECT_THROW(generate(LengthSequence::power_decay(1.0, -0.5), 3), ValidationError);
    EXPECT_THROW(generate(LengthSequence::harmonic(1.0), 0), ValidationError);
}

TEST(Generate, PropertyNonincreasingInsideUnitInterval) {
    StreamRng rng(2024, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const auto fam = static_cast<Family>(rng.uniform_int(0, 3));
        LengthSequence seq{fam, rng.uniform(0.01, 5.0), rng.uniform(0.0, 3.0),
                           rng.uniform(0.01, 0.99), {}};
        const std::size_t n = rng.uniform_int(1, 300);
        const auto a = generate(seq, n);
        const auto b = generate(seq, n);
        ASSERT_EQ(a, b);
        for (std::size_t k = 0; k < n; ++k) {
            ASSERT_GT(a[k], 0.0);
            ASSERT_LT(a[k], 1.0);
            if (k) {
                ASSERT_LE(a[k], a[k - 1]);
            }
        }
    }
}

TEST(EpsilonWindow, Examples) {
    const auto seq = LengthSequence::constant(0.3);
    const auto w = epsilon_window(seq, 0.25);
    EXPECT_DOUBLE_EQ(w.eps, 0.25);
    EXPECT_DOUBLE_EQ(w.upper, 0.7);
    EXPECT_TRUE(w.bound_path_ok);
    const auto w2 = epsilon_window(seq, 0.6);
    EXPECT_FALSE(w2.bound_path_ok);
    EXPECT_THROW(epsilon_window(seq, 0.7), DomainError);
    EXPECT_THROW(epsilon_window(seq, 0.0), DomainError);
    EXPECT_THROW(epsilon_window(seq, -1.0), DomainError);
}

TEST(EpsilonWindow, BoundPathFlagExactlyBelowHalf) {
    const auto seq = LengthSequence::constant(0.1);
    EXPECT_TRUE(epsilon_window(seq, std::nextafter(0.5, 0.0)).bound_path_ok);
    EXPECT_FALSE(epsilon_window(seq, 0.5).bound_path_ok);
}

TEST(ThresholdIndex, Examples) {
    const std::vector<double> a{0.4, 0.3, 0.1};
    EXPECT_EQ(threshold_index(a, 0.25), 2u);
    EXPECT_EQ(threshold_index(std::vector<double>{0.1, 0.05}, 0.25), 0u);
    EXPECT_EQ(threshold_index(a, 0.05), 3u);
    EXPECT_EQ(threshold_index(a, 0.3), 2u);  // l_k >= eps counts
    EXPECT_EQ(threshold_index(LengthSequence::explicit_list(a), 0.25, 3), 2u);
    EXPECT_THROW(threshold_index(LengthSequence::explicit_list(a), 0.6, 3), DomainError);
}

TEST(ThresholdIndex, MonotoneInEps) {
    const auto ls = generate(LengthSequence::inverse_sqrt(1.0, 0.49), 400);
    std::size_t prev = 0;
    for (double eps = 0.5; eps > 0.01; eps -= 0.003) {
        const std::size_t m = threshold_index(ls, eps);
        EXPECT_GE(m, prev);
        EXPECT_EQ(m == 0, ls.front() < eps);
        for (std::size_t k = m; k < ls.size(); ++k) ASSERT_LT(ls[k], eps);
        prev = m;
    }
}

TEST(SequenceSpec, Parses) {
    const auto s = parse_sequence_spec("harmonic:c=1,cap=0.99");
    EXPECT_EQ(s.family, Family::harmonic);
    EXPECT_DOUBLE_EQ(s.c, 1.0);
    EXPECT_DOUBLE_EQ(s.cap, 0.99);
    const auto p = parse_sequence_spec("power-decay:c=0.7,alpha=0.75,cap=0.5");
    EXPECT_EQ(p.family, Family::power_decay);
    EXPECT_DOUBLE_EQ(p.alpha, 0.75);
    EXPECT_EQ(parse_sequence_spec("inverse-sqrt:c=1,cap=0.49").family, Family::inverse_sqrt);
    EXPECT_EQ(parse_sequence_spec("constant:c=0.3").family, Family::constant);
}

TEST(SequenceSpec, Rejects) {
    EXPECT_THROW(parse_sequence_spec("fibonacci:c=1"), ValidationError);
    EXPECT_THROW(parse_sequence_spec("harmonic:c=abc"), ValidationError);
    EXPECT_THROW(parse_sequence_spec("harmonic:alpha=2"), ValidationError);
    EXPECT_THROW(parse_sequence_spec("harmonic:cap=1.5"), ValidationError);
    EXPECT_THROW(parse_sequence_spec("harmonic:c"), ValidationError);
    EXPECT_THROW(parse_sequence_spec("explicit:"), ValidationError);
    EXPECT_THROW(parse_sequence_spec("explicit:file=/nonexistent/ls.txt"), ValidationError);
}

TEST(SequenceSpec, ExplicitFile) {
    const std::string path = testing::TempDir() + "shepp_lengths.txt";
    {
        std::ofstream f(path);
        f << "0.5\n0.25\n# comment\n\n0.125,\n";
    }
    const auto s = parse_sequence_spec("explicit:file=" + path);
    EXPECT_EQ(generate(s, 3), (std::vector<double>{0.5, 0.25, 0.125}));
    {
        std::ofstream f(path);
        f << "0.5\nzero\n";
    }
    EXPECT_THROW(parse_sequence_spec("explicit:file=" + path), ValidationError);
    std::remove(path.c_str());
}
