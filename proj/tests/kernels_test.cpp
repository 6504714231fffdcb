#include "abw/kernels.hpp"
#include "abw/market.hpp"
#include "abw/problem.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

namespace k = abw::kernels;

abw::ProblemSpec spec_for(double p, double alpha, std::size_t n)
{
    abw::ProblemSpec s;
    s.divergence = {alpha, 0.5, abw::BregmanGenerator::power(p)};
    s.c = 0.9;
    s.grid_size = n;
    return s;
}

double bisect_node(const abw::Utility& util, const abw::BregmanGenerator& gen, double floor,
                   double s, double t)
{
    auto h = [&](double x) { return -util.marginal(x - floor) + s * gen.grad(x) - t; };
    double lo = floor;
    double hi = floor + 1.0;
    while (h(hi) < 0.0) {
        hi = floor + 2.0 * (hi - floor);
    }
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

TEST(SolveNode, MatchesBisection)
{
    const auto util = abw::Utility::crra(0.5);
    for (double p : {1.6, 2.0, 2.4}) {
        const auto gen = abw::BregmanGenerator::power(p);
        for (double floor : {0.0, 0.3, 5.0}) {
            for (double s : {1e-3, 0.2, 4.0}) {
                for (double t : {-50.0, -1.0, 0.0, 3.0}) {
                    const double want = bisect_node(util, gen, floor, s, t);
                    const double got = k::solve_node(util, gen, floor, s, t, 0.0);
                    EXPECT_NEAR(got, want, 1e-12 * want + 1e-14)
                        << p << " " << floor << " " << s << " " << t;
                }
            }
        }
    }
}

TEST(SolveNode, WarmStartDoesNotChangeRoot)
{
    const auto util = abw::Utility::crra(0.5);
    const auto gen = abw::BregmanGenerator::power(1.6);
    const double cold = k::solve_node(util, gen, 1.0, 0.3, -2.0, 0.0);
    for (double warm : {1.0001, 2.0, 50.0, 1e6}) {
        EXPECT_NEAR(k::solve_node(util, gen, 1.0, 0.3, -2.0, warm), cold, 1e-12 * cold);
    }
}

TEST(SolveNode, ZeroSlope)
{
    const auto util = abw::Utility::crra(0.5);
    const auto gen = abw::BregmanGenerator::power(2.0);
    EXPECT_NEAR(k::solve_node(util, gen, 1.0, 0.0, -4.0, 0.0), 1.0625, 1e-15);
    EXPECT_TRUE(std::isinf(k::solve_node(util, gen, 1.0, 0.0, 1.0, 0.0)));
}

TEST(Kernels, ParallelMatchesSerial)
{
    const abw::ProblemGrid pg(spec_for(1.6, 0.25, 10000));
    const auto in = pg.inputs();
    const auto& util = pg.spec().utility;
    const auto& gen = pg.spec().divergence.generator;
    const std::size_t n = pg.size();
    std::vector<double> a(n), b(n), ba(n), bb(n);

    k::candidate(util, gen, in, 5.0, 0.2, 0.25, a.data());
    k::serial::candidate(util, gen, in, 5.0, 0.2, 0.25, b.data());
    for (std::size_t i = 0; i < n; ++i) {
        ASSERT_NEAR(a[i], b[i], 1e-12 * b[i]) << i;
    }

    k::assembled(util, gen, in, 5.0, 0.2, 0.25, a.data(), ba.data());
    k::serial::assembled(util, gen, in, 5.0, 0.2, 0.25, b.data(), bb.data());
    for (std::size_t i = 0; i < n; ++i) {
        ASSERT_NEAR(a[i], b[i], 1e-12 * b[i]) << i;
        ASSERT_EQ(ba[i], bb[i]) << i;
    }

    EXPECT_NEAR(k::weighted_mean(a.data(), in.xi, n), k::serial::weighted_mean(b.data(), in.xi, n),
                1e-12);
    const auto& dspec = pg.spec().divergence;
    EXPECT_NEAR(k::abw_mean(dspec, a.data(), in.benchmark, n),
                k::serial::abw_mean(dspec, b.data(), in.benchmark, n), 1e-10);
    EXPECT_NEAR(k::utility_mean(util, a.data(), in.benchmark, 0.9, n),
                k::serial::utility_mean(util, b.data(), in.benchmark, 0.9, n), 1e-12);
}

TEST(Kernels, ThreadCountDoesNotChangeResults)
{
    const abw::ProblemGrid pg(spec_for(2.4, 0.1, 9000));
    const auto in = pg.inputs();
    const auto& util = pg.spec().utility;
    const auto& gen = pg.spec().divergence.generator;
    const std::size_t n = pg.size();
    std::vector<double> one(n), many(n);
    k::set_thread_limit(1);
    k::assembled(util, gen, in, 3.0, 0.4, 0.1, one.data(), nullptr);
    const double s1 = k::weighted_mean(one.data(), in.xi, n);
    k::set_thread_limit(4);
    k::assembled(util, gen, in, 3.0, 0.4, 0.1, many.data(), nullptr);
    const double s4 = k::weighted_mean(many.data(), in.xi, n);
    k::set_thread_limit(0);
    EXPECT_EQ(one, many);
    EXPECT_EQ(s1, s4);
}

TEST(Kernels, UtilityMeanFloorSentinel)
{
    const auto util = abw::Utility::crra(0.5);
    const std::vector<double> f{1.0, 2.0};
    const std::vector<double> g{0.5, 3.0};
    EXPECT_EQ(k::utility_mean(util, g.data(), f.data(), 0.9, 2), -INFINITY);
    const std::vector<double> h{0.9, 1.8};
    EXPECT_EQ(k::utility_mean(util, h.data(), f.data(), 0.9, 2), 0.0);
}

}  // namespace
