#include <cmath>

#include <gtest/gtest.h>

#include "isc/reference.hpp"

using namespace isc;

TEST(ScenarioKind, NamesRoundTrip)
{
    for (auto k : {ScenarioKind::path_following, ScenarioKind::obstacle_avoidance, ScenarioKind::combined})
        EXPECT_EQ(scenario_from_string(to_string(k)), k);
    EXPECT_THROW((void)scenario_from_string("parking"), std::invalid_argument);
}

TEST(MakeReference, FlatPathIsZero)
{
    PathShape shape;
    shape.amplitude = 0.0;
    const auto r = make_reference(ScenarioKind::path_following, Provenance::driver, shape, 20.0, 0.02, 600);
    for (const auto& s : r.samples()) {
        EXPECT_EQ(s.y, 0.0);
        EXPECT_EQ(s.psi, 0.0);
    }
}

TEST(MakeReference, HeadingIsForwardDifference)
{
    const PathShape shape;
    for (auto kind : {ScenarioKind::path_following, ScenarioKind::obstacle_avoidance, ScenarioKind::combined}) {
        const auto r = make_reference(kind, Provenance::driver, shape, 20.0, 0.02, 800);
        for (std::size_t k = 0; k + 1 < r.size(); ++k)
            ASSERT_NEAR(r.at(k).psi * 20.0 * 0.02, r.at(k + 1).y - r.at(k).y, 1e-15) << "k " << k;
    }
}

TEST(MakeReference, Sinusoid)
{
    const PathShape shape;
    const auto r = make_reference(ScenarioKind::path_following, Provenance::automation, shape, 20.0, 0.02, 600);
    EXPECT_EQ(r.at(0).y, 0.0);
    EXPECT_NEAR(r.at(125).y, 2.0, 1e-12);   // quarter period 2.5 s
    EXPECT_NEAR(r.at(250).y, 0.0, 1e-12);
    EXPECT_NEAR(r.at(375).y, -2.0, 1e-12);
    EXPECT_EQ(r.provenance(), Provenance::automation);
}

TEST(MakeReference, AvoidancePathEndsAtOffset)
{
    const PathShape shape;  // lane change of 3 m from 3 s to 5 s
    const auto base = make_reference(ScenarioKind::obstacle_avoidance, Provenance::automation, shape, 20.0, 0.02, 500);
    const auto driver = make_reference(ScenarioKind::obstacle_avoidance, Provenance::driver, shape, 20.0, 0.02, 500);
    const auto last = driver.size() - 1;
    EXPECT_NEAR(driver.at(last).y, base.at(last).y + 3.0, 1e-9);
    // y departs after t = 3 s; the forward-difference heading one sample earlier
    for (std::size_t k = 0; k < 150; ++k)
        EXPECT_EQ(driver.at(k), base.at(k)) << k;
    EXPECT_EQ(driver.at(150).y, base.at(150).y);
    EXPECT_NE(driver.at(150).psi, base.at(150).psi);
    EXPECT_NE(driver.at(151).y, base.at(151).y);
}

TEST(MakeReference, AutomationNeverDeviates)
{
    const PathShape shape;
    const auto pf = make_reference(ScenarioKind::path_following, Provenance::automation, shape, 20.0, 0.02, 700);
    const auto pf_d = make_reference(ScenarioKind::path_following, Provenance::driver, shape, 20.0, 0.02, 700);
    for (auto kind : {ScenarioKind::obstacle_avoidance, ScenarioKind::combined}) {
        const auto a = make_reference(kind, Provenance::automation, shape, 20.0, 0.02, 700);
        EXPECT_EQ(a.samples(), pf.samples());
    }
    EXPECT_EQ(pf_d.samples(), pf.samples());
}

TEST(AvoidanceOffset, SmootherstepShape)
{
    const PathShape shape;
    EXPECT_EQ(avoidance_offset(shape, 0.0), 0.0);
    EXPECT_EQ(avoidance_offset(shape, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(avoidance_offset(shape, 4.0), 1.5);
    EXPECT_EQ(avoidance_offset(shape, 5.0), 3.0);
    EXPECT_EQ(avoidance_offset(shape, 50.0), 3.0);
    double prev = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double v = avoidance_offset(shape, 3.0 + 0.01 * i);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(ReferencePath, HoldsLastSample)
{
    const ReferencePath r({{1.0, 0.1}, {2.0, 0.2}}, Provenance::driver);
    EXPECT_EQ(r.at(5), (OutputSample{2.0, 0.2}));
    std::vector<OutputSample> w;
    r.window(1, 3, w);
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w[0], (OutputSample{2.0, 0.2}));
    EXPECT_EQ(w[2], (OutputSample{2.0, 0.2}));
    EXPECT_THROW(ReferencePath({}, Provenance::driver), std::invalid_argument);
}

TEST(MakeReference, RejectsInvalidShapes)
{
    PathShape shape;
    shape.period = 0.0;
    EXPECT_THROW((void)make_reference(ScenarioKind::path_following, Provenance::driver, shape, 20, 0.02, 10),
                 std::invalid_argument);
    shape = {};
    shape.change_duration = -1.0;
    EXPECT_THROW((void)make_reference(ScenarioKind::obstacle_avoidance, Provenance::driver, shape, 20, 0.02, 10),
                 std::invalid_argument);
    EXPECT_THROW((void)make_reference(ScenarioKind::path_following, Provenance::driver, {}, 20, 0.02, 0),
                 std::invalid_argument);
    EXPECT_THROW((void)make_reference(ScenarioKind::path_following, Provenance::driver, {}, 0, 0.02, 10),
                 std::invalid_argument);
}
