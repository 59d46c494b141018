#include <lpgeom/fuzz.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace lpgeom;
using namespace lpgeom::verify;

TEST(Fuzz, TargetsAreUnique) {
    std::set<std::string> ids;
    for (const auto &t : fuzz_targets())
        EXPECT_TRUE(ids.insert(t.id).second) << t.id;
    EXPECT_EQ(ids.size(), 14u);
    EXPECT_EQ(find_target("no-such-target"), nullptr);
}

TEST(Fuzz, RejectsBadArguments) {
    EXPECT_THROW(run_fuzz("no-such-target", 10, 1), std::invalid_argument);
    EXPECT_THROW(run_fuzz("duality-identities", 0, 1), std::invalid_argument);
    EXPECT_THROW(run_fuzz("duality-identities", 10, 1, 1.0), std::domain_error);
}

TEST(Fuzz, EveryTargetPassesAtDefaultExponent) {
    for (const auto &t : fuzz_targets()) {
        const auto rep = run_fuzz(t.id, 60, 7);
        ASSERT_EQ(rep.records.size(), 1u);
        const auto &r = rep.records[0];
        EXPECT_EQ(r.status, Status::pass) << t.id << "\n" << r.to_json().dump(2);
        EXPECT_EQ(r.values.at("failures"), 0) << t.id;
        if (t.claimed_false)
            EXPECT_GT(r.values.at("witnesses").get<int>(), 0) << t.id;
    }
}

TEST(Fuzz, ClaimedFalseTargetsFindNothingAtTwo) {
    for (const auto &t : fuzz_targets()) {
        if (!t.claimed_false)
            continue;
        const auto r = run_fuzz(t.id, 60, 11, 2.0).records[0];
        EXPECT_EQ(r.status, Status::pass) << t.id;
        EXPECT_EQ(r.values.at("witnesses"), 0) << t.id;
        EXPECT_EQ(r.note, "no witness (expected at p=2)");
    }
}

TEST(Fuzz, DualityIdentitiesThousandTrials) {
    const auto r = run_fuzz("duality-identities", 1000, 20240611).records[0];
    EXPECT_EQ(r.status, Status::pass);
    EXPECT_EQ(r.values.at("failures"), 0);
    EXPECT_EQ(r.values.at("trials"), 1000);
}

TEST(Fuzz, ForcedExponentIsRecorded) {
    const auto r = run_fuzz("projection-homogeneity", 20, 3, 4.0).records[0];
    EXPECT_EQ(r.values.at("p").get<double>(), 4.0);
}

TEST(Fuzz, Deterministic) {
    for (const char *id : {"metric-dual-convexity", "generalized-double-dual", "fixed-point"}) {
        const auto a = run_fuzz(id, 40, 99).to_json().dump();
        const auto b = run_fuzz(id, 40, 99).to_json().dump();
        EXPECT_EQ(a, b) << id;
    }
}

TEST(Fuzz, WitnessesCarryReplaySeeds) {
    const auto r = run_fuzz("metric-dual-convexity", 30, 5).records[0];
    ASSERT_FALSE(r.witnesses.empty());
    EXPECT_LE(r.witnesses.size(), 20u);
    for (const auto &w : r.witnesses) {
        const auto i = w.at("trial").get<std::size_t>();
        EXPECT_EQ(w.at("trial_seed").get<std::uint64_t>(), derive_seed(5, i));
    }
}
