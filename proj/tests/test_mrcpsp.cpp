#include <catch2/catch_amalgamated.hpp>

#include "incsat/mrcpsp.hpp"
#include "incsat/oracle.hpp"
#include "test_util.hpp"

using namespace incsat;

namespace {

constexpr Strategy kAll[] = {Strategy::Linear, Strategy::Unsat, Strategy::Bisect};

const char* kChain = R"({
  "jobs": ["s", "a", "b", "e"],
  "startDummy": "s", "endDummy": "e",
  "modes": {"s": ["m"], "a": ["m"], "b": ["m"], "e": ["m"]},
  "duration": {"s": {"m": 0}, "a": {"m": 2}, "b": {"m": 3}, "e": {"m": 0}},
  "successors": {"s": ["a"], "a": ["b"], "b": ["e"], "e": []},
  "horizon": 10
})";

const char* kSerialize = R"({
  "jobs": ["s", "a", "b", "e"],
  "startDummy": "s", "endDummy": "e",
  "modes": {"s": ["m"], "a": ["m"], "b": ["m"], "e": ["m"]},
  "duration": {"s": {"m": 0}, "a": {"m": 1}, "b": {"m": 1}, "e": {"m": 0}},
  "renewable": {"R": 1},
  "usageRenewable": {"a": {"m": {"R": 1}}, "b": {"m": {"R": 1}}},
  "successors": {"s": ["a", "b"], "a": ["e"], "b": ["e"], "e": []},
  "horizon": 5
})";

const char* kTwoModes = R"({
  "jobs": ["s", "a", "e"],
  "startDummy": "s", "endDummy": "e",
  "modes": {"s": ["m"], "a": ["fast", "slow"], "e": ["m"]},
  "duration": {"s": {"m": 0}, "a": {"fast": 1, "slow": 3}, "e": {"m": 0}},
  "nonRenewable": {"N": 2},
  "usageNonRenewable": {"a": {"fast": {"N": 3}, "slow": {"N": 1}}},
  "successors": {"s": ["a"], "a": ["e"], "e": []},
  "horizon": 8
})";

}  // namespace

TEST_CASE("parse a two-job chain") {
    MrcpspInstance inst = parseInstance(std::string(kChain));
    REQUIRE(inst.jobCount() == 4);
    REQUIRE(inst.startDummy == 0);
    REQUIRE(inst.endDummy == 3);
    REQUIRE(inst.duration[1][0] == 2);
    REQUIRE(inst.horizon == 10);
}

TEST_CASE("parse rejects a precedence cycle") {
    std::string text = R"({
      "jobs": ["s", "a", "b", "e"],
      "startDummy": "s", "endDummy": "e",
      "modes": {"s": ["m"], "a": ["m"], "b": ["m"], "e": ["m"]},
      "duration": {"s": {"m": 0}, "a": {"m": 1}, "b": {"m": 1}, "e": {"m": 0}},
      "successors": {"s": ["a"], "a": ["b"], "b": ["a", "e"], "e": []},
      "horizon": 5
    })";
    REQUIRE_THROWS_WITH(parseInstance(text), Catch::Matchers::ContainsSubstring("cyclic"));
}

TEST_CASE("parse rejects bad instances") {
    // negative duration
    std::string negDur(kChain);
    negDur.replace(negDur.find("\"a\": {\"m\": 2}"), 13, "\"a\": {\"m\": -2}");
    REQUIRE_THROWS(parseInstance(negDur));
    // end dummy must be the global sink
    std::string sink = R"({
      "jobs": ["s", "a", "e"],
      "startDummy": "s", "endDummy": "e",
      "modes": {"s": ["m"], "a": ["m"], "e": ["m"]},
      "duration": {"s": {"m": 0}, "a": {"m": 1}, "e": {"m": 0}},
      "successors": {"s": ["a", "e"], "a": [], "e": []},
      "horizon": 5
    })";
    REQUIRE_THROWS_WITH(parseInstance(sink), Catch::Matchers::ContainsSubstring("reachable"));
    // dummies must not work
    std::string busyDummy(kChain);
    busyDummy.replace(busyDummy.find("\"s\": {\"m\": 0}"), 13, "\"s\": {\"m\": 1}");
    REQUIRE_THROWS_WITH(parseInstance(busyDummy),
                        Catch::Matchers::ContainsSubstring("dummy"));
}

TEST_CASE("parse a job with two modes and mode-indexed usage") {
    MrcpspInstance inst = parseInstance(std::string(kTwoModes));
    REQUIRE(inst.modeCount(1) == 2);
    REQUIRE(inst.duration[1][0] == 1);
    REQUIRE(inst.duration[1][1] == 3);
    REQUIRE(inst.usageNonRenewable[1][0][0] == 3);
    REQUIRE(inst.usageNonRenewable[1][1][0] == 1);
}

TEST_CASE("chain instance: optimal makespan 6 for every strategy") {
    MrcpspInstance inst = parseInstance(std::string(kChain));
    REQUIRE(oracle::optimumMakespan(inst) == 6);
    for (Strategy strategy : kAll) {
        MrcpspResult r = solveMrcpsp(inst, strategy);
        INFO(toString(strategy));
        REQUIRE(r.schedule.has_value());
        REQUIRE(r.schedule->makespan == 6);
        REQUIRE_FALSE(scheduleViolation(inst, *r.schedule).has_value());
    }
}

TEST_CASE("renewable contention forces serialization") {
    MrcpspInstance inst = parseInstance(std::string(kSerialize));
    REQUIRE(oracle::optimumMakespan(inst) == 3);
    MrcpspResult r = solveMrcpsp(inst, Strategy::Bisect);
    REQUIRE(r.schedule.has_value());
    REQUIRE(r.schedule->makespan == 3);
    REQUIRE(r.schedule->start[1] != r.schedule->start[2]);
}

TEST_CASE("non-renewable budget drives the mode choice") {
    MrcpspInstance inst = parseInstance(std::string(kTwoModes));
    MrcpspResult r = solveMrcpsp(inst, Strategy::Unsat);
    REQUIRE(r.schedule.has_value());
    REQUIRE(r.schedule->makespan == 4);  // slow mode is the only affordable one
    REQUIRE(r.schedule->mode[1] == 1);
    nlohmann::json out = scheduleToJson(inst, *r.schedule);
    REQUIRE(out["mode"]["a"] == "slow");
    REQUIRE(out["makespan"] == 4);
}

TEST_CASE("dummy-only project has makespan 1") {
    std::string text = R"({
      "jobs": ["s", "e"],
      "startDummy": "s", "endDummy": "e",
      "modes": {"s": ["m"], "e": ["m"]},
      "duration": {"s": {"m": 0}, "e": {"m": 0}},
      "successors": {"s": ["e"], "e": []},
      "horizon": 3
    })";
    MrcpspInstance inst = parseInstance(text);
    MrcpspResult r = solveMrcpsp(inst, Strategy::Linear);
    REQUIRE(r.schedule.has_value());
    REQUIRE(r.schedule->makespan == 1);
}

TEST_CASE("a too-small horizon is INFEASIBLE, not an encode error") {
    std::string text(kChain);
    text.replace(text.find("\"horizon\": 10"), 13, "\"horizon\": 5");
    MrcpspInstance inst = parseInstance(text);
    REQUIRE_FALSE(oracle::optimumMakespan(inst).has_value());
    for (Strategy strategy : kAll) {
        MrcpspResult r = solveMrcpsp(inst, strategy);
        REQUIRE_FALSE(r.schedule.has_value());
        REQUIRE_FALSE(r.cop.feasible());
    }
}

TEST_CASE("jobActive literals track the start/duration window") {
    MrcpspInstance inst = parseInstance(std::string(kSerialize));
    Solver s;
    ModelBuilder b(s);
    MrcpspVars vars = encode(inst, b);
    REQUIRE(s.solve() == Result::Sat);
    for (int j = 0; j < inst.jobCount(); ++j) {
        int st = vars.start[j].valueIn(s);
        int mode = -1;
        for (int m = 0; m < inst.modeCount(j); ++m)
            if (s.value(vars.mode[j][m])) {
                REQUIRE(mode == -1);  // one-hot
                mode = m;
            }
        REQUIRE(mode >= 0);
        int d = inst.duration[j][mode];
        for (int t = 1; t <= inst.horizon; ++t) {
            bool inWindow = t >= st && t < st + d;
            REQUIRE(s.value(vars.active[j][t - 1]) == inWindow);
        }
    }
}

TEST_CASE("the evaluator rejects corrupted schedules") {
    MrcpspInstance inst = parseInstance(std::string(kChain));
    MrcpspResult r = solveMrcpsp(inst, Strategy::Bisect);
    REQUIRE(r.schedule.has_value());
    Schedule good = *r.schedule;
    REQUIRE_FALSE(scheduleViolation(inst, good).has_value());

    Schedule precedence = good;
    precedence.start[2] = precedence.start[1];  // b now overlaps a
    REQUIRE(scheduleViolation(inst, precedence).has_value());

    Schedule anchor = good;
    anchor.start[0] = 2;
    REQUIRE(scheduleViolation(inst, anchor).has_value());

    Schedule badMakespan = good;
    badMakespan.makespan += 1;
    REQUIRE(scheduleViolation(inst, badMakespan).has_value());

    MrcpspInstance busy = parseInstance(std::string(kSerialize));
    MrcpspResult rb = solveMrcpsp(busy, Strategy::Bisect);
    Schedule clash = *rb.schedule;
    clash.start[2] = clash.start[1];  // both unit jobs on the single resource
    clash.makespan = std::max(clash.start[1] + 1, clash.start[2] + 1);
    clash.start[3] = clash.makespan;
    REQUIRE(scheduleViolation(busy, clash).has_value());
}

TEST_CASE("random instances: strategies agree with the brute force") {
    std::mt19937 rng(77);
    for (int round = 0; round < 8; ++round) {
        MrcpspInstance inst = testutil::randomMrcpsp(rng);
        auto expected = oracle::optimumMakespan(inst);
        INFO("jobs=" << inst.jobCount() << " horizon=" << inst.horizon);
        for (Strategy strategy : kAll) {
            MrcpspResult r = solveMrcpsp(inst, strategy);
            if (expected) {
                REQUIRE(r.schedule.has_value());
                REQUIRE(r.schedule->makespan == *expected);
                REQUIRE_FALSE(scheduleViolation(inst, *r.schedule).has_value());
            } else {
                REQUIRE_FALSE(r.schedule.has_value());
            }
        }
    }
}

TEST_CASE("native and per-call modes agree on the scheduling objective") {
    MrcpspInstance inst = parseInstance(std::string(kSerialize));
    ProblemFactory factory = [&](Solver& s, ModelBuilder& b) {
        (void)s;
        MrcpspVars vars = encode(inst, b);
        return vars.start[inst.endDummy];
    };
    for (Strategy strategy : kAll) {
        ModeComparison cmp = compareModes(factory, Sense::Minimise, strategy);
        REQUIRE(cmp.native.optimum == cmp.perCall.optimum);
        REQUIRE(*cmp.native.optimum == 3);
    }
}
