#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "incsat/cdpi.hpp"
#include "incsat/oracle.hpp"
#include "test_util.hpp"

using namespace incsat;
using testutil::itemsetsOf;

namespace {

const char* kToyDb = "1 2 3\n1 2\n2 3\n";

MiningTask task(MiningKind kind, int minSupport, int threshold = 0) {
    MiningTask t;
    t.kind = kind;
    t.minSupport = minSupport;
    t.threshold = threshold;
    return t;
}

CdpiResult run(const TransactionDb& db, const MiningTask& t, RunMode mode) {
    CdpiOptions opts;
    opts.mode = mode;
    return runCdpi(db, t, opts);
}

}  // namespace

TEST_CASE("cdpi mines the toy closed itemsets in both modes") {
    TransactionDb db = parseDb(kToyDb);
    MiningTask t = task(MiningKind::Cfis, 2);
    auto native = run(db, t, RunMode::Native);
    REQUIRE(itemsetsOf(native.solutions) ==
            std::vector<std::vector<int>>{{1, 2}, {2}, {2, 3}});
    auto baseline = run(db, t, RunMode::Baseline);
    REQUIRE(itemsetsOf(baseline.solutions) == itemsetsOf(native.solutions));
}

TEST_CASE("cdpi on a single-transaction database") {
    TransactionDb db = parseDb("1\n");
    auto result = run(db, task(MiningKind::Cfis, 1), RunMode::Native);
    REQUIRE(itemsetsOf(result.solutions) == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("cdpi generators: the empty itemset dominates full-support sets") {
    TransactionDb db = parseDb(kToyDb);
    auto result = run(db, task(MiningKind::Gfis, 2), RunMode::Native);
    REQUIRE(itemsetsOf(result.solutions) == std::vector<std::vector<int>>{{1}, {3}});
}

TEST_CASE("cdpi minimal rare itemsets") {
    TransactionDb db = parseDb(kToyDb);
    auto result = run(db, task(MiningKind::Mrim, 2), RunMode::Native);
    REQUIRE(itemsetsOf(result.solutions) == std::vector<std::vector<int>>{{1, 3}});
}

TEST_CASE("cdpi matches the oracle on random databases for all five tasks") {
    std::mt19937 rng(101);
    int rounds = 0;
    while (rounds < 12) {
        TransactionDb db = testutil::randomDb(rng, 6, 10);
        if (db.size() < 2) continue;
        ++rounds;
        int minSupport = std::uniform_int_distribution<int>(
            1, static_cast<int>(db.size()))(rng);
        int threshold = std::uniform_int_distribution<int>(-1, 3)(rng);
        for (MiningKind kind : {MiningKind::Cfis, MiningKind::Gfis, MiningKind::Mrim,
                                MiningKind::Dfis, MiningKind::Rsd}) {
            MiningTask t = task(kind, minSupport, threshold);
            auto expected = itemsetsOf(oracle::minePatterns(db, t));
            auto native = run(db, t, RunMode::Native);
            INFO("kind=" << toString(kind) << " minSupport=" << minSupport
                         << " threshold=" << threshold << " items=" << db.itemCount
                         << " transactions=" << db.size());
            REQUIRE(itemsetsOf(native.solutions) == expected);
        }
    }
}

TEST_CASE("native and baseline agree on labelled tasks") {
    std::mt19937 rng(202);
    for (int round = 0; round < 4; ++round) {
        TransactionDb db = testutil::randomDb(rng, 5, 9);
        for (MiningKind kind : {MiningKind::Dfis, MiningKind::Rsd}) {
            MiningTask t = task(kind, 1, 1);
            auto native = run(db, t, RunMode::Native);
            auto baseline = run(db, t, RunMode::Baseline);
            REQUIRE(itemsetsOf(native.solutions) == itemsetsOf(baseline.solutions));
        }
    }
}

TEST_CASE("rsd: a small itemset can dominate across levels (post filter works)") {
    // {1} covers both positives and no negatives; {2} covers one positive and
    // the negative, so {1} dominates {2} and {1,2} despite being smaller.
    TransactionDb db = parseDb("+ 1\n+ 1 2\n- 2\n");
    MiningTask t = task(MiningKind::Rsd, 1);
    auto expected = itemsetsOf(oracle::minePatterns(db, t));
    REQUIRE(expected == std::vector<std::vector<int>>{{1}});
    auto result = run(db, t, RunMode::Native);
    REQUIRE(itemsetsOf(result.solutions) == expected);
}

TEST_CASE("retiring a level restriction frees the cardinality again") {
    TransactionDb db = parseDb(kToyDb);
    MiningTask t = task(MiningKind::Cfis, 1);

    Solver s;
    ModelBuilder b(s);
    MiningModel m = buildBaseModel(db, t, b);
    Solver plain;
    ModelBuilder pb(plain);
    MiningModel pm = buildBaseModel(db, t, pb);
    long unrestricted = plain.solveAll(pm.itemVars, nullptr);

    ClauseGroup g = levelRestriction(b, m, 2);
    s.assume(g.selector);
    long atLevel = s.solveAll(m.itemVars, [&](const Solver& model) {
        int size = 0;
        for (Lit l : m.itemLits)
            if (model.value(l)) ++size;
        REQUIRE(size == 2);
    });
    REQUIRE(atLevel > 0);
    b.retireGroup(g);
    REQUIRE(s.solveAll(m.itemVars, nullptr) == unrestricted);
}

TEST_CASE("per-level report is well formed and clause counts grow natively") {
    TransactionDb db = parseDb("1 2 3 4\n1 2\n2 3\n3 4\n1 4\n");
    MiningTask t = task(MiningKind::Cfis, 2);
    auto result = run(db, t, RunMode::Native);
    REQUIRE(result.levels.size() == 4);
    for (size_t i = 1; i < result.levels.size(); ++i)
        REQUIRE(result.levels[i].totalClauses >= result.levels[i - 1].totalClauses);

    std::string csv = levelReportCsv(result.levels);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    REQUIRE(header == "level,solutions,decisions,conflicts,learned,total_clauses");
    int rows = 0;
    for (std::string row; std::getline(lines, row);) ++rows;
    REQUIRE(rows == 4);
}

TEST_CASE("zero-solution levels still produce report rows") {
    TransactionDb db = parseDb("1\n2\n");  // no itemset reaches support 2
    auto result = run(db, task(MiningKind::Cfis, 2), RunMode::Native);
    REQUIRE(result.solutions.empty());
    REQUIRE(result.levels.size() == 2);
    for (const LevelRun& r : result.levels) REQUIRE(r.solutions == 0);
}

TEST_CASE("native and baseline report equal per-level solution counts") {
    std::mt19937 rng(303);
    TransactionDb db = testutil::randomDb(rng, 6, 10);
    MiningTask t = task(MiningKind::Cfis, 2);
    auto native = run(db, t, RunMode::Native);
    auto baseline = run(db, t, RunMode::Baseline);
    REQUIRE(native.levels.size() == baseline.levels.size());
    for (size_t i = 0; i < native.levels.size(); ++i)
        REQUIRE(native.levels[i].solutions == baseline.levels[i].solutions);
}

TEST_CASE("unguarded solution blocking reproduces the same solution set") {
    TransactionDb db = parseDb(kToyDb);
    MiningTask t = task(MiningKind::Cfis, 2);
    CdpiOptions opts;
    opts.guardSolutionBlocking = false;
    auto unguarded = runCdpi(db, t, opts);
    REQUIRE(itemsetsOf(unguarded.solutions) ==
            std::vector<std::vector<int>>{{1, 2}, {2}, {2, 3}});
}

TEST_CASE("side constraints: value and cost weights narrow the pattern set") {
    TransactionDb db = parseDb(kToyDb);
    MiningTask t = task(MiningKind::Cfis, 2);
    t.itemValues = {3, 1, 3};
    t.minValue = 3;  // {2} alone (value 1) is excluded
    t.itemCosts = {1, 1, 1};
    t.maxCost = 5;
    auto expected = itemsetsOf(oracle::minePatterns(db, t));
    auto result = run(db, t, RunMode::Native);
    REQUIRE(itemsetsOf(result.solutions) == expected);
    REQUIRE(expected == std::vector<std::vector<int>>{{1, 2}, {2, 3}});
}

TEST_CASE("an expired time limit is reported instead of wrong answers") {
    TransactionDb db = parseDb(kToyDb);
    MiningTask t = task(MiningKind::Cfis, 2);
    CdpiOptions opts;
    opts.timeLimitSeconds = 0.0;
    auto result = runCdpi(db, t, opts);
    REQUIRE(result.timedOut);
}

TEST_CASE("emitted solutions never violate earlier blocking clauses") {
    // blocking soundness: every emitted solution survives checkSolution
    // against the full emitted set for the level-ordered tasks
    std::mt19937 rng(404);
    TransactionDb db = testutil::randomDb(rng, 6, 9);
    for (MiningKind kind : {MiningKind::Cfis, MiningKind::Gfis, MiningKind::Mrim}) {
        MiningTask t = task(kind, 2);
        auto result = run(db, t, RunMode::Native);
        for (const PatternSolution& sol : result.solutions)
            REQUIRE(checkSolution(db, t, sol, result.solutions));
    }
}
