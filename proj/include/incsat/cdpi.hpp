#pragma once

#include <chrono>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "incsat/mining_model.hpp"

namespace incsat {

enum class RunMode { Native, Baseline };

inline const char* toString(RunMode m) {
    return m == RunMode::Native ? "native" : "baseline";
}

struct CdpiOptions {
    RunMode mode = RunMode::Native;
    // Guard per-solution enumeration blocks with the level selector so they
    // deactivate on retirement; false reproduces the ever-growing model of a
    // plain incremental SAT backend.
    bool guardSolutionBlocking = true;
    std::optional<double> timeLimitSeconds;
    Solver::Options solverOptions;
};

struct LevelRun {
    int level = 0;
    long solutions = 0;
    uint64_t decisions = 0;  // delta within the level
    uint64_t conflicts = 0;
    size_t learned = 0;       // learned-clause count at level end
    size_t totalClauses = 0;  // clause database size at level end
    double millis = 0.0;
};

struct CdpiResult {
    std::vector<PatternSolution> solutions;
    std::vector<LevelRun> levels;
    bool timedOut = false;
    uint64_t totalDecisions = 0;
    uint64_t totalConflicts = 0;
};

namespace detail {

inline std::optional<std::chrono::steady_clock::time_point> deadlineFor(
    const CdpiOptions& opts) {
    if (!opts.timeLimitSeconds) return std::nullopt;
    return std::chrono::steady_clock::now() +
           std::chrono::microseconds(
               static_cast<int64_t>(*opts.timeLimitSeconds * 1e6));
}

// Solutions dominated by the empty itemset must be blocked up front for the
// bottom-up tasks: level 0 is never searched, yet an admissible empty pattern
// dominates same-support supersets (GFIS) or all supersets (MRIM).
inline void addVirtualEmptyBlocking(const TransactionDb& db, const MiningTask& task,
                                    const MiningModel& model, ModelBuilder& b) {
    if (!task.excludeEmpty || !ascendingLevels(task.kind)) return;
    if (!emptyPatternFeasible(db, task)) return;
    for (const auto& cl : blockingClauses(db, task, model, b, emptySolution(db)))
        b.solver().addClause(cl);
}

// Final non-dominance pass. For the four tasks whose level order already
// serialises dominance it must change nothing; RSD genuinely needs it because
// a smaller itemset can dominate a larger one across cover sets.
inline void filterDominated(const TransactionDb& db, const MiningTask& task,
                            CdpiResult& result) {
    std::vector<PatternSolution> reference = result.solutions;
    if (task.kind == MiningKind::Rsd && task.excludeEmpty &&
        emptyPatternFeasible(db, task))
        reference.push_back(emptySolution(db));
    std::vector<PatternSolution> kept;
    for (const PatternSolution& sol : result.solutions)
        if (checkSolution(db, task, sol, reference)) kept.push_back(sol);
    if (kept.size() != result.solutions.size() && task.kind != MiningKind::Rsd)
        throw std::logic_error("dominance filter dropped a solution on a level-ordered task");
    result.solutions = std::move(kept);
}

}  // namespace detail

// Algorithm: per cardinality level, restrict, enumerate all solutions,
// generate dominance blocking, lift the restriction. Native keeps one solver
// alive for the whole run (assumption-guarded restrictions, retained learned
// clauses); baseline re-encodes from scratch each level.
inline CdpiResult runCdpi(const TransactionDb& db, const MiningTask& task,
                          const CdpiOptions& opts = {}) {
    CdpiResult result;
    auto deadline = detail::deadlineFor(opts);
    std::vector<int> schedule = levelSchedule(db, task);

    Solver::Options solverOpts = opts.solverOptions;
    solverOpts.guardEnumeration = opts.guardSolutionBlocking;

    auto runLevel = [&](Solver& solver, ModelBuilder& b, const MiningModel& model,
                        int level, bool guarded) {
        auto t0 = std::chrono::steady_clock::now();
        SolverStats before = solver.statistics();
        std::vector<PatternSolution> found;
        std::optional<ClauseGroup> group;
        if (guarded) {
            group = levelRestriction(b, model, level);
            solver.assume(group->selector);
        } else {
            for (Lit l : b.eqLits(model.size, level)) solver.addClause({l});
        }
        solver.solveAll(model.itemVars, [&](const Solver& s) {
            found.push_back(extractSolution(db, model, s));
        });
        bool expired = solver.timedOut();
        if (group) b.retireGroup(*group);
        for (const PatternSolution& sol : found)
            for (const auto& cl : blockingClauses(db, task, model, b, sol))
                solver.addClause(cl);
        SolverStats after = solver.statistics();

        LevelRun run;
        run.level = level;
        run.solutions = static_cast<long>(found.size());
        run.decisions = after.decisions - before.decisions;
        run.conflicts = after.conflicts - before.conflicts;
        run.learned = after.learnedCount;
        run.totalClauses = after.totalClauses;
        run.millis = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
        result.levels.push_back(run);
        result.totalDecisions += run.decisions;
        result.totalConflicts += run.conflicts;
        for (PatternSolution& sol : found) result.solutions.push_back(std::move(sol));
        return !expired;
    };

    if (opts.mode == RunMode::Native) {
        Solver solver(solverOpts);
        solver.setDeadline(deadline);
        ModelBuilder b(solver);
        MiningModel model = buildBaseModel(db, task, b);
        detail::addVirtualEmptyBlocking(db, task, model, b);
        for (int level : schedule) {
            if (!runLevel(solver, b, model, level, true)) {
                result.timedOut = true;
                break;
            }
        }
    } else {
        for (int level : schedule) {
            Solver solver(solverOpts);
            solver.setDeadline(deadline);
            ModelBuilder b(solver);
            MiningModel model = buildBaseModel(db, task, b);
            detail::addVirtualEmptyBlocking(db, task, model, b);
            for (const PatternSolution& sol : result.solutions)
                for (const auto& cl : blockingClauses(db, task, model, b, sol))
                    solver.addClause(cl);
            if (!runLevel(solver, b, model, level, false)) {
                result.timedOut = true;
                break;
            }
        }
    }

    if (!result.timedOut) detail::filterDominated(db, task, result);
    return result;
}

// Per-level statistics table; enough to re-draw nodes-per-level and
// clauses-per-level plots.
inline std::string levelReportCsv(const std::vector<LevelRun>& levels) {
    std::ostringstream out;
    out << "level,solutions,decisions,conflicts,learned,total_clauses\n";
    for (const LevelRun& r : levels) {
        out << r.level << ',' << r.solutions << ',' << r.decisions << ','
            << r.conflicts << ',' << r.learned << ',' << r.totalClauses << '\n';
    }
    return out.str();
}

}  // namespace incsat
