#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "incsat/builder.hpp"

namespace incsat {

enum class Sense { Minimise, Maximise };
enum class Strategy { Linear, Unsat, Bisect };

inline const char* toString(Strategy s) {
    switch (s) {
        case Strategy::Linear: return "linear";
        case Strategy::Unsat: return "unsat";
        default: return "bisect";
    }
}

struct CopCall {
    int bound = 0;
    Result verdict = Result::Unknown;
    uint64_t decisions = 0;
    uint64_t conflicts = 0;
    double millis = 0.0;
};

struct CopResult {
    std::optional<int> optimum;  // nullopt: base formula infeasible
    std::vector<CopCall> log;
    std::vector<int8_t> model;  // model attaining the optimum
    bool timedOut = false;

    bool feasible() const { return optimum.has_value(); }
};

struct CopOptions {
    // Jump the next bound to the model's objective value instead of stepping
    // by one; off by default to match the plain search schedules.
    bool boundJump = false;
    std::optional<double> timeLimitSeconds;
};

namespace detail {

// One satisfiability probe at a bound in the improving direction
// (X >= b when maximising, X <= b when minimising).
class BoundProbe {
public:
    virtual ~BoundProbe() = default;
    virtual Result probe(int bound, CopCall& row, int& modelValue,
                         std::vector<int8_t>& model) = 0;
    virtual void promote(int bound) {}
};

inline Lit boundLit(const IntOrderVar& x, Sense sense, int bound) {
    return sense == Sense::Maximise ? x.geq(bound) : ~x.geq(bound + 1);
}

class NativeProbe : public BoundProbe {
public:
    NativeProbe(Solver& solver, const IntOrderVar& objective, Sense sense)
        : solver_(solver), objective_(objective), sense_(sense) {}

    Result probe(int bound, CopCall& row, int& modelValue,
                 std::vector<int8_t>& model) override {
        SolverStats before = solver_.statistics();
        auto t0 = std::chrono::steady_clock::now();
        solver_.assume(boundLit(objective_, sense_, bound));
        Result r = solver_.solve();
        SolverStats after = solver_.statistics();
        row.bound = bound;
        row.verdict = r;
        row.decisions = after.decisions - before.decisions;
        row.conflicts = after.conflicts - before.conflicts;
        row.millis = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
        if (r == Result::Sat) {
            modelValue = objective_.valueIn(solver_);
            model = solver_.model();
        }
        return r;
    }

    void promote(int bound) override {
        solver_.addClause({boundLit(objective_, sense_, bound)});
    }

private:
    Solver& solver_;
    const IntOrderVar& objective_;
    Sense sense_;
};

// Re-encodes the whole problem for every call; nothing is retained.
class FreshProbe : public BoundProbe {
public:
    using Factory = std::function<IntOrderVar(Solver&, ModelBuilder&)>;

    FreshProbe(Factory factory, Sense sense, Solver::Options solverOptions,
               std::optional<std::chrono::steady_clock::time_point> deadline)
        : factory_(std::move(factory)),
          sense_(sense),
          solverOptions_(solverOptions),
          deadline_(deadline) {}

    Result probe(int bound, CopCall& row, int& modelValue,
                 std::vector<int8_t>& model) override {
        auto t0 = std::chrono::steady_clock::now();
        Solver solver(solverOptions_);
        solver.setDeadline(deadline_);
        ModelBuilder b(solver);
        IntOrderVar objective = factory_(solver, b);
        solver.assume(boundLit(objective, sense_, bound));
        Result r = solver.solve();
        SolverStats stats = solver.statistics();
        row.bound = bound;
        row.verdict = r;
        row.decisions = stats.decisions;
        row.conflicts = stats.conflicts;
        row.millis = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
        if (r == Result::Sat) {
            modelValue = objective.valueIn(solver);
            model = solver.model();
        }
        return r;
    }

private:
    Factory factory_;
    Sense sense_;
    Solver::Options solverOptions_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
};

// Common driver: runs the chosen satisfiability sequence over [lo, hi].
inline CopResult optimizeWith(BoundProbe& probe, int lo, int hi, Sense sense,
                              Strategy strategy, const CopOptions& opts) {
    CopResult result;
    bool maximise = sense == Sense::Maximise;
    int step = maximise ? 1 : -1;
    std::optional<int> best;

    auto call = [&](int bound) {
        CopCall row;
        int value = 0;
        std::vector<int8_t> model;
        Result r = probe.probe(bound, row, value, model);
        result.log.push_back(row);
        if (r == Result::Unknown) result.timedOut = true;
        if (r == Result::Sat) {
            best = value;
            result.model = std::move(model);
        }
        return r;
    };

    switch (strategy) {
        case Strategy::Linear: {
            // start from the feasible-rich end, tighten until UNSAT
            int bound = maximise ? lo : hi;
            while (maximise ? bound <= hi : bound >= lo) {
                Result r = call(bound);
                if (r != Result::Sat) break;
                bound = (opts.boundJump ? *best : bound) + step;
            }
            break;
        }
        case Strategy::Unsat: {
            // start from the infeasible-rich end, relax until SAT
            int bound = maximise ? hi : lo;
            while (maximise ? bound >= lo : bound <= hi) {
                Result r = call(bound);
                if (r == Result::Sat || r == Result::Unknown) break;
                bound -= step;
            }
            break;
        }
        case Strategy::Bisect: {
            int curLo = lo, curHi = hi;
            while (curLo < curHi) {
                int mid = maximise ? curLo + (curHi - curLo + 1) / 2
                                   : curLo + (curHi - curLo) / 2;
                Result r = call(mid);
                if (r == Result::Unknown) break;
                if (r == Result::Sat) {
                    probe.promote(mid);
                    if (maximise)
                        curLo = opts.boundJump ? std::max(mid, *best) : mid;
                    else
                        curHi = opts.boundJump ? std::min(mid, *best) : mid;
                } else {
                    if (maximise)
                        curHi = mid - 1;
                    else
                        curLo = mid + 1;
                }
            }
            if (!result.timedOut && !best) call(maximise ? curLo : curHi);
            break;
        }
    }
    // nullopt with timedOut unset is a proven INFEASIBLE; with timedOut set
    // the search simply ran out of time before finding a model
    result.optimum = best;
    return result;
}

inline std::optional<std::chrono::steady_clock::time_point> copDeadline(
    const CopOptions& opts) {
    if (!opts.timeLimitSeconds) return std::nullopt;
    return std::chrono::steady_clock::now() +
           std::chrono::microseconds(
               static_cast<int64_t>(*opts.timeLimitSeconds * 1e6));
}

}  // namespace detail

// Optimizes an order-encoded objective by a sequence of satisfiability calls.
// Every bound is a single threshold literal passed as an assumption; learned
// clauses persist in the handle across calls. Bisect promotes proven bounds
// to permanent unit clauses.
inline CopResult optimize(Solver& solver, const IntOrderVar& objective, Sense sense,
                          Strategy strategy, const CopOptions& opts = {}) {
    auto deadline = detail::copDeadline(opts);
    solver.setDeadline(deadline);
    detail::NativeProbe probe(solver, objective, sense);
    CopResult r = detail::optimizeWith(probe, objective.lo, objective.hi, sense,
                                       strategy, opts);
    solver.setDeadline(std::nullopt);
    return r;
}

using ProblemFactory = std::function<IntOrderVar(Solver&, ModelBuilder&)>;

struct ModeComparison {
    CopResult native;
    CopResult perCall;  // fresh solver per call, nothing retained
};

// Runs the same strategy once with a persistent solver and once with a fresh
// solver per bound probe. Both must report the same optimum; the call logs
// carry the per-mode effort.
inline ModeComparison compareModes(const ProblemFactory& factory, Sense sense,
                                   Strategy strategy, const CopOptions& opts = {},
                                   const Solver::Options& solverOptions = {}) {
    ModeComparison cmp;
    {
        Solver solver(solverOptions);
        solver.setDeadline(detail::copDeadline(opts));
        ModelBuilder b(solver);
        IntOrderVar objective = factory(solver, b);
        detail::NativeProbe probe(solver, objective, sense);
        cmp.native = detail::optimizeWith(probe, objective.lo, objective.hi, sense,
                                          strategy, opts);
    }
    {
        int lo, hi;
        {
            Solver scratch;
            ModelBuilder b(scratch);
            IntOrderVar objective = factory(scratch, b);
            lo = objective.lo;
            hi = objective.hi;
        }
        detail::FreshProbe probe(factory, sense, solverOptions,
                                 detail::copDeadline(opts));
        cmp.perCall = detail::optimizeWith(probe, lo, hi, sense, strategy, opts);
    }
    return cmp;
}

inline std::string copCallLogCsv(const std::vector<CopCall>& log) {
    std::ostringstream out;
    out << "call,bound,verdict,decisions,conflicts,millis\n";
    for (size_t i = 0; i < log.size(); ++i) {
        out << i + 1 << ',' << log[i].bound << ',' << toString(log[i].verdict) << ','
            << log[i].decisions << ',' << log[i].conflicts << ',' << log[i].millis
            << '\n';
    }
    return out.str();
}

}  // namespace incsat
