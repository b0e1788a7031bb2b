#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "incsat/lit.hpp"

namespace incsat {

// Incremental CDCL solver with an ipasir-like surface: clauses are
// irrevocable, assumptions hold for one call, learned clauses and
// heuristic state persist across calls. Two-watched-literal propagation,
// first-UIP learning, VSIDS branching with phase saving, Luby restarts,
// LBD-based learned-clause reduction.
class Solver {
public:
    struct Options {
        int restartBase = 100;        // conflicts per Luby unit
        size_t learnedCap = 50000;    // reduce learned db beyond this
        bool guardEnumeration = true; // solveAll blocks guarded by assumptions
        uint64_t seed = 0;            // != 0 jitters initial activities
        double randomDecisionFreq = 0.0;
    };

    Solver() : Solver(Options{}) {}
    explicit Solver(const Options& opts) : opts_(opts), rng_(opts.seed) {}

    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;
    Solver(Solver&&) = default;
    Solver& operator=(Solver&&) = default;

    int numVars() const { return static_cast<int>(assign_.size()); }
    bool okay() const { return ok_; }
    Result lastResult() const { return lastResult_; }

    Lit newVar() {
        assign_.push_back(0);
        level_.push_back(0);
        reason_.push_back(-1);
        phase_.push_back(0);
        seen_.push_back(0);
        watches_.emplace_back();
        watches_.emplace_back();
        double act = 0.0;
        if (opts_.seed != 0) {
            act = std::uniform_real_distribution<double>(0.0, 1e-6)(rng_);
        }
        activity_.push_back(act);
        int v = numVars();
        heapInsert(v - 1);
        return Lit::positive(v);
    }

    // Adds a permanent clause. Duplicate literals are dropped, tautologies
    // are silently discarded, and an empty clause puts the solver into a
    // sticky UNSAT state instead of raising an error.
    void addClause(std::span<const Lit> lits) {
        assert(decisionLevel() == 0);
        for (Lit l : lits) {
            if (!l.valid() || l.var() > numVars())
                throw std::invalid_argument("clause references unallocated variable");
        }
        if (!ok_) return;
        if (lits.empty()) {
            ok_ = false;
            return;
        }
        tmpClause_.assign(lits.begin(), lits.end());
        std::sort(tmpClause_.begin(), tmpClause_.end());
        tmpClause_.erase(std::unique(tmpClause_.begin(), tmpClause_.end()), tmpClause_.end());
        for (size_t i = 0; i + 1 < tmpClause_.size(); ++i) {
            if (tmpClause_[i].var() == tmpClause_[i + 1].var()) return;  // l and ~l
        }
        // Simplify against root-level facts.
        size_t j = 0;
        for (Lit l : tmpClause_) {
            int8_t v = litValue(l);
            if (v > 0) return;  // already satisfied
            if (v == 0) tmpClause_[j++] = l;
        }
        tmpClause_.resize(j);
        if (tmpClause_.empty()) {
            ok_ = false;
            return;
        }
        int ref = static_cast<int>(clauses_.size());
        clauses_.push_back(Clause{tmpClause_, false, false, 0, 0.0});
        ++permanentCount_;
        if (tmpClause_.size() == 1) {
            uncheckedEnqueue(tmpClause_[0], -1);
        } else {
            attach(ref);
        }
    }

    void addClause(std::initializer_list<Lit> lits) {
        addClause(std::span<const Lit>(lits.begin(), lits.size()));
    }

    // Enforces a literal for the next solve call only.
    void assume(Lit l) {
        if (!l.valid() || l.var() > numVars())
            throw std::invalid_argument("assumption references unallocated variable");
        assumptions_.push_back(l);
    }

    const std::vector<Lit>& assumptions() const { return assumptions_; }

    void setDeadline(std::optional<std::chrono::steady_clock::time_point> d) {
        deadline_ = d;
    }

    Result solve() {
        beginCall();
        failed_.clear();
        timedOut_ = false;
        Result status = Result::Unknown;
        if (!ok_) {
            status = Result::Unsat;
        } else {
            int restarts = 0;
            while (status == Result::Unknown) {
                if (expired()) {
                    timedOut_ = true;
                    break;
                }
                int budget = static_cast<int>(luby(2.0, restarts) * opts_.restartBase);
                status = search(budget);
                ++restarts;
            }
        }
        assumptions_.clear();
        lastResult_ = status;
        return status;
    }

    bool timedOut() const { return timedOut_; }

    // Value of a literal in the model of the last successful solve.
    bool value(Lit l) const {
        if (lastResult_ != Result::Sat)
            throw std::logic_error("value() requires a SAT result");
        if (!l.valid() || static_cast<size_t>(l.var()) > model_.size())
            throw std::out_of_range("literal not covered by the current model");
        int8_t v = model_[l.var() - 1];
        return l.isPositive() ? v > 0 : v < 0;
    }

    // Snapshot of the last model, one entry per variable (+1 / -1).
    const std::vector<int8_t>& model() const {
        if (lastResult_ != Result::Sat)
            throw std::logic_error("model() requires a SAT result");
        return model_;
    }

    // Enumerates every distinct assignment to the projection variables that
    // extends to a full model under the current assumptions. Each model is
    // excluded by a blocking clause; when guardEnumeration is set, blocking
    // clauses carry the negated assumptions so they go inert once the
    // assumption context is retired.
    long solveAll(std::span<const int> projectionVars,
                  const std::function<void(const Solver&)>& onSolution) {
        if (projectionVars.empty())
            throw std::invalid_argument("solveAll requires a nonempty projection");
        std::vector<Lit> context = assumptions_;
        std::vector<Lit> guard;
        if (opts_.guardEnumeration) {
            for (Lit a : context) guard.push_back(~a);
            std::sort(guard.begin(), guard.end());
            guard.erase(std::unique(guard.begin(), guard.end()), guard.end());
        }
        long count = 0;
        for (;;) {
            assumptions_ = context;
            Result r = solve();
            if (r != Result::Sat) break;
            ++count;
            if (onSolution) onSolution(*this);
            std::vector<Lit> block = guard;
            for (int v : projectionVars) {
                Lit p = Lit::positive(v);
                block.push_back(value(p) ? ~p : p);
            }
            addClause(block);
        }
        return count;
    }

    // After an UNSAT answer: a subset of the assumptions whose conjunction
    // with the permanent clauses is unsatisfiable.
    const std::vector<Lit>& failedAssumptions() const {
        if (lastResult_ == Result::Sat)
            throw std::logic_error("failedAssumptions() requires an UNSAT result");
        return failed_;
    }

    SolverStats statistics() const {
        SolverStats s = stats_;
        s.learnedCount = learnedRefs_.size();
        s.permanentCount = permanentCount_;
        s.totalClauses = permanentCount_ + learnedRefs_.size();
        return s;
    }

    // Live clause database (permanent and learned); entries with
    // deleted == true are tombstones from learned-db reduction.
    const std::vector<Clause>& clauses() const { return clauses_; }

private:
    struct Watcher {
        int cref;
        Lit blocker;
    };

    Options opts_;
    bool ok_ = true;
    bool timedOut_ = false;

    std::vector<Clause> clauses_;
    std::vector<int> learnedRefs_;
    size_t permanentCount_ = 0;

    std::vector<std::vector<Watcher>> watches_;  // indexed by Lit::code()
    std::vector<int8_t> assign_;                 // 0 undef, +1 true, -1 false
    std::vector<int> level_;
    std::vector<int> reason_;  // clause ref or -1
    std::vector<Lit> trail_;
    std::vector<int> trailLim_;
    size_t qhead_ = 0;

    std::vector<double> activity_;
    double varInc_ = 1.0;
    static constexpr double kVarDecay = 0.95;
    double claInc_ = 1.0;
    static constexpr double kClaDecay = 0.999;
    std::vector<uint8_t> phase_;
    std::vector<int> heap_;  // max-activity heap of var indices (0-based)
    std::vector<int> heapPos_;

    std::vector<Lit> assumptions_;
    std::vector<Lit> failed_;
    std::vector<int8_t> model_;
    Result lastResult_ = Result::Unknown;

    SolverStats stats_;
    std::vector<uint8_t> seen_;
    std::vector<Lit> tmpClause_;
    std::mt19937_64 rng_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    uint64_t deadlineCheck_ = 0;

    // ---- assignment plumbing ----

    int8_t varValue(int var0) const { return assign_[var0]; }
    int8_t litValue(Lit l) const {
        int8_t v = assign_[l.var() - 1];
        return l.isPositive() ? v : static_cast<int8_t>(-v);
    }

    int decisionLevel() const { return static_cast<int>(trailLim_.size()); }
    void newDecisionLevel() { trailLim_.push_back(static_cast<int>(trail_.size())); }

    void uncheckedEnqueue(Lit p, int from) {
        int v = p.var() - 1;
        assert(assign_[v] == 0);
        assign_[v] = p.isPositive() ? 1 : -1;
        level_[v] = decisionLevel();
        reason_[v] = from;
        trail_.push_back(p);
    }

    void cancelUntil(int lvl) {
        if (decisionLevel() <= lvl) return;
        int lim = trailLim_[lvl];
        for (int i = static_cast<int>(trail_.size()) - 1; i >= lim; --i) {
            int v = trail_[i].var() - 1;
            phase_[v] = trail_[i].isPositive() ? 1 : 0;
            assign_[v] = 0;
            reason_[v] = -1;
            heapInsert(v);
        }
        trail_.resize(lim);
        trailLim_.resize(lvl);
        if (qhead_ > trail_.size()) qhead_ = trail_.size();
    }

    // ---- watches ----

    void attach(int ref) {
        const Clause& c = clauses_[ref];
        assert(c.size() >= 2);
        watches_[(~c[0]).code()].push_back({ref, c[1]});
        watches_[(~c[1]).code()].push_back({ref, c[0]});
    }

    void detach(int ref) {
        const Clause& c = clauses_[ref];
        for (Lit w : {c[0], c[1]}) {
            auto& ws = watches_[(~w).code()];
            for (size_t i = 0; i < ws.size(); ++i) {
                if (ws[i].cref == ref) {
                    ws[i] = ws.back();
                    ws.pop_back();
                    break;
                }
            }
        }
    }

    // Returns the conflicting clause ref, or -1.
    int propagate() {
        while (qhead_ < trail_.size()) {
            Lit p = trail_[qhead_++];
            ++stats_.propagations;
            ++stats_.callPropagations;
            auto& ws = watches_[p.code()];
            size_t i = 0, j = 0;
            while (i < ws.size()) {
                Watcher w = ws[i++];
                if (litValue(w.blocker) > 0) {
                    ws[j++] = w;
                    continue;
                }
                Clause& c = clauses_[w.cref];
                Lit falseLit = ~p;
                if (c.lits[0] == falseLit) std::swap(c.lits[0], c.lits[1]);
                assert(c.lits[1] == falseLit);
                Lit first = c.lits[0];
                if (first != w.blocker && litValue(first) > 0) {
                    ws[j++] = {w.cref, first};
                    continue;
                }
                bool moved = false;
                for (size_t k = 2; k < c.lits.size(); ++k) {
                    if (litValue(c.lits[k]) >= 0) {
                        std::swap(c.lits[1], c.lits[k]);
                        watches_[(~c.lits[1]).code()].push_back({w.cref, first});
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = {w.cref, first};
                if (litValue(first) < 0) {
                    // conflict: keep remaining watches and bail out
                    while (i < ws.size()) ws[j++] = ws[i++];
                    ws.resize(j);
                    qhead_ = trail_.size();
                    return w.cref;
                }
                uncheckedEnqueue(first, w.cref);
            }
            ws.resize(j);
        }
        return -1;
    }

    // ---- conflict analysis ----

    int computeLbd(const std::vector<Lit>& lits) {
        int lbd = 0;
        thread_local std::vector<int> mark;
        thread_local int stamp = 0;
        ++stamp;
        if (mark.size() < trailLim_.size() + 2) mark.resize(trailLim_.size() + 2, 0);
        for (Lit l : lits) {
            int lv = level_[l.var() - 1];
            if (lv > 0) {
                if (static_cast<size_t>(lv) >= mark.size()) mark.resize(lv + 1, 0);
                if (mark[lv] != stamp) {
                    mark[lv] = stamp;
                    ++lbd;
                }
            }
        }
        return lbd;
    }

    // First-UIP learning. Fills `learnt` (asserting literal first) and
    // returns the backtrack level.
    int analyze(int conflRef, std::vector<Lit>& learnt) {
        learnt.clear();
        learnt.push_back(Lit());  // slot for the asserting literal
        int pathCount = 0;
        Lit p;
        int index = static_cast<int>(trail_.size()) - 1;
        int cref = conflRef;
        do {
            Clause& c = clauses_[cref];
            if (c.learned) bumpClause(cref);
            size_t start = p.valid() ? 1 : 0;
            for (size_t k = start; k < c.lits.size(); ++k) {
                Lit q = c.lits[k];
                int v = q.var() - 1;
                if (!seen_[v] && level_[v] > 0) {
                    seen_[v] = 1;
                    bumpVar(v);
                    if (level_[v] >= decisionLevel())
                        ++pathCount;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen_[trail_[index].var() - 1]) --index;
            p = trail_[index];
            cref = reason_[p.var() - 1];
            seen_[p.var() - 1] = 0;
            --index;
            --pathCount;
        } while (pathCount > 0);
        learnt[0] = ~p;

        int btLevel = 0;
        if (learnt.size() > 1) {
            size_t maxIdx = 1;
            for (size_t k = 2; k < learnt.size(); ++k) {
                if (level_[learnt[k].var() - 1] > level_[learnt[maxIdx].var() - 1])
                    maxIdx = k;
            }
            std::swap(learnt[1], learnt[maxIdx]);
            btLevel = level_[learnt[1].var() - 1];
        }
        for (Lit l : learnt) seen_[l.var() - 1] = 0;
        return btLevel;
    }

    // Which assumptions force the (currently false) assumption p.
    void analyzeFinal(Lit p) {
        failed_.clear();
        failed_.push_back(p);
        if (decisionLevel() == 0) return;
        seen_[p.var() - 1] = 1;
        for (int i = static_cast<int>(trail_.size()) - 1; i >= trailLim_[0]; --i) {
            int v = trail_[i].var() - 1;
            if (!seen_[v]) continue;
            if (reason_[v] == -1) {
                assert(level_[v] > 0);
                failed_.push_back(trail_[i]);
            } else {
                const Clause& c = clauses_[reason_[v]];
                for (size_t k = 1; k < c.lits.size(); ++k) {
                    int u = c.lits[k].var() - 1;
                    if (level_[u] > 0) seen_[u] = 1;
                }
            }
            seen_[v] = 0;
        }
        seen_[p.var() - 1] = 0;
    }

    // ---- heuristics ----

    void bumpVar(int v) {
        activity_[v] += varInc_;
        if (activity_[v] > 1e100) {
            for (double& a : activity_) a *= 1e-100;
            varInc_ *= 1e-100;
        }
        heapUpdate(v);
    }

    void decayVar() { varInc_ /= kVarDecay; }

    void bumpClause(int ref) {
        Clause& c = clauses_[ref];
        c.activity += claInc_;
        if (c.activity > 1e20) {
            for (int r : learnedRefs_) clauses_[r].activity *= 1e-20;
            claInc_ *= 1e-20;
        }
    }

    void decayClause() { claInc_ /= kClaDecay; }

    bool heapLess(int u, int v) const {
        return activity_[u] > activity_[v] || (activity_[u] == activity_[v] && u < v);
    }

    void heapInsert(int v) {
        if (static_cast<size_t>(v) >= heapPos_.size()) heapPos_.resize(v + 1, -1);
        if (heapPos_[v] >= 0) return;
        heapPos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        siftUp(heapPos_[v]);
    }

    void heapUpdate(int v) {
        if (static_cast<size_t>(v) < heapPos_.size() && heapPos_[v] >= 0) {
            siftUp(heapPos_[v]);
            siftDown(heapPos_[v]);
        }
    }

    void siftUp(int i) {
        while (i > 0) {
            int parent = (i - 1) >> 1;
            if (!heapLess(heap_[i], heap_[parent])) break;
            std::swap(heap_[i], heap_[parent]);
            heapPos_[heap_[i]] = i;
            heapPos_[heap_[parent]] = parent;
            i = parent;
        }
    }

    void siftDown(int i) {
        int n = static_cast<int>(heap_.size());
        for (;;) {
            int l = 2 * i + 1, r = 2 * i + 2, best = i;
            if (l < n && heapLess(heap_[l], heap_[best])) best = l;
            if (r < n && heapLess(heap_[r], heap_[best])) best = r;
            if (best == i) break;
            std::swap(heap_[i], heap_[best]);
            heapPos_[heap_[i]] = i;
            heapPos_[heap_[best]] = best;
            i = best;
        }
    }

    int heapPop() {
        int v = heap_[0];
        heapPos_[v] = -1;
        int last = heap_.back();
        heap_.pop_back();
        if (!heap_.empty()) {
            heap_[0] = last;
            heapPos_[last] = 0;
            siftDown(0);
        }
        return v;
    }

    Lit pickBranchLit() {
        if (opts_.randomDecisionFreq > 0.0 && !heap_.empty() &&
            std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < opts_.randomDecisionFreq) {
            int idx = std::uniform_int_distribution<int>(0, static_cast<int>(heap_.size()) - 1)(rng_);
            int v = heap_[idx];
            if (assign_[v] == 0)
                return phase_[v] ? Lit::positive(v + 1) : Lit::negative(v + 1);
        }
        while (!heap_.empty()) {
            int v = heapPop();
            if (assign_[v] == 0)
                return phase_[v] ? Lit::positive(v + 1) : Lit::negative(v + 1);
        }
        return Lit();
    }

    // ---- learned-clause db ----

    bool locked(int ref) const {
        const Clause& c = clauses_[ref];
        int v = c.lits[0].var() - 1;
        return reason_[v] == ref && assign_[v] != 0 && litValue(c.lits[0]) > 0;
    }

    void reduceLearned() {
        std::vector<int> cands;
        cands.reserve(learnedRefs_.size());
        for (int r : learnedRefs_) {
            const Clause& c = clauses_[r];
            if (c.size() > 2 && c.lbd > 2 && !locked(r)) cands.push_back(r);
        }
        std::sort(cands.begin(), cands.end(), [this](int a, int b) {
            const Clause& ca = clauses_[a];
            const Clause& cb = clauses_[b];
            if (ca.lbd != cb.lbd) return ca.lbd > cb.lbd;
            if (ca.activity != cb.activity) return ca.activity < cb.activity;
            return a < b;
        });
        size_t target = cands.size() / 2;
        for (size_t i = 0; i < target; ++i) {
            int r = cands[i];
            detach(r);
            clauses_[r].deleted = true;
            clauses_[r].lits.clear();
            clauses_[r].lits.shrink_to_fit();
        }
        learnedRefs_.erase(
            std::remove_if(learnedRefs_.begin(), learnedRefs_.end(),
                           [this](int r) { return clauses_[r].deleted; }),
            learnedRefs_.end());
        // keep headroom when most of the db is protected
        if (learnedRefs_.size() > opts_.learnedCap / 2)
            opts_.learnedCap = learnedRefs_.size() * 2;
    }

    // ---- search ----

    void beginCall() {
        stats_.callConflicts = 0;
        stats_.callDecisions = 0;
        stats_.callPropagations = 0;
        ++stats_.solveCalls;
    }

    bool expired() {
        if (!deadline_) return false;
        return std::chrono::steady_clock::now() >= *deadline_;
    }

    bool expiredThrottled() {
        if (!deadline_) return false;
        if ((++deadlineCheck_ & 1023) != 0) return false;
        return expired();
    }

    static double luby(double y, int i) {
        int size = 1, seq = 0;
        while (size < i + 1) {
            ++seq;
            size = 2 * size + 1;
        }
        while (size - 1 != i) {
            size = (size - 1) >> 1;
            --seq;
            i %= size;
        }
        return std::pow(y, seq);
    }

    Result search(int conflictBudget) {
        int conflicts = 0;
        std::vector<Lit> learnt;
        for (;;) {
            int confl = propagate();
            if (confl >= 0) {
                ++stats_.conflicts;
                ++stats_.callConflicts;
                ++conflicts;
                if (decisionLevel() == 0) {
                    ok_ = false;
                    return Result::Unsat;
                }
                int btLevel = analyze(confl, learnt);
                cancelUntil(btLevel);
                if (learnt.size() == 1) {
                    uncheckedEnqueue(learnt[0], -1);
                } else {
                    int ref = static_cast<int>(clauses_.size());
                    int lbd = computeLbd(learnt);
                    clauses_.push_back(Clause{learnt, true, false, lbd, claInc_});
                    learnedRefs_.push_back(ref);
                    attach(ref);
                    uncheckedEnqueue(learnt[0], ref);
                }
                decayVar();
                decayClause();
                if (learnedRefs_.size() > opts_.learnedCap) reduceLearned();
            } else {
                if (conflicts >= conflictBudget || expiredThrottled()) {
                    cancelUntil(0);
                    return Result::Unknown;
                }
                Lit next;
                while (decisionLevel() < static_cast<int>(assumptions_.size())) {
                    Lit p = assumptions_[decisionLevel()];
                    int8_t v = litValue(p);
                    if (v > 0) {
                        newDecisionLevel();  // already satisfied, placeholder level
                    } else if (v < 0) {
                        analyzeFinal(p);
                        cancelUntil(0);
                        return Result::Unsat;
                    } else {
                        next = p;
                        break;
                    }
                }
                if (!next.valid()) {
                    next = pickBranchLit();
                    if (!next.valid()) {
                        model_.assign(assign_.begin(), assign_.end());
                        cancelUntil(0);
                        return Result::Sat;
                    }
                    ++stats_.decisions;
                    ++stats_.callDecisions;
                }
                newDecisionLevel();
                uncheckedEnqueue(next, -1);
            }
        }
    }
};

}  // namespace incsat
