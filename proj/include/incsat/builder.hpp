#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "incsat/solver.hpp"

namespace incsat {

// Order-encoded bounded integer: one literal per threshold "X >= v" for
// v in (lo, hi], chained into a monotone ladder. Bounds collapse to the
// builder's constant literal so geq() is total.
struct IntOrderVar {
    int lo = 0;
    int hi = 0;
    std::vector<Lit> thresholds;  // thresholds[i] means X >= lo+1+i
    Lit constTrue;

    int domainSize() const { return hi - lo + 1; }

    Lit geq(int v) const {
        if (v <= lo) return constTrue;
        if (v > hi) return ~constTrue;
        return thresholds[v - lo - 1];
    }

    // Value under the model of the last SAT call.
    int valueIn(const Solver& s) const {
        int v = lo;
        for (size_t i = 0; i < thresholds.size(); ++i) {
            if (!s.value(thresholds[i])) break;
            v = lo + 1 + static_cast<int>(i);
        }
        return v;
    }

    // Value under a stored model snapshot.
    int valueInModel(const std::vector<int8_t>& model) const {
        int v = lo;
        for (size_t i = 0; i < thresholds.size(); ++i) {
            Lit l = thresholds[i];
            int8_t mv = model[l.var() - 1];
            if (!(l.isPositive() ? mv > 0 : mv < 0)) break;
            v = lo + 1 + static_cast<int>(i);
        }
        return v;
    }
};

// A removable constraint bundle: members are clauses weakened by the
// selector's negation, so they bind exactly while the selector is assumed.
struct ClauseGroup {
    Lit selector;
    bool retired = false;
};

// Model-construction layer over one solver: fresh literals, order-encoded
// integers, cardinality constraints and boolean sums via sequential counting
// networks, and assumption-guarded clause groups.
class ModelBuilder {
public:
    explicit ModelBuilder(Solver& solver) : solver_(solver) {}

    Solver& solver() { return solver_; }
    const Solver& solver() const { return solver_; }

    Lit newLit() { return solver_.newVar(); }

    Lit trueLit() {
        if (!true_.valid()) {
            true_ = solver_.newVar();
            solver_.addClause({true_});
        }
        return true_;
    }

    Lit falseLit() { return ~trueLit(); }

    void addClause(std::span<const Lit> lits) { solver_.addClause(lits); }
    void addClause(std::initializer_list<Lit> lits) { solver_.addClause(lits); }

    IntOrderVar intVar(int lo, int hi) {
        if (lo > hi) throw std::invalid_argument("intVar: lo > hi");
        IntOrderVar x;
        x.lo = lo;
        x.hi = hi;
        x.constTrue = trueLit();
        for (int v = lo + 1; v <= hi; ++v) x.thresholds.push_back(newLit());
        for (size_t i = 1; i < x.thresholds.size(); ++i)
            solver_.addClause({~x.thresholds[i], x.thresholds[i - 1]});
        return x;
    }

    // Conjunction of at most two literals meaning X = v; the boundary values
    // collapse to a single literal and a singleton domain to none at all.
    std::vector<Lit> eqLits(const IntOrderVar& x, int v) const {
        if (v < x.lo || v > x.hi) throw std::out_of_range("eqLits: value outside domain");
        std::vector<Lit> conj;
        if (v > x.lo) conj.push_back(x.geq(v));
        if (v < x.hi) conj.push_back(~x.geq(v + 1));
        return conj;
    }

    // Channels the number of true bits into x: X >= v iff at least v bits
    // are true, for every v in x's domain. Narrowing x's domain below 0..n
    // constrains the count; a window the count can never enter makes the
    // formula unsatisfiable by construction.
    void boolSumEq(std::span<const Lit> bits, const IntOrderVar& x) {
        int n = static_cast<int>(bits.size());
        if (x.lo < 0 || x.hi > n)
            throw std::invalid_argument("boolSumEq: domain must lie within 0..n");
        int jmax = std::min(n, x.hi + 1);
        auto reg = countingRegisters(bits, jmax, {});
        auto regAt = [&](int i, int j) -> Lit {
            if (j <= 0) return trueLit();
            if (j > i || j > jmax) return falseLit();
            return reg[i][j - 1];
        };
        for (int v = std::max(1, x.lo + 1); v <= x.hi; ++v) {
            solver_.addClause({~x.geq(v), regAt(n, v)});
            solver_.addClause({x.geq(v), ~regAt(n, v)});
        }
        if (x.lo >= 1) solver_.addClause({regAt(n, x.lo)});
        if (x.hi < n) solver_.addClause({~regAt(n, x.hi + 1)});
    }

    // Exactly-k over the bits. With a group selector every emitted clause is
    // weakened by its negation, so the constraint binds only under that
    // assumption and dies with the selector.
    void cardinalityEq(std::span<const Lit> bits, int k,
                       std::optional<Lit> groupSelector = std::nullopt) {
        int n = static_cast<int>(bits.size());
        if (k < 0 || k > n) throw std::out_of_range("cardinalityEq: k out of range");
        std::vector<Lit> extra;
        if (groupSelector) extra.push_back(~*groupSelector);
        std::vector<Lit> clause;
        if (k == 0) {
            for (Lit b : bits) {
                clause = extra;
                clause.push_back(~b);
                solver_.addClause(clause);
            }
            return;
        }
        if (k == n) {
            for (Lit b : bits) {
                clause = extra;
                clause.push_back(b);
                solver_.addClause(clause);
            }
            return;
        }
        int jmax = k + 1;
        auto reg = countingRegisters(bits, jmax, extra);
        clause = extra;
        clause.push_back(reg[n][k - 1]);
        solver_.addClause(clause);
        clause = extra;
        clause.push_back(~reg[n][k]);
        solver_.addClause(clause);
    }

    ClauseGroup newGroup() { return ClauseGroup{newLit(), false}; }

    void addToGroup(ClauseGroup& group, std::span<const Lit> lits) {
        if (group.retired) throw std::logic_error("addToGroup: group already retired");
        std::vector<Lit> clause(lits.begin(), lits.end());
        clause.push_back(~group.selector);
        solver_.addClause(clause);
    }

    void addToGroup(ClauseGroup& group, std::initializer_list<Lit> lits) {
        addToGroup(group, std::span<const Lit>(lits.begin(), lits.size()));
    }

    // Fixes the selector false: members and any learned clauses that depend
    // on the selector become permanently satisfied. Idempotent.
    void retireGroup(ClauseGroup& group) {
        if (group.retired) return;
        solver_.addClause({~group.selector});
        group.retired = true;
    }

private:
    Solver& solver_;
    Lit true_;

    // Sequential counting network: rows[i][j-1] <-> at least j of the first
    // i bits are true, for j up to jmax. Every clause is extended with the
    // literals in `extra`.
    std::vector<std::vector<Lit>> countingRegisters(std::span<const Lit> bits, int jmax,
                                                    std::span<const Lit> extra) {
        int n = static_cast<int>(bits.size());
        std::vector<std::vector<Lit>> rows(n + 1);
        for (int i = 1; i <= n; ++i) {
            rows[i].resize(std::min(i, jmax));
            for (auto& l : rows[i]) l = newLit();
        }
        auto at = [&](int i, int j) -> Lit {
            if (j <= 0) return trueLit();
            if (j > i || j > jmax) return falseLit();
            return rows[i][j - 1];
        };
        std::vector<Lit> clause;
        auto emit = [&](std::initializer_list<Lit> lits) {
            clause.assign(extra.begin(), extra.end());
            clause.insert(clause.end(), lits.begin(), lits.end());
            solver_.addClause(clause);
        };
        for (int i = 1; i <= n; ++i) {
            Lit b = bits[i - 1];
            for (int j = 1; j <= std::min(i, jmax); ++j) {
                Lit s = at(i, j);
                emit({~at(i - 1, j), s});
                emit({~at(i - 1, j - 1), ~b, s});
                emit({~s, at(i - 1, j), at(i - 1, j - 1)});
                emit({~s, at(i - 1, j), b});
            }
        }
        return rows;
    }
};

}  // namespace incsat
