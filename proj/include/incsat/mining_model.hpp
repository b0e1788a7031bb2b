#pragma once

#include <optional>
#include <vector>

#include "incsat/builder.hpp"
#include "incsat/mining.hpp"

namespace incsat {

// SAT decision layer of a mining task: one selection literal per item, one
// cover literal per transaction, order-encoded supports.
struct MiningModel {
    std::vector<Lit> itemLits;   // [i-1] selects item i
    std::vector<int> itemVars;   // projection for enumeration
    std::vector<Lit> coverLits;  // [t] itemset covered by transaction t
    IntOrderVar size;            // |itemset|, shared by all level restrictions
    std::optional<IntOrderVar> support;     // total support (all but DFIS)
    std::optional<IntOrderVar> posSupport;  // DFIS
    std::optional<IntOrderVar> negSupport;  // DFIS
};

namespace detail {

inline void addWeightedBits(std::vector<Lit>& bits, Lit l, int weight) {
    for (int k = 0; k < weight; ++k) bits.push_back(l);
}

}  // namespace detail

// Posts the per-solution part of the task: cover channeling
// c_t <-> (itemset subset of transaction t), support sums, the
// frequency/rarity/discriminativeness constraint, the optional value and
// cost side constraints, and the empty-itemset exclusion clause.
inline MiningModel buildBaseModel(const TransactionDb& db, const MiningTask& task,
                                  ModelBuilder& b) {
    validateTask(db, task);
    int m = db.itemCount;
    int total = static_cast<int>(db.size());
    MiningModel model;

    for (int i = 1; i <= m; ++i) {
        Lit l = b.newLit();
        model.itemLits.push_back(l);
        model.itemVars.push_back(l.var());
    }
    // itemset cardinality, channelled once so every level restriction is just
    // a pair of guarded threshold assertions on the same counting registers
    model.size = b.intVar(0, m);
    b.boolSumEq(model.itemLits, model.size);

    for (int t = 0; t < total; ++t) {
        Lit c = b.newLit();
        model.coverLits.push_back(c);
        std::vector<uint8_t> inTrans(m + 1, 0);
        for (int item : db.transactions[t]) inTrans[item] = 1;
        std::vector<Lit> covered{c};
        for (int i = 1; i <= m; ++i) {
            if (inTrans[i]) continue;
            Lit x = model.itemLits[i - 1];
            b.addClause({~c, ~x});
            covered.push_back(x);
        }
        b.addClause(covered);
    }

    if (task.kind == MiningKind::Dfis) {
        std::vector<Lit> posBits, negBits;
        for (int t = 0; t < total; ++t)
            (db.labels[t] > 0 ? posBits : negBits).push_back(model.coverLits[t]);
        model.posSupport = b.intVar(0, static_cast<int>(posBits.size()));
        model.negSupport = b.intVar(0, static_cast<int>(negBits.size()));
        b.boolSumEq(posBits, *model.posSupport);
        b.boolSumEq(negBits, *model.negSupport);
        // posSupport - negSupport >= threshold
        for (int v = 0; v <= static_cast<int>(negBits.size()); ++v) {
            Lit premise = model.negSupport->geq(v);
            Lit conclusion = model.posSupport->geq(v + task.threshold);
            b.addClause({~premise, conclusion});
        }
    } else {
        int lo = task.kind == MiningKind::Mrim ? 0 : task.minSupport;
        int hi = task.kind == MiningKind::Mrim ? task.minSupport - 1 : total;
        model.support = b.intVar(lo, hi);
        b.boolSumEq(model.coverLits, *model.support);
    }

    if (!task.itemValues.empty()) {
        std::vector<Lit> bits;
        int sum = 0;
        for (int i = 1; i <= m; ++i) {
            detail::addWeightedBits(bits, model.itemLits[i - 1], task.itemValues[i - 1]);
            sum += task.itemValues[i - 1];
        }
        if (task.minValue > sum) {
            b.addClause(std::initializer_list<Lit>{});  // unattainable
        } else if (task.minValue > 0) {
            IntOrderVar v = b.intVar(task.minValue, sum);
            b.boolSumEq(bits, v);
        }
    }
    if (!task.itemCosts.empty()) {
        std::vector<Lit> bits;
        int sum = 0;
        for (int i = 1; i <= m; ++i) {
            detail::addWeightedBits(bits, model.itemLits[i - 1], task.itemCosts[i - 1]);
            sum += task.itemCosts[i - 1];
        }
        if (task.maxCost < 0) {
            b.addClause(std::initializer_list<Lit>{});
        } else if (task.maxCost < sum) {
            IntOrderVar v = b.intVar(0, task.maxCost);
            b.boolSumEq(bits, v);
        }
    }

    if (task.excludeEmpty) b.addClause(model.itemLits);
    return model;
}

// Guarded exactly-l restriction over the item literals; active while the
// returned group's selector is assumed.
inline ClauseGroup levelRestriction(ModelBuilder& b, const MiningModel& model, int level) {
    ClauseGroup group = b.newGroup();
    for (Lit l : b.eqLits(model.size, level)) b.addToGroup(group, {l});
    return group;
}

// Reads one pattern out of the current model.
inline PatternSolution extractSolution(const TransactionDb& db, const MiningModel& model,
                                       const Solver& s) {
    PatternSolution sol;
    for (size_t i = 0; i < model.itemLits.size(); ++i)
        if (s.value(model.itemLits[i])) sol.itemset.push_back(static_cast<int>(i) + 1);
    if (model.support) sol.support = model.support->valueIn(s);
    if (model.posSupport) sol.posSupport = model.posSupport->valueIn(s);
    if (model.negSupport) sol.negSupport = model.negSupport->valueIn(s);
    if (model.posSupport) sol.support = sol.posSupport + sol.negSupport;
    if (db.labelled()) {
        int pos = 0, neg = 0;
        for (size_t t = 0; t < db.size(); ++t) {
            if (!s.value(model.coverLits[t])) continue;
            if (db.labels[t] > 0) {
                sol.posCover.push_back(static_cast<int>(t));
                ++pos;
            } else {
                sol.negCover.push_back(static_cast<int>(t));
                ++neg;
            }
        }
        if (!model.posSupport) {
            sol.posSupport = pos;
            sol.negSupport = neg;
        }
    }
    return sol;
}

// One dominance-blocking clause per found solution. The clause forbids every
// future assignment the solution dominates; support equalities ride on the
// order-encoding literals, RSD rides on the cover literals.
inline std::vector<std::vector<Lit>> blockingClauses(const TransactionDb& db,
                                                     const MiningTask& task,
                                                     const MiningModel& model,
                                                     const ModelBuilder& b,
                                                     const PatternSolution& sol) {
    int m = db.itemCount;
    std::vector<uint8_t> inSet(m + 1, 0);
    for (int i : sol.itemset) inSet[i] = 1;
    std::vector<Lit> clause;
    auto pushOutsideItems = [&] {
        for (int i = 1; i <= m; ++i)
            if (!inSet[i]) clause.push_back(model.itemLits[i - 1]);
    };
    auto pushInsideItemsNegated = [&] {
        for (int i : sol.itemset) clause.push_back(~model.itemLits[i - 1]);
    };
    auto pushNotEqual = [&](const IntOrderVar& x, int v) {
        for (Lit l : b.eqLits(x, v)) clause.push_back(~l);
    };
    switch (task.kind) {
        case MiningKind::Cfis:
            pushOutsideItems();
            pushNotEqual(*model.support, sol.support);
            break;
        case MiningKind::Gfis:
            pushInsideItemsNegated();
            pushNotEqual(*model.support, sol.support);
            break;
        case MiningKind::Mrim:
            pushInsideItemsNegated();
            break;
        case MiningKind::Dfis:
            pushOutsideItems();
            pushNotEqual(*model.posSupport, sol.posSupport);
            pushNotEqual(*model.negSupport, sol.negSupport);
            break;
        case MiningKind::Rsd: {
            std::vector<uint8_t> inPos(db.size(), 0), inNeg(db.size(), 0);
            for (int t : sol.posCover) inPos[t] = 1;
            for (int t : sol.negCover) inNeg[t] = 1;
            for (size_t t = 0; t < db.size(); ++t) {
                if (db.labels[t] > 0 && !inPos[t]) clause.push_back(model.coverLits[t]);
                if (db.labels[t] < 0 && inNeg[t]) clause.push_back(~model.coverLits[t]);
            }
            pushOutsideItems();  // same-cover escape: only sub-itemsets are dominated
            break;
        }
    }
    return {clause};
}

// The empty itemset never appears in the output but still participates in
// dominance (a generator with full support, or rare when nothing is
// frequent). Its statistics and admissibility:
inline PatternSolution emptySolution(const TransactionDb& db) {
    PatternSolution sol;
    PatternInfo info = computeInfo(db, {});
    sol.support = info.support;
    sol.posSupport = info.posSupport;
    sol.negSupport = info.negSupport;
    sol.posCover = info.posCover;
    sol.negCover = info.negCover;
    return sol;
}

inline bool emptyPatternFeasible(const TransactionDb& db, const MiningTask& task) {
    return localFeasible(db, task, {}, computeInfo(db, {}));
}

}  // namespace incsat
