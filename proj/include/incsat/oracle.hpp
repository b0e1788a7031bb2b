#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "incsat/lit.hpp"
#include "incsat/mining.hpp"
#include "incsat/mrcpsp.hpp"

// Brute-force reference implementations, used as ground truth by the test
// suites. Everything here enumerates exhaustively and on purpose reimplements
// the task definitions directly, without touching the solver or any encoding
// machinery. Inputs beyond the budgets are rejected rather than ground through.
namespace incsat::oracle {

constexpr int kMaxVars = 20;
constexpr int kMaxItems = 12;
constexpr int kMaxJobs = 5;

inline void requireVarBudget(int numVars) {
    if (numVars < 0 || numVars > kMaxVars)
        throw std::invalid_argument("oracle: variable budget exceeded");
}

// Assignments are bitmasks: bit v-1 set means variable v is true.
inline bool evalLit(uint32_t assignment, Lit l) {
    bool v = (assignment >> (l.var() - 1)) & 1u;
    return l.isPositive() ? v : !v;
}

inline bool evalClause(uint32_t assignment, const std::vector<Lit>& clause) {
    for (Lit l : clause)
        if (evalLit(assignment, l)) return true;
    return false;
}

inline bool evalCnf(uint32_t assignment, const std::vector<std::vector<Lit>>& clauses) {
    for (const auto& c : clauses)
        if (!evalClause(assignment, c)) return false;
    return true;
}

inline std::vector<uint32_t> allModels(const std::vector<std::vector<Lit>>& clauses,
                                       int numVars) {
    requireVarBudget(numVars);
    std::vector<uint32_t> models;
    uint64_t total = 1ull << numVars;
    for (uint64_t a = 0; a < total; ++a) {
        if (evalCnf(static_cast<uint32_t>(a), clauses)) models.push_back(static_cast<uint32_t>(a));
    }
    return models;
}

inline bool satisfiable(const std::vector<std::vector<Lit>>& clauses, int numVars) {
    requireVarBudget(numVars);
    uint64_t total = 1ull << numVars;
    for (uint64_t a = 0; a < total; ++a)
        if (evalCnf(static_cast<uint32_t>(a), clauses)) return true;
    return false;
}

// Distinct assignments to the projection variables extendable to a model.
// Each result packs the projected values in projection order (bit i =
// value of projection[i]).
inline std::set<uint32_t> enumerateModels(const std::vector<std::vector<Lit>>& clauses,
                                          int numVars,
                                          const std::vector<int>& projection) {
    requireVarBudget(numVars);
    std::set<uint32_t> projected;
    uint64_t total = 1ull << numVars;
    for (uint64_t a = 0; a < total; ++a) {
        if (!evalCnf(static_cast<uint32_t>(a), clauses)) continue;
        uint32_t key = 0;
        for (size_t i = 0; i < projection.size(); ++i) {
            if ((a >> (projection[i] - 1)) & 1u) key |= 1u << i;
        }
        projected.insert(key);
    }
    return projected;
}

// Best value of base + popcount(valueBits) over all models, or nullopt when
// the formula is unsatisfiable. The bits typically form an order-encoding
// ladder whose consistency clauses are part of the formula.
inline std::optional<int> optimumOf(const std::vector<std::vector<Lit>>& clauses,
                                    int numVars, const std::vector<int>& valueBits,
                                    int base, bool maximise) {
    requireVarBudget(numVars);
    std::optional<int> best;
    uint64_t total = 1ull << numVars;
    for (uint64_t a = 0; a < total; ++a) {
        if (!evalCnf(static_cast<uint32_t>(a), clauses)) continue;
        int value = base;
        for (int v : valueBits)
            if ((a >> (v - 1)) & 1u) ++value;
        if (!best || (maximise ? value > *best : value < *best)) best = value;
    }
    return best;
}

// ---- pattern mining ----

namespace detail {

struct MaskInfo {
    int support = 0;
    int posSupport = 0;
    int negSupport = 0;
    uint32_t posCover = 0;  // bit t = transaction t covered
    uint32_t negCover = 0;
    int value = 0;
    int cost = 0;
    bool feasible = false;
};

inline bool maskSubset(uint32_t a, uint32_t b) { return (a & ~b) == 0; }

// Dominance relations, restated directly from the task definitions.
inline bool maskDominates(const MiningTask& task, uint32_t a, const MaskInfo& ia,
                          uint32_t b, const MaskInfo& ib) {
    if (a == b) return false;
    switch (task.kind) {
        case MiningKind::Cfis:
            return maskSubset(b, a) && ia.support == ib.support;
        case MiningKind::Gfis:
            return maskSubset(a, b) && ia.support == ib.support;
        case MiningKind::Mrim:
            return maskSubset(a, b);
        case MiningKind::Dfis:
            return maskSubset(b, a) && ia.posSupport == ib.posSupport &&
                   ia.negSupport == ib.negSupport;
        case MiningKind::Rsd: {
            if (!maskSubset(ib.posCover, ia.posCover)) return false;
            if (!maskSubset(ia.negCover, ib.negCover)) return false;
            if (ia.posCover == ib.posCover && ia.negCover == ib.negCover)
                return maskSubset(b, a);
            return true;
        }
    }
    return false;
}

}  // namespace detail

// Exhaustive mining: every itemset is enumerated, its statistics computed by
// direct counting, and the task definition applied literally. A pattern is a
// solution when no other admissible pattern dominates it.
inline std::vector<PatternSolution> minePatterns(const TransactionDb& db,
                                                 const MiningTask& task) {
    if (db.itemCount > kMaxItems)
        throw std::invalid_argument("oracle: item budget exceeded");
    if (db.size() > 31)
        throw std::invalid_argument("oracle: transaction budget exceeded");
    if (needsLabels(task.kind) && !db.labelled())
        throw std::invalid_argument("oracle: task requires labels");

    int m = db.itemCount;
    size_t nMasks = size_t{1} << m;
    std::vector<uint32_t> transMask(db.size(), 0);
    for (size_t t = 0; t < db.size(); ++t)
        for (int item : db.transactions[t]) transMask[t] |= 1u << (item - 1);

    std::vector<detail::MaskInfo> info(nMasks);
    for (size_t x = 0; x < nMasks; ++x) {
        detail::MaskInfo& mi = info[x];
        for (size_t t = 0; t < db.size(); ++t) {
            if (!detail::maskSubset(static_cast<uint32_t>(x), transMask[t])) continue;
            ++mi.support;
            if (db.labelled()) {
                if (db.labels[t] > 0) {
                    ++mi.posSupport;
                    mi.posCover |= 1u << t;
                } else {
                    ++mi.negSupport;
                    mi.negCover |= 1u << t;
                }
            }
        }
        for (int i = 0; i < m; ++i) {
            if ((x >> i) & 1u) {
                if (!task.itemValues.empty()) mi.value += task.itemValues[i];
                if (!task.itemCosts.empty()) mi.cost += task.itemCosts[i];
            }
        }
        switch (task.kind) {
            case MiningKind::Mrim: mi.feasible = mi.support < task.minSupport; break;
            case MiningKind::Dfis:
                mi.feasible = mi.posSupport - mi.negSupport >= task.threshold;
                break;
            default: mi.feasible = mi.support >= task.minSupport; break;
        }
        if (!task.itemValues.empty() && mi.value < task.minValue) mi.feasible = false;
        if (!task.itemCosts.empty() && mi.cost > task.maxCost) mi.feasible = false;
    }

    std::vector<PatternSolution> out;
    for (size_t x = 0; x < nMasks; ++x) {
        if (!info[x].feasible) continue;
        if (x == 0 && task.excludeEmpty) continue;
        bool dominated = false;
        for (size_t y = 0; y < nMasks && !dominated; ++y) {
            if (y == x || !info[y].feasible) continue;
            dominated = detail::maskDominates(task, static_cast<uint32_t>(y), info[y],
                                              static_cast<uint32_t>(x), info[x]);
        }
        if (dominated) continue;
        PatternSolution sol;
        for (int i = 0; i < m; ++i)
            if ((x >> i) & 1u) sol.itemset.push_back(i + 1);
        sol.support = info[x].support;
        sol.posSupport = info[x].posSupport;
        sol.negSupport = info[x].negSupport;
        for (size_t t = 0; t < db.size(); ++t) {
            if ((info[x].posCover >> t) & 1u) sol.posCover.push_back(static_cast<int>(t));
            if ((info[x].negCover >> t) & 1u) sol.negCover.push_back(static_cast<int>(t));
        }
        out.push_back(std::move(sol));
    }
    return out;
}

// ---- project scheduling ----

// Exhaustive mode-and-start search in topological order: every start from the
// earliest precedence-feasible time up to the horizon is tried, renewable
// profiles are maintained incrementally, and the best end-dummy start wins.
inline std::optional<int> optimumMakespan(const MrcpspInstance& inst) {
    if (inst.jobCount() > kMaxJobs + 2)
        throw std::invalid_argument("oracle: job budget exceeded");
    if (inst.horizon > 14)
        throw std::invalid_argument("oracle: horizon budget exceeded");

    int n = inst.jobCount();
    int h = inst.horizon;
    std::vector<int> order = incsat::detail::topoOrder(inst);
    std::vector<std::vector<int>> preds(n);
    for (int j = 0; j < n; ++j)
        for (int s : inst.successors[j]) preds[s].push_back(j);

    std::optional<int> best;
    std::vector<int> mode(n, 0);
    std::vector<int> start(n, 0);
    size_t nRes = inst.renewableNames.size();
    std::vector<std::vector<int>> load(nRes, std::vector<int>(h + 2, 0));

    std::function<void(size_t)> place = [&](size_t idx) {
        if (idx == order.size()) {
            int makespan = start[inst.endDummy];
            if (!best || makespan < *best) best = makespan;
            return;
        }
        int j = order[idx];
        int d = inst.duration[j][mode[j]];
        int lowest = 1;
        for (int p : preds[j])
            lowest = std::max(lowest, start[p] + inst.duration[p][mode[p]]);
        for (int st = lowest; st <= h; ++st) {
            if (j == inst.startDummy && st != 1) break;
            if (j == inst.endDummy && best && st >= *best) break;
            bool fits = true;
            for (size_t r = 0; r < nRes && fits; ++r) {
                int use = inst.usageRenewable[j][mode[j]][r];
                if (use == 0) continue;
                for (int t = st; t < st + d && t <= h; ++t) {
                    if (load[r][t] + use > inst.renewableLimits[r]) {
                        fits = false;
                        break;
                    }
                }
            }
            if (!fits) continue;
            for (size_t r = 0; r < nRes; ++r) {
                int use = inst.usageRenewable[j][mode[j]][r];
                for (int t = st; t < st + d && t <= h; ++t) load[r][t] += use;
            }
            start[j] = st;
            place(idx + 1);
            for (size_t r = 0; r < nRes; ++r) {
                int use = inst.usageRenewable[j][mode[j]][r];
                for (int t = st; t < st + d && t <= h; ++t) load[r][t] -= use;
            }
        }
    };

    std::function<void(int)> chooseMode = [&](int j) {
        if (j == n) {
            for (size_t r = 0; r < inst.nonRenewableNames.size(); ++r) {
                int sum = 0;
                for (int k = 0; k < n; ++k) sum += inst.usageNonRenewable[k][mode[k]][r];
                if (sum > inst.nonRenewableLimits[r]) return;
            }
            place(0);
            return;
        }
        for (int m = 0; m < inst.modeCount(j); ++m) {
            mode[j] = m;
            chooseMode(j + 1);
        }
    };
    chooseMode(0);
    return best;
}

}  // namespace incsat::oracle
