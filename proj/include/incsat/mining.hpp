#pragma once

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace incsat {

// Multiset of transactions over an item universe 1..itemCount, optionally
// class-labelled (+1 positive / -1 negative, all or none).
struct TransactionDb {
    int itemCount = 0;
    std::vector<std::vector<int>> transactions;  // each sorted, duplicate-free
    std::vector<int8_t> labels;                  // empty when unlabelled

    bool labelled() const { return !labels.empty(); }
    size_t size() const { return transactions.size(); }
};

enum class MiningKind { Cfis, Gfis, Mrim, Dfis, Rsd };

inline const char* toString(MiningKind k) {
    switch (k) {
        case MiningKind::Cfis: return "cfis";
        case MiningKind::Gfis: return "gfis";
        case MiningKind::Mrim: return "mrim";
        case MiningKind::Dfis: return "dfis";
        default: return "rsd";
    }
}

inline bool needsLabels(MiningKind k) {
    return k == MiningKind::Dfis || k == MiningKind::Rsd;
}

// Dominance flows from subsets to supersets for generator and minimal-rare
// mining, so those tasks search cardinality levels bottom-up.
inline bool ascendingLevels(MiningKind k) {
    return k == MiningKind::Gfis || k == MiningKind::Mrim;
}

struct MiningTask {
    MiningKind kind = MiningKind::Cfis;
    int minSupport = 1;  // frequency (CFIS/GFIS/RSD) or rarity bound (MRIM)
    int threshold = 0;   // DFIS: posSupport - negSupport >= threshold
    bool excludeEmpty = true;

    // Optional side constraints; active when the weight vector is nonempty
    // (indexed by item-1, must cover the universe).
    std::vector<int> itemValues;
    int minValue = 0;
    std::vector<int> itemCosts;
    int maxCost = 0;
};

struct PatternSolution {
    std::vector<int> itemset;  // sorted
    int support = 0;
    int posSupport = 0;
    int negSupport = 0;
    std::vector<int> posCover;  // transaction indices, sorted
    std::vector<int> negCover;
};

// ---- parsing ----

// FIMI-style text: one transaction per line of whitespace-separated item
// numbers, optionally prefixed by "+" or "-" as a class label.
inline TransactionDb parseDb(std::string_view text) {
    TransactionDb db;
    bool anyLabelled = false, anyUnlabelled = false;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        std::vector<std::string> toks;
        size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i > start) toks.emplace_back(line.substr(start, i - start));
        }
        if (toks.empty()) continue;

        int8_t label = 0;
        size_t first = 0;
        if (toks[0] == "+" || toks[0] == "-") {
            label = toks[0] == "+" ? 1 : -1;
            first = 1;
            anyLabelled = true;
        } else {
            anyUnlabelled = true;
        }
        std::vector<int> items;
        for (size_t t = first; t < toks.size(); ++t) {
            long v;
            try {
                size_t used = 0;
                v = std::stol(toks[t], &used);
                if (used != toks[t].size()) throw std::invalid_argument(toks[t]);
            } catch (const std::exception&) {
                throw std::invalid_argument("transaction db: bad token '" + toks[t] + "'");
            }
            if (v <= 0) throw std::invalid_argument("transaction db: items must be >= 1");
            items.push_back(static_cast<int>(v));
            db.itemCount = std::max(db.itemCount, static_cast<int>(v));
        }
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        db.transactions.push_back(std::move(items));
        if (label != 0) db.labels.push_back(label);
    }
    if (anyLabelled && anyUnlabelled)
        throw std::invalid_argument("transaction db: mixed labelled and unlabelled lines");
    return db;
}

// ---- direct pattern statistics ----

inline bool containsAll(const std::vector<int>& transaction, const std::vector<int>& itemset) {
    return std::includes(transaction.begin(), transaction.end(), itemset.begin(), itemset.end());
}

struct PatternInfo {
    int support = 0;
    int posSupport = 0;
    int negSupport = 0;
    std::vector<int> posCover;
    std::vector<int> negCover;
};

inline PatternInfo computeInfo(const TransactionDb& db, const std::vector<int>& itemset) {
    PatternInfo info;
    for (size_t t = 0; t < db.transactions.size(); ++t) {
        if (!containsAll(db.transactions[t], itemset)) continue;
        ++info.support;
        if (db.labelled()) {
            if (db.labels[t] > 0) {
                ++info.posSupport;
                info.posCover.push_back(static_cast<int>(t));
            } else {
                ++info.negSupport;
                info.negCover.push_back(static_cast<int>(t));
            }
        }
    }
    return info;
}

inline int weightSum(const std::vector<int>& weights, const std::vector<int>& itemset) {
    int sum = 0;
    for (int i : itemset) sum += weights[i - 1];
    return sum;
}

// Single-solution constraints of a task: frequency/rarity/discriminativeness
// plus the optional value and cost side constraints.
inline bool localFeasible(const TransactionDb& db, const MiningTask& task,
                          const std::vector<int>& itemset, const PatternInfo& info) {
    (void)db;
    switch (task.kind) {
        case MiningKind::Mrim:
            if (info.support >= task.minSupport) return false;
            break;
        case MiningKind::Dfis:
            if (info.posSupport - info.negSupport < task.threshold) return false;
            break;
        default:
            if (info.support < task.minSupport) return false;
            break;
    }
    if (!task.itemValues.empty() && weightSum(task.itemValues, itemset) < task.minValue)
        return false;
    if (!task.itemCosts.empty() && weightSum(task.itemCosts, itemset) > task.maxCost)
        return false;
    return true;
}

// ---- dominance ----

inline bool isSubset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Whether solution `a` dominates solution `b` under the task's relation.
// Both must carry accurate support/cover fields.
inline bool dominatesSolution(const MiningTask& task, const PatternSolution& a,
                              const PatternSolution& b) {
    if (a.itemset == b.itemset) return false;
    switch (task.kind) {
        case MiningKind::Cfis:
            return isSubset(b.itemset, a.itemset) && a.support == b.support;
        case MiningKind::Gfis:
            return isSubset(a.itemset, b.itemset) && a.support == b.support;
        case MiningKind::Mrim:
            return isSubset(a.itemset, b.itemset);
        case MiningKind::Dfis:
            return isSubset(b.itemset, a.itemset) && a.posSupport == b.posSupport &&
                   a.negSupport == b.negSupport;
        case MiningKind::Rsd: {
            if (!isSubset(b.posCover, a.posCover)) return false;  // posCover(a) superset
            if (!isSubset(a.negCover, b.negCover)) return false;  // negCover(a) subset
            bool coversEqual = a.posCover == b.posCover && a.negCover == b.negCover;
            if (coversEqual) return isSubset(b.itemset, a.itemset);  // strict: itemsets differ
            return true;
        }
    }
    return false;
}

// Recomputes the solution's statistics from the database and verifies it is
// not dominated by any other solution in `all`.
inline bool checkSolution(const TransactionDb& db, const MiningTask& task,
                          const PatternSolution& sol,
                          const std::vector<PatternSolution>& all) {
    PatternInfo info = computeInfo(db, sol.itemset);
    if (info.support != sol.support) return false;
    if (db.labelled() &&
        (info.posSupport != sol.posSupport || info.negSupport != sol.negSupport))
        return false;
    for (const PatternSolution& other : all) {
        if (other.itemset == sol.itemset) continue;
        PatternInfo oi = computeInfo(db, other.itemset);
        PatternSolution fresh{other.itemset, oi.support, oi.posSupport, oi.negSupport,
                              oi.posCover, oi.negCover};
        PatternSolution self{sol.itemset, info.support, info.posSupport, info.negSupport,
                             info.posCover, info.negCover};
        if (dominatesSolution(task, fresh, self)) return false;
    }
    return true;
}

// Cardinality levels searched in order: top-down for CFIS/DFIS/RSD (dominators
// are supersets), bottom-up for GFIS/MRIM (dominators are subsets). Level 0
// joins the schedule only when the empty itemset is an admissible pattern.
inline std::vector<int> levelSchedule(const TransactionDb& db, const MiningTask& task) {
    std::vector<int> levels;
    int m = db.itemCount;
    if (ascendingLevels(task.kind)) {
        if (!task.excludeEmpty) levels.push_back(0);
        for (int l = 1; l <= m; ++l) levels.push_back(l);
    } else {
        for (int l = m; l >= 1; --l) levels.push_back(l);
        if (!task.excludeEmpty) levels.push_back(0);
    }
    return levels;
}

// Validates task parameters against a database. Throws on nonsense input.
inline void validateTask(const TransactionDb& db, const MiningTask& task) {
    if (needsLabels(task.kind) && !db.labelled())
        throw std::invalid_argument("task requires a labelled database");
    if (task.kind != MiningKind::Dfis) {
        if (task.minSupport < 1 || task.minSupport > static_cast<int>(db.size()))
            throw std::invalid_argument("minSupport out of range");
    }
    if (!task.itemValues.empty() &&
        task.itemValues.size() < static_cast<size_t>(db.itemCount))
        throw std::invalid_argument("item value weights do not cover the universe");
    if (!task.itemCosts.empty() &&
        task.itemCosts.size() < static_cast<size_t>(db.itemCount))
        throw std::invalid_argument("item cost weights do not cover the universe");
}

}  // namespace incsat
