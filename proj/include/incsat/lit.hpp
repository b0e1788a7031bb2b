#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

namespace incsat {

// A signed reference to a boolean variable. Variables are numbered from 1;
// internally a literal is a single int ((var-1)*2 + negated-bit) so it can
// index watch lists directly.
class Lit {
public:
    constexpr Lit() = default;

    static constexpr Lit positive(int var) { return Lit((var - 1) << 1); }
    static constexpr Lit negative(int var) { return Lit(((var - 1) << 1) | 1); }
    static constexpr Lit fromCode(int code) { return Lit(code); }

    constexpr int var() const { return (code_ >> 1) + 1; }
    constexpr bool isPositive() const { return (code_ & 1) == 0; }
    constexpr int code() const { return code_; }
    constexpr bool valid() const { return code_ >= 0; }

    constexpr Lit operator~() const { return Lit(code_ ^ 1); }

    constexpr bool operator==(const Lit& o) const { return code_ == o.code_; }
    constexpr bool operator!=(const Lit& o) const { return code_ != o.code_; }
    constexpr bool operator<(const Lit& o) const { return code_ < o.code_; }

    // DIMACS convention: +v for the positive literal of v, -v for its negation.
    constexpr int toDimacs() const { return isPositive() ? var() : -var(); }
    static constexpr Lit fromDimacs(int d) {
        return d > 0 ? positive(d) : negative(-d);
    }

private:
    explicit constexpr Lit(int code) : code_(code) {}
    int code_ = -1;
};

inline std::string toString(Lit l) {
    return l.valid() ? std::to_string(l.toDimacs()) : std::string("?");
}

// A disjunction of literals. Learned clauses carry their LBD score
// (number of distinct decision levels at learning time, lower is better).
struct Clause {
    std::vector<Lit> lits;
    bool learned = false;
    bool deleted = false;
    int lbd = 0;
    double activity = 0.0;

    size_t size() const { return lits.size(); }
    Lit operator[](size_t i) const { return lits[i]; }
};

enum class Result { Sat, Unsat, Unknown };

inline const char* toString(Result r) {
    switch (r) {
        case Result::Sat: return "SAT";
        case Result::Unsat: return "UNSAT";
        default: return "UNKNOWN";
    }
}

// Search counters. The call* fields are deltas for the most recent
// (or currently running) solve call; the plain fields are cumulative
// over the lifetime of the solver.
struct SolverStats {
    uint64_t conflicts = 0;
    uint64_t decisions = 0;
    uint64_t propagations = 0;
    uint64_t callConflicts = 0;
    uint64_t callDecisions = 0;
    uint64_t callPropagations = 0;
    uint64_t solveCalls = 0;
    size_t learnedCount = 0;
    size_t permanentCount = 0;
    size_t totalClauses = 0;
};

}  // namespace incsat

template <>
struct std::hash<incsat::Lit> {
    size_t operator()(const incsat::Lit& l) const noexcept {
        return std::hash<int>()(l.code());
    }
};
