#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "incsat/lit.hpp"
#include "incsat/solver.hpp"

namespace incsat {

struct CnfFormula {
    int numVars = 0;
    std::vector<std::vector<Lit>> clauses;
};

// Reads "p cnf <vars> <clauses>" followed by zero-terminated clause lines.
// Comment lines ('c ...') and '%'/trailing '0' footers are tolerated.
inline CnfFormula parseDimacs(std::istream& in) {
    CnfFormula f;
    bool sawHeader = false;
    std::string tok;
    std::vector<Lit> cur;
    while (in >> tok) {
        if (tok.empty()) continue;
        if (tok[0] == 'c') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (tok == "p") {
            std::string fmt;
            long declaredClauses = 0;
            if (!(in >> fmt >> f.numVars >> declaredClauses) || fmt != "cnf")
                throw std::runtime_error("malformed DIMACS header");
            if (f.numVars < 0) throw std::runtime_error("negative variable count");
            sawHeader = true;
            continue;
        }
        if (tok == "%") break;
        long lit;
        try {
            size_t pos = 0;
            lit = std::stol(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw std::runtime_error("bad DIMACS token: " + tok);
        }
        if (!sawHeader) throw std::runtime_error("clause before DIMACS header");
        if (lit == 0) {
            f.clauses.push_back(cur);
            cur.clear();
        } else {
            int v = static_cast<int>(lit > 0 ? lit : -lit);
            if (v > f.numVars) throw std::runtime_error("literal exceeds declared variables");
            cur.push_back(Lit::fromDimacs(static_cast<int>(lit)));
        }
    }
    if (!sawHeader) throw std::runtime_error("missing DIMACS header");
    if (!cur.empty()) f.clauses.push_back(cur);
    return f;
}

inline CnfFormula parseDimacs(const std::string& text) {
    std::istringstream in(text);
    return parseDimacs(in);
}

// Allocates the formula's variables in `solver` and posts every clause.
// Returns the variable offset (0 for a fresh solver).
inline int loadFormula(Solver& solver, const CnfFormula& f) {
    int offset = solver.numVars();
    for (int i = 0; i < f.numVars; ++i) solver.newVar();
    std::vector<Lit> shifted;
    for (const auto& cl : f.clauses) {
        shifted.clear();
        for (Lit l : cl) {
            int v = l.var() + offset;
            shifted.push_back(l.isPositive() ? Lit::positive(v) : Lit::negative(v));
        }
        solver.addClause(shifted);
    }
    return offset;
}

inline void writeDimacs(std::ostream& out, const CnfFormula& f) {
    out << "p cnf " << f.numVars << ' ' << f.clauses.size() << '\n';
    for (const auto& cl : f.clauses) {
        for (Lit l : cl) out << l.toDimacs() << ' ';
        out << "0\n";
    }
}

// Exports the solver's permanent clause database (learned clauses excluded).
inline CnfFormula exportFormula(const Solver& solver) {
    CnfFormula f;
    f.numVars = solver.numVars();
    for (const Clause& c : solver.clauses()) {
        if (!c.learned && !c.deleted) f.clauses.push_back(c.lits);
    }
    return f;
}

}  // namespace incsat
