#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "incsat/lit.hpp"
#include "incsat/mining.hpp"
#include "incsat/mrcpsp.hpp"
#include "incsat/solver.hpp"

namespace testutil {

using incsat::Lit;

// Random k-CNF over numVars variables. Clauses may repeat.
inline std::vector<std::vector<Lit>> randomCnf(std::mt19937& rng, int numVars,
                                               int numClauses, int maxLen = 3,
                                               int minLen = 1) {
    std::uniform_int_distribution<int> lenDist(minLen, maxLen);
    std::uniform_int_distribution<int> varDist(1, numVars);
    std::uniform_int_distribution<int> signDist(0, 1);
    std::vector<std::vector<Lit>> clauses;
    clauses.reserve(numClauses);
    for (int c = 0; c < numClauses; ++c) {
        int len = lenDist(rng);
        std::vector<Lit> cl;
        for (int i = 0; i < len; ++i) {
            int v = varDist(rng);
            cl.push_back(signDist(rng) ? Lit::positive(v) : Lit::negative(v));
        }
        clauses.push_back(std::move(cl));
    }
    return clauses;
}

inline void loadClauses(incsat::Solver& s, int numVars,
                        const std::vector<std::vector<Lit>>& clauses) {
    while (s.numVars() < numVars) s.newVar();
    for (const auto& c : clauses) s.addClause(c);
}

// Random labelled transaction database.
inline incsat::TransactionDb randomDb(std::mt19937& rng, int maxItems = 8,
                                      int maxTransactions = 12) {
    std::uniform_int_distribution<int> itemsDist(2, maxItems);
    std::uniform_int_distribution<int> transDist(2, maxTransactions);
    incsat::TransactionDb db;
    db.itemCount = itemsDist(rng);
    int n = transDist(rng);
    std::uniform_real_distribution<double> density(0.2, 0.8);
    double p = density(rng);
    std::bernoulli_distribution labelDist(0.5);
    for (int t = 0; t < n; ++t) {
        std::vector<int> items;
        for (int i = 1; i <= db.itemCount; ++i) {
            if (std::bernoulli_distribution(p)(rng)) items.push_back(i);
        }
        db.transactions.push_back(std::move(items));
        db.labels.push_back(labelDist(rng) ? 1 : -1);
    }
    return db;
}

inline std::vector<incsat::PatternSolution> normalized(
    std::vector<incsat::PatternSolution> sols) {
    std::sort(sols.begin(), sols.end(),
              [](const incsat::PatternSolution& a, const incsat::PatternSolution& b) {
                  return a.itemset < b.itemset;
              });
    return sols;
}

inline std::vector<std::vector<int>> itemsetsOf(
    const std::vector<incsat::PatternSolution>& sols) {
    std::vector<std::vector<int>> sets;
    for (const auto& s : sols) sets.push_back(s.itemset);
    std::sort(sets.begin(), sets.end());
    return sets;
}

// Random scheduling instance within the brute-force budget: two dummies plus
// up to three real jobs, up to two modes, small renewable and non-renewable
// loads, forward-only precedence wired through both dummies.
inline incsat::MrcpspInstance randomMrcpsp(std::mt19937& rng) {
    using nlohmann::json;
    int realJobs = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<std::string> jobs{"start"};
    for (int i = 1; i <= realJobs; ++i) jobs.push_back("j" + std::to_string(i));
    jobs.push_back("end");
    int n = static_cast<int>(jobs.size());

    json modes = json::object(), duration = json::object();
    json usageR = json::object(), usageN = json::object();
    bool withRenewable = std::bernoulli_distribution(0.6)(rng);
    bool withNonRenewable = std::bernoulli_distribution(0.4)(rng);
    int renewLimit = std::uniform_int_distribution<int>(1, 3)(rng);
    int nonRenewLimit = std::uniform_int_distribution<int>(2, 4)(rng);

    int sumMaxDur = 0;
    for (int j = 0; j < n; ++j) {
        bool dummy = j == 0 || j == n - 1;
        int mc = dummy ? 1 : std::uniform_int_distribution<int>(1, 2)(rng);
        std::vector<std::string> modeNames;
        json durs = json::object(), ur = json::object(), un = json::object();
        int maxDur = 0;
        for (int m = 0; m < mc; ++m) {
            std::string name = "m" + std::to_string(m + 1);
            modeNames.push_back(name);
            int d = dummy ? 0 : std::uniform_int_distribution<int>(1, 3)(rng);
            maxDur = std::max(maxDur, d);
            durs[name] = d;
            if (!dummy && withRenewable)
                ur[name] = {{"R", std::uniform_int_distribution<int>(0, renewLimit)(rng)}};
            if (!dummy && withNonRenewable)
                un[name] = {{"N", std::uniform_int_distribution<int>(0, 2)(rng)}};
        }
        sumMaxDur += maxDur;
        modes[jobs[j]] = modeNames;
        duration[jobs[j]] = durs;
        if (!ur.empty()) usageR[jobs[j]] = ur;
        if (!un.empty()) usageN[jobs[j]] = un;
    }

    json successors = json::object();
    for (int j = 0; j < n; ++j) successors[jobs[j]] = json::array();
    // forward edges; every real job is reachable and reaches the end
    for (int j = 1; j + 1 < n; ++j) {
        successors["start"].push_back(jobs[j]);
        successors[jobs[j]].push_back("end");
    }
    if (n == 2) successors["start"].push_back("end");
    for (int a = 1; a + 1 < n; ++a)
        for (int b = a + 1; b + 1 < n; ++b)
            if (std::bernoulli_distribution(0.4)(rng))
                successors[jobs[a]].push_back(jobs[b]);

    int jitter = std::uniform_int_distribution<int>(0, 3)(rng);
    int horizon = std::max(1, std::min(12, sumMaxDur + 1 - jitter + 1));

    json inst{{"jobs", jobs},
              {"startDummy", "start"},
              {"endDummy", "end"},
              {"modes", modes},
              {"duration", duration},
              {"successors", successors},
              {"horizon", horizon}};
    if (withRenewable) inst["renewable"] = {{"R", renewLimit}};
    if (withNonRenewable) inst["nonRenewable"] = {{"N", nonRenewLimit}};
    if (!usageR.empty()) inst["usageRenewable"] = usageR;
    if (!usageN.empty()) inst["usageNonRenewable"] = usageN;
    return incsat::parseInstance(inst);
}

}  // namespace testutil
