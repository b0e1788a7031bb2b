#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "incsat/builder.hpp"
#include "incsat/cop.hpp"

namespace incsat {

// Multi-mode resource-constrained project scheduling instance. Jobs and
// resources are referred to by index internally; names come from the JSON
// carrier. The two dummy jobs have zero duration and zero usage in all modes.
struct MrcpspInstance {
    std::vector<std::string> jobNames;
    int startDummy = -1;
    int endDummy = -1;
    std::vector<std::vector<std::string>> modeNames;        // [job]
    std::vector<std::vector<int>> duration;                 // [job][mode]
    std::vector<std::string> renewableNames;
    std::vector<int> renewableLimits;
    std::vector<std::string> nonRenewableNames;
    std::vector<int> nonRenewableLimits;
    std::vector<std::vector<std::vector<int>>> usageRenewable;     // [job][mode][res]
    std::vector<std::vector<std::vector<int>>> usageNonRenewable;  // [job][mode][res]
    std::vector<std::vector<int>> successors;                      // [job] -> jobs
    int horizon = 0;

    int jobCount() const { return static_cast<int>(jobNames.size()); }
    int modeCount(int job) const { return static_cast<int>(modeNames[job].size()); }
};

struct Schedule {
    std::vector<int> start;  // [job], times are 1-based
    std::vector<int> mode;   // [job], mode index
    int makespan = 0;
};

namespace detail {

inline int jobIndex(const std::map<std::string, int>& byName, const std::string& name,
                    const char* what) {
    auto it = byName.find(name);
    if (it == byName.end())
        throw std::invalid_argument(std::string(what) + ": unknown job '" + name + "'");
    return it->second;
}

// Topological order of the precedence graph; throws on a cycle.
inline std::vector<int> topoOrder(const MrcpspInstance& inst) {
    int n = inst.jobCount();
    std::vector<int> indegree(n, 0);
    for (int j = 0; j < n; ++j)
        for (int s : inst.successors[j]) ++indegree[s];
    std::vector<int> queue, order;
    for (int j = 0; j < n; ++j)
        if (indegree[j] == 0) queue.push_back(j);
    while (!queue.empty()) {
        int j = queue.back();
        queue.pop_back();
        order.push_back(j);
        for (int s : inst.successors[j])
            if (--indegree[s] == 0) queue.push_back(s);
    }
    if (static_cast<int>(order.size()) != n)
        throw std::invalid_argument("mrcpsp: cyclic precedence graph");
    return order;
}

}  // namespace detail

// Parses the JSON instance carrier:
// {jobs:[names], startDummy, endDummy, modes:{job:[names]},
//  duration:{job:{mode:int}}, renewable:{res:limit}, nonRenewable:{res:limit},
//  usageRenewable:{job:{mode:{res:int}}}, usageNonRenewable:{...},
//  successors:{job:[jobs]}, horizon:int}
// Omitted usage entries default to zero.
inline MrcpspInstance parseInstance(const nlohmann::json& j) {
    MrcpspInstance inst;
    if (!j.contains("jobs") || !j.contains("startDummy") || !j.contains("endDummy") ||
        !j.contains("modes") || !j.contains("duration") || !j.contains("successors") ||
        !j.contains("horizon"))
        throw std::invalid_argument("mrcpsp: missing required field");

    inst.jobNames = j.at("jobs").get<std::vector<std::string>>();
    std::map<std::string, int> byName;
    for (int i = 0; i < inst.jobCount(); ++i) {
        if (!byName.emplace(inst.jobNames[i], i).second)
            throw std::invalid_argument("mrcpsp: duplicate job name");
    }
    inst.startDummy = detail::jobIndex(byName, j.at("startDummy"), "startDummy");
    inst.endDummy = detail::jobIndex(byName, j.at("endDummy"), "endDummy");
    inst.horizon = j.at("horizon").get<int>();
    if (inst.horizon < 1) throw std::invalid_argument("mrcpsp: horizon must be >= 1");

    auto readResources = [&](const char* key, std::vector<std::string>& names,
                             std::vector<int>& limits) {
        if (!j.contains(key)) return;
        for (auto& [name, limit] : j.at(key).items()) {
            names.push_back(name);
            limits.push_back(limit.get<int>());
            if (limits.back() < 0)
                throw std::invalid_argument("mrcpsp: negative resource limit");
        }
    };
    readResources("renewable", inst.renewableNames, inst.renewableLimits);
    readResources("nonRenewable", inst.nonRenewableNames, inst.nonRenewableLimits);

    int n = inst.jobCount();
    inst.modeNames.resize(n);
    inst.duration.resize(n);
    inst.usageRenewable.resize(n);
    inst.usageNonRenewable.resize(n);
    inst.successors.resize(n);

    const auto& modes = j.at("modes");
    const auto& durations = j.at("duration");
    for (int job = 0; job < n; ++job) {
        const std::string& name = inst.jobNames[job];
        if (!modes.contains(name) || modes.at(name).empty())
            throw std::invalid_argument("mrcpsp: every job needs at least one mode");
        inst.modeNames[job] = modes.at(name).get<std::vector<std::string>>();
        int mc = inst.modeCount(job);
        inst.duration[job].resize(mc);
        inst.usageRenewable[job].assign(mc,
                                        std::vector<int>(inst.renewableNames.size(), 0));
        inst.usageNonRenewable[job].assign(
            mc, std::vector<int>(inst.nonRenewableNames.size(), 0));
        for (int m = 0; m < mc; ++m) {
            const std::string& modeName = inst.modeNames[job][m];
            if (!durations.contains(name) || !durations.at(name).contains(modeName))
                throw std::invalid_argument("mrcpsp: missing duration for " + name);
            inst.duration[job][m] = durations.at(name).at(modeName).get<int>();
            if (inst.duration[job][m] < 0)
                throw std::invalid_argument("mrcpsp: negative duration");
        }
    }

    auto readUsage = [&](const char* key, const std::vector<std::string>& resNames,
                         std::vector<std::vector<std::vector<int>>>& usage) {
        if (!j.contains(key)) return;
        for (auto& [jobName, perMode] : j.at(key).items()) {
            int job = detail::jobIndex(byName, jobName, key);
            for (auto& [modeName, perRes] : perMode.items()) {
                auto mit = std::find(inst.modeNames[job].begin(),
                                     inst.modeNames[job].end(), modeName);
                if (mit == inst.modeNames[job].end())
                    throw std::invalid_argument("mrcpsp: unknown mode '" + modeName + "'");
                int m = static_cast<int>(mit - inst.modeNames[job].begin());
                for (auto& [resName, amount] : perRes.items()) {
                    auto rit = std::find(resNames.begin(), resNames.end(), resName);
                    if (rit == resNames.end())
                        throw std::invalid_argument("mrcpsp: unknown resource '" +
                                                    resName + "'");
                    int r = static_cast<int>(rit - resNames.begin());
                    usage[job][m][r] = amount.get<int>();
                    if (usage[job][m][r] < 0)
                        throw std::invalid_argument("mrcpsp: negative resource usage");
                }
            }
        }
    };
    readUsage("usageRenewable", inst.renewableNames, inst.usageRenewable);
    readUsage("usageNonRenewable", inst.nonRenewableNames, inst.usageNonRenewable);

    for (auto& [jobName, succ] : j.at("successors").items()) {
        int job = detail::jobIndex(byName, jobName, "successors");
        for (const auto& s : succ)
            inst.successors[job].push_back(detail::jobIndex(byName, s, "successors"));
    }

    // dummy jobs carry no duration and no load
    for (int dummy : {inst.startDummy, inst.endDummy}) {
        for (int m = 0; m < inst.modeCount(dummy); ++m) {
            if (inst.duration[dummy][m] != 0)
                throw std::invalid_argument("mrcpsp: dummy jobs must have zero duration");
            for (int u : inst.usageRenewable[dummy][m])
                if (u != 0)
                    throw std::invalid_argument("mrcpsp: dummy jobs must not use resources");
            for (int u : inst.usageNonRenewable[dummy][m])
                if (u != 0)
                    throw std::invalid_argument("mrcpsp: dummy jobs must not use resources");
        }
    }

    detail::topoOrder(inst);  // rejects cycles

    // the end dummy must be the global sink so its start time is the makespan
    if (!inst.successors[inst.endDummy].empty())
        throw std::invalid_argument("mrcpsp: endDummy must have no successors");
    {
        int n2 = inst.jobCount();
        std::vector<uint8_t> reaches(n2, 0);
        reaches[inst.endDummy] = 1;
        bool changed = true;
        while (changed) {
            changed = false;
            for (int job = 0; job < n2; ++job) {
                if (reaches[job]) continue;
                for (int s : inst.successors[job]) {
                    if (reaches[s]) {
                        reaches[job] = 1;
                        changed = true;
                        break;
                    }
                }
            }
        }
        for (int job = 0; job < n2; ++job)
            if (!reaches[job])
                throw std::invalid_argument(
                    "mrcpsp: endDummy is not reachable from every job");
    }
    return inst;
}

inline MrcpspInstance parseInstance(const std::string& text) {
    return parseInstance(nlohmann::json::parse(text));
}

// Time-indexed SAT decision layer: order-encoded start times, one-hot modes,
// job-activity literals channelled to the start/duration window.
struct MrcpspVars {
    std::vector<IntOrderVar> start;        // [job], domain 1..horizon
    std::vector<std::vector<Lit>> mode;    // [job][mode]
    std::vector<std::vector<Lit>> active;  // [job][time-1]
};

inline MrcpspVars encode(const MrcpspInstance& inst, ModelBuilder& b) {
    Solver& s = b.solver();
    int n = inst.jobCount();
    int h = inst.horizon;
    MrcpspVars vars;
    vars.start.reserve(n);
    vars.mode.resize(n);
    vars.active.resize(n);

    for (int j = 0; j < n; ++j) {
        vars.start.push_back(b.intVar(1, h));
        for (int m = 0; m < inst.modeCount(j); ++m) vars.mode[j].push_back(b.newLit());
        b.addClause(vars.mode[j]);  // at least one mode
        for (size_t a = 0; a < vars.mode[j].size(); ++a)
            for (size_t c = a + 1; c < vars.mode[j].size(); ++c)
                b.addClause({~vars.mode[j][a], ~vars.mode[j][c]});
        for (int t = 1; t <= h; ++t) vars.active[j].push_back(b.newLit());
    }

    // anchor the project start
    for (Lit l : b.eqLits(vars.start[inst.startDummy], 1)) s.addClause({l});

    for (int j = 0; j < n; ++j) {
        const IntOrderVar& st = vars.start[j];
        for (int m = 0; m < inst.modeCount(j); ++m) {
            Lit mo = vars.mode[j][m];
            int d = inst.duration[j][m];

            // jobActive(j,t) <-> start <= t < start + d, given mode m
            for (int t = 1; t <= h; ++t) {
                Lit act = vars.active[j][t - 1];
                Lit inWinLo = st.geq(t - d + 1);
                Lit beyond = st.geq(t + 1);
                s.addClause({~mo, ~inWinLo, beyond, act});
                s.addClause({~mo, ~act, inWinLo});
                s.addClause({~mo, ~act, ~beyond});
            }

            // precedence: successors start after completion
            for (int succ : inst.successors[j]) {
                const IntOrderVar& su = vars.start[succ];
                for (int v = 1; v <= h; ++v)
                    s.addClause({~mo, ~st.geq(v), su.geq(v + d)});
            }
        }
    }

    // non-renewable: total consumption over chosen modes
    for (size_t r = 0; r < inst.nonRenewableNames.size(); ++r) {
        std::vector<Lit> bits;
        for (int j = 0; j < n; ++j)
            for (int m = 0; m < inst.modeCount(j); ++m)
                for (int k = 0; k < inst.usageNonRenewable[j][m][r]; ++k)
                    bits.push_back(vars.mode[j][m]);
        int limit = inst.nonRenewableLimits[r];
        if (static_cast<int>(bits.size()) > limit)
            b.boolSumEq(bits, b.intVar(0, limit));
    }

    // renewable: per-time consumption of active jobs in their chosen mode
    for (size_t r = 0; r < inst.renewableNames.size(); ++r) {
        int limit = inst.renewableLimits[r];
        for (int t = 1; t <= h; ++t) {
            std::vector<Lit> bits;
            for (int j = 0; j < n; ++j) {
                for (int m = 0; m < inst.modeCount(j); ++m) {
                    int use = inst.usageRenewable[j][m][r];
                    if (use == 0) continue;
                    Lit both = b.newLit();  // mode chosen and job active at t
                    Lit mo = vars.mode[j][m];
                    Lit act = vars.active[j][t - 1];
                    s.addClause({~both, mo});
                    s.addClause({~both, act});
                    s.addClause({both, ~mo, ~act});
                    for (int k = 0; k < use; ++k) bits.push_back(both);
                }
            }
            if (static_cast<int>(bits.size()) > limit)
                b.boolSumEq(bits, b.intVar(0, limit));
        }
    }

    return vars;
}

// Direct constraint evaluator, independent of the SAT encoding. Returns a
// description of the first violated constraint, or nullopt for a valid
// schedule.
inline std::optional<std::string> scheduleViolation(const MrcpspInstance& inst,
                                                    const Schedule& sched) {
    int n = inst.jobCount();
    if (static_cast<int>(sched.start.size()) != n ||
        static_cast<int>(sched.mode.size()) != n)
        return "schedule does not cover all jobs";
    for (int j = 0; j < n; ++j) {
        if (sched.mode[j] < 0 || sched.mode[j] >= inst.modeCount(j))
            return "invalid mode for job " + inst.jobNames[j];
        if (sched.start[j] < 1 || sched.start[j] > inst.horizon)
            return "start time out of range for job " + inst.jobNames[j];
    }
    if (sched.start[inst.startDummy] != 1) return "project does not start at time 1";
    if (sched.makespan != sched.start[inst.endDummy])
        return "makespan does not equal the end dummy's start";
    for (int j = 0; j < n; ++j) {
        int completion = sched.start[j] + inst.duration[j][sched.mode[j]];
        for (int succ : inst.successors[j]) {
            if (sched.start[succ] < completion)
                return "precedence violated between " + inst.jobNames[j] + " and " +
                       inst.jobNames[succ];
        }
    }
    for (size_t r = 0; r < inst.nonRenewableNames.size(); ++r) {
        int sum = 0;
        for (int j = 0; j < n; ++j) sum += inst.usageNonRenewable[j][sched.mode[j]][r];
        if (sum > inst.nonRenewableLimits[r])
            return "non-renewable resource " + inst.nonRenewableNames[r] + " exceeded";
    }
    for (size_t r = 0; r < inst.renewableNames.size(); ++r) {
        for (int t = 1; t <= inst.horizon; ++t) {
            int sum = 0;
            for (int j = 0; j < n; ++j) {
                int st = sched.start[j];
                int d = inst.duration[j][sched.mode[j]];
                if (t >= st && t < st + d) sum += inst.usageRenewable[j][sched.mode[j]][r];
            }
            if (sum > inst.renewableLimits[r])
                return "renewable resource " + inst.renewableNames[r] +
                       " exceeded at time " + std::to_string(t);
        }
    }
    return std::nullopt;
}

struct MrcpspResult {
    std::optional<Schedule> schedule;  // nullopt: infeasible within the horizon
    CopResult cop;
};

// Encodes the instance, minimises the end dummy's start time with the chosen
// strategy, and certifies the returned schedule with the direct evaluator.
inline MrcpspResult solveMrcpsp(const MrcpspInstance& inst, Strategy strategy,
                                const CopOptions& copOpts = {},
                                const Solver::Options& solverOpts = {}) {
    Solver solver(solverOpts);
    ModelBuilder b(solver);
    MrcpspVars vars = encode(inst, b);
    MrcpspResult result;
    result.cop =
        optimize(solver, vars.start[inst.endDummy], Sense::Minimise, strategy, copOpts);
    if (!result.cop.feasible()) return result;

    Schedule sched;
    sched.start.resize(inst.jobCount());
    sched.mode.assign(inst.jobCount(), -1);
    const std::vector<int8_t>& model = result.cop.model;
    for (int j = 0; j < inst.jobCount(); ++j) {
        sched.start[j] = vars.start[j].valueInModel(model);
        for (int m = 0; m < inst.modeCount(j); ++m) {
            Lit mo = vars.mode[j][m];
            if (model[mo.var() - 1] > 0) {
                sched.mode[j] = m;
                break;
            }
        }
    }
    sched.makespan = *result.cop.optimum;
    if (auto violation = scheduleViolation(inst, sched))
        throw std::logic_error("mrcpsp: solver schedule failed certification: " +
                               *violation);
    result.schedule = std::move(sched);
    return result;
}

inline nlohmann::json scheduleToJson(const MrcpspInstance& inst, const Schedule& sched) {
    nlohmann::json start = nlohmann::json::object();
    nlohmann::json mode = nlohmann::json::object();
    for (int j = 0; j < inst.jobCount(); ++j) {
        start[inst.jobNames[j]] = sched.start[j];
        mode[inst.jobNames[j]] = inst.modeNames[j][sched.mode[j]];
    }
    return nlohmann::json{{"start", start}, {"mode", mode}, {"makespan", sched.makespan}};
}

}  // namespace incsat
