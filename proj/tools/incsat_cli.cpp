// Command-line front end: pattern mining (CDP+I), SAT-sequence optimization,
// MRCPSP scheduling, plain DIMACS solving, and a native-vs-baseline benchmark
// harness.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "incsat/cdpi.hpp"
#include "incsat/cop.hpp"
#include "incsat/dimacs.hpp"
#include "incsat/mrcpsp.hpp"

using namespace incsat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitUsage = 2;

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// stream sink: "-" means stdout
class OutFile {
public:
    explicit OutFile(const std::string& path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot write file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::optional<double> envTimeLimit() {
    const char* v = std::getenv("INCSAT_TIME_LIMIT");
    if (!v || !*v) return std::nullopt;
    return std::atof(v);
}

MiningKind parseKind(const std::string& name) {
    if (name == "cfis") return MiningKind::Cfis;
    if (name == "gfis") return MiningKind::Gfis;
    if (name == "mrim") return MiningKind::Mrim;
    if (name == "dfis") return MiningKind::Dfis;
    if (name == "rsd") return MiningKind::Rsd;
    throw CLI::ValidationError("--task", "unknown task: " + name);
}

Strategy parseStrategy(const std::string& name) {
    if (name == "linear") return Strategy::Linear;
    if (name == "unsat") return Strategy::Unsat;
    if (name == "bisect") return Strategy::Bisect;
    throw CLI::ValidationError("--strategy", "unknown strategy: " + name);
}

RunMode parseMode(const std::string& name) {
    if (name == "native") return RunMode::Native;
    if (name == "baseline") return RunMode::Baseline;
    throw CLI::ValidationError("--mode", "unknown mode: " + name);
}

nlohmann::json solutionJson(const TransactionDb& db, const PatternSolution& sol) {
    nlohmann::json j{{"itemset", sol.itemset}, {"support", sol.support}};
    if (db.labelled()) {
        j["posSupport"] = sol.posSupport;
        j["negSupport"] = sol.negSupport;
    }
    return j;
}

struct MineArgs {
    std::string task = "cfis";
    std::string dbPath;
    int minSupport = 1;
    int threshold = 0;
    std::string mode = "native";
    std::string out = "-";
    std::string statsPath;
    bool includeEmpty = false;
    bool unguardedBlocking = false;
    std::vector<int> values, costs;
    int minValue = 0, maxCost = 0;
    uint64_t seed = 0;
    double timeLimit = -1.0;
};

MiningTask taskFromArgs(const MineArgs& a) {
    MiningTask task;
    task.kind = parseKind(a.task);
    task.minSupport = a.minSupport;
    task.threshold = a.threshold;
    task.excludeEmpty = !a.includeEmpty;
    task.itemValues = a.values;
    task.minValue = a.minValue;
    task.itemCosts = a.costs;
    task.maxCost = a.maxCost;
    return task;
}

CdpiOptions cdpiOptionsFromArgs(const MineArgs& a) {
    CdpiOptions opts;
    opts.mode = parseMode(a.mode);
    opts.guardSolutionBlocking = !a.unguardedBlocking;
    opts.solverOptions.seed = a.seed;
    if (a.timeLimit >= 0)
        opts.timeLimitSeconds = a.timeLimit;
    else
        opts.timeLimitSeconds = envTimeLimit();
    return opts;
}

int runMine(const MineArgs& a) {
    TransactionDb db = parseDb(readFile(a.dbPath));
    MiningTask task = taskFromArgs(a);
    CdpiResult result = runCdpi(db, task, cdpiOptionsFromArgs(a));

    OutFile out(a.out);
    for (const PatternSolution& sol : result.solutions)
        out.stream() << solutionJson(db, sol).dump() << '\n';
    if (!a.statsPath.empty()) {
        OutFile stats(a.statsPath);
        stats.stream() << levelReportCsv(result.levels);
    }
    if (result.timedOut) {
        std::cerr << "c time limit reached; solution list is incomplete\n";
        return kExitUnsat;
    }
    return kExitOk;
}

// Interprets a variable range of an existing DIMACS formula as an
// order-encoding ladder and re-asserts the ladder clauses.
IntOrderVar ladderView(ModelBuilder& b, int firstVar, int lastVar, int lo) {
    IntOrderVar x;
    x.lo = lo;
    x.hi = lo + (lastVar - firstVar + 1);
    x.constTrue = b.trueLit();
    for (int v = firstVar; v <= lastVar; ++v) x.thresholds.push_back(Lit::positive(v));
    for (size_t i = 1; i < x.thresholds.size(); ++i)
        b.addClause({~x.thresholds[i], x.thresholds[i - 1]});
    return x;
}

struct OptimizeArgs {
    std::string dimacsPath;
    std::string strategy = "bisect";
    std::string sense = "max";
    std::string mode = "native";
    std::string varRange;  // "A..B"
    int objectiveLo = 0;
    std::string callLogPath;
    uint64_t seed = 0;
    double timeLimit = -1.0;
    bool boundJump = false;
};

std::pair<int, int> parseRange(const std::string& text) {
    size_t dots = text.find("..");
    if (dots == std::string::npos)
        throw CLI::ValidationError("--objective-vars", "expected A..B");
    int a = std::stoi(text.substr(0, dots));
    int b = std::stoi(text.substr(dots + 2));
    if (a < 1 || b < a)
        throw CLI::ValidationError("--objective-vars", "expected 1 <= A <= B");
    return {a, b};
}

int runOptimize(const OptimizeArgs& a) {
    CnfFormula formula = parseDimacs(readFile(a.dimacsPath));
    auto [firstVar, lastVar] = parseRange(a.varRange);
    if (lastVar > formula.numVars)
        throw std::runtime_error("objective variables exceed the formula");
    Sense sense = a.sense == "min" ? Sense::Minimise : Sense::Maximise;
    Strategy strategy = parseStrategy(a.strategy);
    CopOptions copOpts;
    copOpts.boundJump = a.boundJump;
    copOpts.timeLimitSeconds =
        a.timeLimit >= 0 ? std::optional<double>(a.timeLimit) : envTimeLimit();
    Solver::Options solverOpts;
    solverOpts.seed = a.seed;

    CopResult result;
    if (parseMode(a.mode) == RunMode::Native) {
        Solver solver(solverOpts);
        ModelBuilder b(solver);
        loadFormula(solver, formula);
        IntOrderVar objective = ladderView(b, firstVar, lastVar, a.objectiveLo);
        result = optimize(solver, objective, sense, strategy, copOpts);
    } else {
        ProblemFactory factory = [&](Solver& solver, ModelBuilder& b) {
            loadFormula(solver, formula);
            return ladderView(b, firstVar, lastVar, a.objectiveLo);
        };
        result = compareModes(factory, sense, strategy, copOpts, solverOpts).perCall;
    }

    if (!a.callLogPath.empty()) {
        OutFile log(a.callLogPath);
        log.stream() << copCallLogCsv(result.log);
    }
    if (result.timedOut && !result.feasible()) {
        std::cout << "UNKNOWN\n";
        return kExitUnsat;
    }
    if (!result.feasible()) {
        std::cout << "INFEASIBLE\n";
        return kExitUnsat;
    }
    std::cout << "optimum " << *result.optimum << '\n';
    return kExitOk;
}

struct MrcpspArgs {
    std::string instancePath;
    std::string strategy = "bisect";
    std::string mode = "native";
    std::string out = "-";
    std::string callLogPath;
    uint64_t seed = 0;
    double timeLimit = -1.0;
};

int runMrcpspCmd(const MrcpspArgs& a) {
    MrcpspInstance inst = parseInstance(readFile(a.instancePath));
    CopOptions copOpts;
    copOpts.timeLimitSeconds =
        a.timeLimit >= 0 ? std::optional<double>(a.timeLimit) : envTimeLimit();
    Solver::Options solverOpts;
    solverOpts.seed = a.seed;

    std::optional<Schedule> schedule;
    CopResult cop;
    if (parseMode(a.mode) == RunMode::Native) {
        MrcpspResult r = solveMrcpsp(inst, parseStrategy(a.strategy), copOpts, solverOpts);
        schedule = r.schedule;
        cop = r.cop;
    } else {
        ProblemFactory factory = [&](Solver& s, ModelBuilder& b) {
            (void)s;
            return encode(inst, b).start[inst.endDummy];
        };
        ModeComparison cmp = compareModes(factory, Sense::Minimise,
                                          parseStrategy(a.strategy), copOpts, solverOpts);
        cop = cmp.perCall;
        if (cop.feasible()) {
            // recover the full schedule natively at the proven optimum
            MrcpspResult r =
                solveMrcpsp(inst, parseStrategy(a.strategy), copOpts, solverOpts);
            schedule = r.schedule;
        }
    }

    if (!a.callLogPath.empty()) {
        OutFile log(a.callLogPath);
        log.stream() << copCallLogCsv(cop.log);
    }
    if (!schedule) {
        std::cout << (cop.timedOut ? "UNKNOWN\n" : "INFEASIBLE\n");
        return kExitUnsat;
    }
    OutFile out(a.out);
    out.stream() << scheduleToJson(inst, *schedule).dump(2) << '\n';
    return kExitOk;
}

int runSolveDimacs(const std::string& path, uint64_t seed) {
    CnfFormula formula = parseDimacs(readFile(path));
    Solver::Options opts;
    opts.seed = seed;
    Solver solver(opts);
    loadFormula(solver, formula);
    if (auto limit = envTimeLimit()) {
        solver.setDeadline(std::chrono::steady_clock::now() +
                           std::chrono::microseconds(static_cast<int64_t>(*limit * 1e6)));
    }
    Result r = solver.solve();
    if (r == Result::Unknown) {
        std::cout << "UNKNOWN\n";
        return kExitUnsat;
    }
    if (r == Result::Unsat) {
        std::cout << "UNSAT\n";
        return kExitUnsat;
    }
    std::cout << "SAT\nv";
    for (int v = 1; v <= formula.numVars; ++v)
        std::cout << ' ' << (solver.value(Lit::positive(v)) ? v : -v);
    std::cout << " 0\n";
    return kExitOk;
}

struct BenchArgs {
    std::string kind = "mine";
    MineArgs mine;                    // task parameters for mining instances
    std::string strategy = "bisect";  // for mrcpsp instances
    std::string modes = "native,baseline";
    int repeats = 3;
    uint64_t seed = 1;
    double timeLimit = -1.0;
    std::string out = "-";
    std::vector<std::string> instances;
};

struct BenchRow {
    std::string instance;
    std::string mode;
    long result = 0;  // solution count (mine) or makespan (mrcpsp, -1 infeasible)
    uint64_t decisions = 0;
    uint64_t conflicts = 0;
    double timeMs = 0.0;
    bool timeout = false;
};

int runBench(const BenchArgs& a) {
    std::vector<std::string> modes;
    {
        std::stringstream ss(a.modes);
        for (std::string part; std::getline(ss, part, ',');)
            if (!part.empty()) modes.push_back(part);
    }
    std::optional<double> limit =
        a.timeLimit >= 0 ? std::optional<double>(a.timeLimit) : envTimeLimit();

    OutFile out(a.out);
    out.stream() << "instance,mode,result,decisions,conflicts,time_ms,status,par2_ms\n";

    for (const std::string& path : a.instances) {
        std::vector<std::pair<BenchRow, std::vector<std::vector<int>>>> rows;
        for (const std::string& modeName : modes) {
            BenchRow row;
            row.instance = path;
            row.mode = modeName;
            std::vector<std::vector<int>> itemsets;
            for (int rep = 0; rep < a.repeats; ++rep) {
                auto t0 = std::chrono::steady_clock::now();
                if (a.kind == "mine") {
                    TransactionDb db = parseDb(readFile(path));
                    MiningTask task = taskFromArgs(a.mine);
                    CdpiOptions opts;
                    opts.mode = parseMode(modeName);
                    opts.timeLimitSeconds = limit;
                    opts.solverOptions.seed = a.seed + rep;
                    CdpiResult r = runCdpi(db, task, opts);
                    row.timeout = row.timeout || r.timedOut;
                    row.result = static_cast<long>(r.solutions.size());
                    row.decisions += r.totalDecisions;
                    row.conflicts += r.totalConflicts;
                    if (rep == 0 && !r.timedOut) {
                        for (const auto& s : r.solutions) itemsets.push_back(s.itemset);
                        std::sort(itemsets.begin(), itemsets.end());
                    }
                } else if (a.kind == "mrcpsp") {
                    MrcpspInstance inst = parseInstance(readFile(path));
                    CopOptions copOpts;
                    copOpts.timeLimitSeconds = limit;
                    Solver::Options solverOpts;
                    solverOpts.seed = a.seed + rep;
                    Strategy strategy = parseStrategy(a.strategy);
                    CopResult cop;
                    if (parseMode(modeName) == RunMode::Native) {
                        cop = solveMrcpsp(inst, strategy, copOpts, solverOpts).cop;
                    } else {
                        ProblemFactory factory = [&](Solver& s, ModelBuilder& b) {
                            (void)s;
                            return encode(inst, b).start[inst.endDummy];
                        };
                        cop = compareModes(factory, Sense::Minimise, strategy, copOpts,
                                           solverOpts)
                                  .perCall;
                    }
                    row.timeout = row.timeout || cop.timedOut;
                    row.result = cop.feasible() ? *cop.optimum : -1;
                    for (const CopCall& c : cop.log) {
                        row.decisions += c.decisions;
                        row.conflicts += c.conflicts;
                    }
                } else {
                    throw CLI::ValidationError("--kind", "unknown kind: " + a.kind);
                }
                row.timeMs += std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
            }
            row.timeMs /= a.repeats;
            row.decisions /= a.repeats;
            row.conflicts /= a.repeats;
            rows.emplace_back(row, itemsets);
        }

        // modes must agree before reporting
        for (size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].first.timeout || rows[0].first.timeout) continue;
            bool equal = a.kind == "mine" ? rows[i].second == rows[0].second
                                          : rows[i].first.result == rows[0].first.result;
            if (!equal) {
                std::cerr << "bench: modes disagree on " << path << "\n";
                return kExitUnsat;
            }
        }
        for (const auto& [row, sets] : rows) {
            (void)sets;
            double par2 = row.timeout && limit ? 2.0 * *limit * 1000.0 : row.timeMs;
            out.stream() << row.instance << ',' << row.mode << ',' << row.result << ','
                         << row.decisions << ',' << row.conflicts << ',' << row.timeMs
                         << ',' << (row.timeout ? "timeout" : "ok") << ',' << par2
                         << '\n';
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"incremental SAT modelling and solving"};
    app.require_subcommand(1);

    MineArgs mine;
    CLI::App* mineCmd = app.add_subcommand("mine", "CDP+I pattern mining");
    mineCmd->add_option("--task", mine.task, "cfis|gfis|mrim|dfis|rsd")->required();
    mineCmd->add_option("--db", mine.dbPath, "transaction database file")->required();
    mineCmd->add_option("--min-support", mine.minSupport, "frequency threshold");
    mineCmd->add_option("--threshold", mine.threshold, "DFIS discriminativeness");
    mineCmd->add_option("--mode", mine.mode, "native|baseline");
    mineCmd->add_option("--out", mine.out, "solutions JSON-lines ('-' = stdout)");
    mineCmd->add_option("--stats", mine.statsPath, "per-level stats CSV");
    mineCmd->add_flag("--include-empty", mine.includeEmpty,
                      "admit the empty itemset as a pattern");
    mineCmd->add_flag("--unguarded-blocking", mine.unguardedBlocking,
                      "keep per-solution blocking clauses alive after their level");
    mineCmd->add_option("--values", mine.values, "per-item values (min-value constraint)");
    mineCmd->add_option("--min-value", mine.minValue, "minimum itemset value");
    mineCmd->add_option("--costs", mine.costs, "per-item costs (max-cost constraint)");
    mineCmd->add_option("--max-cost", mine.maxCost, "maximum itemset cost");
    mineCmd->add_option("--seed", mine.seed, "solver tie-breaking seed");
    mineCmd->add_option("--time-limit", mine.timeLimit, "seconds (or INCSAT_TIME_LIMIT)");

    OptimizeArgs opt;
    CLI::App* optCmd = app.add_subcommand("optimize", "optimize a DIMACS objective");
    optCmd->add_option("--dimacs", opt.dimacsPath, "CNF file")->required();
    optCmd->add_option("--strategy", opt.strategy, "linear|unsat|bisect");
    optCmd->add_option("--sense", opt.sense, "max|min");
    optCmd->add_option("--mode", opt.mode, "native|baseline");
    optCmd->add_option("--objective-vars", opt.varRange,
                       "order-encoding ladder variables, e.g. 5..12")
        ->required();
    optCmd->add_option("--objective-lo", opt.objectiveLo,
                       "value when all ladder vars are false");
    optCmd->add_option("--call-log", opt.callLogPath, "per-call CSV");
    optCmd->add_option("--seed", opt.seed, "solver tie-breaking seed");
    optCmd->add_option("--time-limit", opt.timeLimit, "seconds");
    optCmd->add_flag("--bound-jump", opt.boundJump,
                     "jump bounds to the model objective value");

    MrcpspArgs sched;
    CLI::App* schedCmd = app.add_subcommand("mrcpsp", "minimise a project makespan");
    schedCmd->add_option("--instance", sched.instancePath, "instance JSON")->required();
    schedCmd->add_option("--strategy", sched.strategy, "linear|unsat|bisect");
    schedCmd->add_option("--mode", sched.mode, "native|baseline");
    schedCmd->add_option("--out", sched.out, "schedule JSON ('-' = stdout)");
    schedCmd->add_option("--call-log", sched.callLogPath, "per-call CSV");
    schedCmd->add_option("--seed", sched.seed, "solver tie-breaking seed");
    schedCmd->add_option("--time-limit", sched.timeLimit, "seconds");

    std::string dimacsPath;
    uint64_t solveSeed = 0;
    CLI::App* solveCmd = app.add_subcommand("solve-dimacs", "solve a CNF file");
    solveCmd->add_option("file", dimacsPath, "CNF file")->required();
    solveCmd->add_option("--seed", solveSeed, "solver tie-breaking seed");

    BenchArgs bench;
    CLI::App* benchCmd = app.add_subcommand("bench", "native vs baseline comparison");
    benchCmd->add_option("--kind", bench.kind, "mine|mrcpsp");
    benchCmd->add_option("--task", bench.mine.task, "mining task");
    benchCmd->add_option("--min-support", bench.mine.minSupport, "frequency threshold");
    benchCmd->add_option("--threshold", bench.mine.threshold, "DFIS threshold");
    benchCmd->add_option("--strategy", bench.strategy, "mrcpsp strategy");
    benchCmd->add_option("--modes", bench.modes, "comma list of modes");
    benchCmd->add_option("--repeats", bench.repeats, "runs per instance");
    benchCmd->add_option("--seed", bench.seed, "base seed; repeat i uses seed+i");
    benchCmd->add_option("--time-limit", bench.timeLimit, "seconds per run");
    benchCmd->add_option("--out", bench.out, "comparison CSV ('-' = stdout)");
    benchCmd->add_option("instances", bench.instances, "instance files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (mineCmd->parsed()) return runMine(mine);
        if (optCmd->parsed()) return runOptimize(opt);
        if (schedCmd->parsed()) return runMrcpspCmd(sched);
        if (solveCmd->parsed()) return runSolveDimacs(dimacsPath, solveSeed);
        if (benchCmd->parsed()) return runBench(bench);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
