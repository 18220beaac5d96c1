#include "lll/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "lll/conditions.hpp"
#include "lll/engine.hpp"
#include "lll/json_io.hpp"
#include "lll/parallel.hpp"
#include "lll/rainbow.hpp"
#include "lll/stable.hpp"
#include "lll/verify.hpp"

namespace lll {
namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string item = text.substr(pos, comma - pos);
        if (!item.empty()) out.push_back(item);
        pos = comma + 1;
    }
    return out;
}

std::vector<Rat> rat_list(const std::string& text) {
    std::vector<Rat> out;
    for (const std::string& item : split_csv(text)) out.push_back(rat_parse(item));
    return out;
}

std::vector<int> int_list(const std::string& text) {
    std::vector<int> out;
    for (const std::string& item : split_csv(text)) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw input_error("expected an integer list, got \"" + text + "\"");
        }
    }
    return out;
}

std::vector<Rat> broadcast(std::vector<Rat> vals, size_t n, const char* what) {
    if (vals.size() == 1) return std::vector<Rat>(n, vals[0]);
    if (vals.size() != n)
        throw input_error(std::string(what) + " needs 1 or " + std::to_string(n) + " values, got " +
                          std::to_string(vals.size()));
    return vals;
}

std::string join_args(const std::vector<std::string>& args) {
    std::string out;
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) out += ' ';
        out += args[i];
    }
    return out;
}

std::string normalize_check(const std::string& name) {
    if (name == "atomic" || name == "atomicity") return "atomicity";
    if (name == "causality" || name == "causal") return "causality";
    if (name == "weak" || name == "weak_commutativity") return "weak";
    if (name == "strong" || name == "strong_commutativity") return "strong";
    if (name == "regenerating" || name == "regen") return "regenerating";
    throw input_error("unknown check \"" + name +
                      "\" (expected atomic | causality | weak | strong | regenerating)");
}

BoundVariant variant_from(const std::string& name) {
    if (name == "seq_a") return BoundVariant::seq_a;
    if (name == "seq_b") return BoundVariant::seq_b;
    if (name == "seq_c") return BoundVariant::seq_c;
    if (name == "parallel") return BoundVariant::parallel;
    throw input_error("unknown bound variant \"" + name +
                      "\" (expected seq_a | seq_b | seq_c | parallel)");
}

json rainbow_params_json(const RainbowParams& p) {
    return json{{"n", p.n},
                {"q", p.q},
                {"flaw_count", p.flaw_count},
                {"gamma", p.gamma},
                {"mu", rat_str(p.mu)},
                {"theta", rat_str(p.theta)},
                {"theta_value", to_double(p.theta)},
                {"a_f", p.a_f},
                {"t_seq", p.t_seq},
                {"t_par", p.t_par},
                {"certified", p.certified}};
}

json rows_json(const std::vector<TrialRow>& rows) {
    json out = json::array();
    for (const TrialRow& r : rows)
        out.push_back(json{{"trial", r.trial},
                           {"seed", r.seed},
                           {"strategy", r.strategy},
                           {"steps", r.steps},
                           {"rounds", r.rounds},
                           {"terminated", r.terminated}});
    return out;
}

json tail_json(const std::vector<TailEntry>& tail) {
    json out = json::array();
    for (const TailEntry& e : tail)
        out.push_back(json{{"r", e.r}, {"empirical", e.empirical}, {"bound", e.bound}});
    return out;
}

// ---------------------------------------------------------------- verify ---

struct VerifyArgs {
    std::string instance;
    std::string checks;
    std::string out_path;
    int jobs = 1;
};

int do_verify(const VerifyArgs& a, const std::string& config, std::ostream& os) {
    LoadedInstance li = load_instance(a.instance);
    std::vector<std::string> names;
    for (const std::string& c : split_csv(a.checks)) names.push_back(normalize_check(c));
    VerificationReport rep = verify_all(li.inst(), li.dep, names, a.jobs);

    json results = json::array();
    for (const CheckResult& r : rep.results) {
        os << (r.ok ? "pass" : "FAIL") << "  " << r.check << "  (" << r.cases_checked << " cases)\n";
        if (!r.ok)
            for (const std::string& w : r.witnesses) os << "      " << w << "\n";
        results.push_back(json{{"check", r.check},
                               {"ok", r.ok},
                               {"cases_checked", r.cases_checked},
                               {"witnesses", r.witnesses}});
    }
    json out{{"header", report_header("verify", config, {})},
             {"instance", li.name},
             {"results", std::move(results)},
             {"all_ok", rep.all_ok()}};
    if (!a.out_path.empty()) write_json_file(a.out_path, out);
    return rep.all_ok() ? 0 : 1;
}

// ------------------------------------------------------------ conditions ---

struct CondArgs {
    std::string instance;
    std::string mode = "cluster";
    std::string mu;
    std::string p;
    std::string lambda;
    std::string theta;
    std::string variant = "seq_c";
    size_t cap = kDefaultEnumCap;
    int jobs = 1;
    std::string out_path;
};

struct ParamsBuild {
    LllParams params;
    bool certified = false;
    json detail;
};

/** Shared by `conditions` and `stable`: assemble certified (lambda, weights,
    theta) from the flags, defaulting lambda to the tight per-flaw charges. */
ParamsBuild build_params(const LoadedInstance& li, const std::string& mode, const std::string& mu,
                         const std::string& p, const std::string& lambda_flag,
                         const std::string& theta_flag, size_t cap, int jobs) {
    const EnumeratedInstance& inst = li.inst();
    const size_t nf = static_cast<size_t>(inst.flaw_count());
    ParamsBuild b;
    b.params.lambda =
        lambda_flag.empty() ? minimal_lambda(inst) : broadcast(rat_list(lambda_flag), nf, "--lambda");
    json lam = json::array();
    for (const Rat& l : b.params.lambda) lam.push_back(rat_str(l));
    b.detail["lambda"] = std::move(lam);

    if (mode == "cluster" || mode == "symmetric") {
        if (mu.empty()) throw input_error("--mu is required in cluster/symmetric mode");
        b.params.mode = mode == "cluster" ? LllParams::Mode::cluster : LllParams::Mode::symmetric;
        b.params.weights = broadcast(rat_list(mu), nf, "--mu");
        std::vector<Rat> thetas =
            mode == "cluster"
                ? evaluate_cluster_theta(li.dep, b.params.lambda, b.params.weights, cap, jobs)
                : evaluate_symmetric_theta(li.dep, b.params.lambda, b.params.weights);
        Rat theta(0);
        json tj = json::array();
        for (const Rat& t : thetas) {
            theta = std::max(theta, t);
            tj.push_back(rat_str(t));
        }
        if (!theta_flag.empty()) theta = rat_parse(theta_flag);
        b.params.theta = theta;
        b.detail["theta_f"] = std::move(tj);
        b.certified = theta < 1;
    } else if (mode == "shearer") {
        if (p.empty()) throw input_error("--p is required in shearer mode");
        b.params.mode = LllParams::Mode::shearer;
        b.params.weights = broadcast(rat_list(p), nf, "--p");
        Rat theta(0);
        if (theta_flag.empty()) {
            for (size_t f = 0; f < nf; ++f) {
                if (sgn(b.params.weights[f]) <= 0) throw input_error("--p entries must be positive");
                const Rat ratio = b.params.lambda[f] / b.params.weights[f];
                theta = std::max(theta, ratio);
            }
        } else {
            theta = rat_parse(theta_flag);
        }
        ShearerVerdict v = check_shearer(li.dep, b.params.lambda, b.params.weights, theta, cap);
        b.params.theta = theta;
        b.detail["shearer"] =
            json{{"ok", v.ok}, {"reason", v.reason}, {"q_empty", rat_str(v.q_empty)}};
        if (nf <= 16) {
            ShearerTable table = shearer_q(li.dep, b.params.weights, cap);
            json rows = json::array();
            std::vector<std::pair<uint64_t, Rat>> entries(table.entries().begin(),
                                                          table.entries().end());
            std::sort(entries.begin(), entries.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            for (const auto& [mask, qv] : entries) {
                std::vector<int> set;
                for (size_t f = 0; f < nf; ++f)
                    if (mask >> f & 1) set.push_back(static_cast<int>(f));
                rows.push_back(json{{"set", set}, {"q", rat_str(qv)}});
            }
            b.detail["q_table"] = std::move(rows);
        }
        b.certified = v.ok && theta < 1;
    } else {
        throw input_error("unknown mode \"" + mode + "\" (expected cluster | symmetric | shearer)");
    }
    b.detail["theta"] = rat_str(b.params.theta);
    b.detail["theta_value"] = to_double(b.params.theta);
    b.detail["certified"] = b.certified;
    return b;
}

int do_conditions(const CondArgs& a, const std::string& config, std::ostream& os) {
    LoadedInstance li = load_instance(a.instance);
    json out{{"header", report_header("conditions", config, {})}, {"instance", li.name}};

    if (li.kind == "coloring") {
        RainbowParams rp = compute_params(*li.coloring);
        out["params"] = rainbow_params_json(rp);
        os << "flaws = " << rp.flaw_count << ", mu = " << rat_str(rp.mu)
           << ", theta = " << std::setprecision(12) << to_double(rp.theta) << "\n";
        if (rp.certified)
            os << "T_seq = " << rp.t_seq << ", T_par = " << rp.t_par << "\n";
        else
            os << "no certificate: theta >= 1\n";
        if (!a.out_path.empty()) write_json_file(a.out_path, out);
        return rp.certified ? 0 : 1;
    }

    ParamsBuild b = build_params(li, a.mode, a.mu, a.p, a.lambda, a.theta, a.cap, a.jobs);
    out["mode"] = a.mode;
    out.update(b.detail);
    os << "theta = " << std::setprecision(12) << to_double(b.params.theta)
       << (b.certified ? "" : "  (no certificate)") << "\n";
    if (b.certified) {
        BoundReport br = bound_T(li.inst(), li.dep, b.params, variant_from(a.variant), a.cap);
        out["bound"] = json{{"variant", to_string(br.variant)},
                            {"gamma_init", br.gamma_init},
                            {"log_weight_sum", br.log_weight_sum},
                            {"T", br.T},
                            {"truncated", br.truncated}};
        os << "T(" << to_string(br.variant) << ") = " << br.T << "\n";
    }
    if (!a.out_path.empty()) write_json_file(a.out_path, out);
    return b.certified ? 0 : 1;
}

// ------------------------------------------------------------------- run ---

struct RunArgs {
    std::string instance;
    size_t trials = 1;
    uint64_t seed = 0;
    std::string strategy = "pi_stable";
    bool parallel = false;
    size_t max_steps = 1000000;
    size_t max_rounds = 100000;
    int jobs = 1;
    bool force = false;
    std::string out_path;
    std::string format;
};

int do_run(const RunArgs& a, const std::string& config, std::ostream& os) {
    LoadedInstance li = load_instance(a.instance);
    json summary{{"header", report_header("run", config, {a.seed})},
                 {"instance", li.name},
                 {"strategy", a.strategy},
                 {"rounds_mode", a.parallel},
                 {"trials", a.trials}};
    std::vector<TrialRow> rows;

    if (li.kind == "coloring") {
        ExperimentOptions eo;
        eo.rounds_mode = a.parallel;
        eo.jobs = a.jobs;
        eo.force = a.force;
        eo.max_steps = a.max_steps;
        eo.max_rounds = a.max_rounds;
        ExperimentStats st = run_rainbow_experiment(*li.coloring, a.trials, a.seed, a.strategy, eo);
        rows = std::move(st.rows);
        summary["params"] = rainbow_params_json(st.params);
        summary["tail"] = tail_json(st.tail);
    } else {
        const EnumeratedInstance& inst = li.inst();
        const auto proto = make_strategy(a.strategy, li.dep);
        Rng master(a.seed);
        std::vector<uint64_t> seeds(a.trials);
        for (size_t i = 0; i < a.trials; ++i) seeds[i] = master.split(i).seed();
        rows.resize(a.trials);
        parallel_for(a.trials, a.jobs, [&](size_t i) {
            auto strat = proto->clone();
            TrialRow row;
            row.trial = i;
            row.seed = seeds[i];
            row.strategy = strat->name();
            if (a.parallel) {
                ParallelOptions popt;
                popt.max_rounds = a.max_rounds;
                popt.max_steps = a.max_steps;
                popt.record = false;
                auto outc = run_parallel(inst, li.dep, *strat, seeds[i], popt);
                row.steps = outc.steps;
                row.rounds = outc.rounds.size();
                row.terminated = outc.terminated;
            } else {
                RunOptions ropt;
                ropt.max_steps = a.max_steps;
                ropt.record = false;
                auto outc = run_sequential(inst, *strat, seeds[i], ropt);
                row.steps = outc.steps;
                row.terminated = outc.terminated;
            }
            rows[i] = std::move(row);
        });
    }

    double step_sum = 0, round_sum = 0;
    size_t max_steps = 0, max_rounds = 0;
    bool all_terminated = true;
    for (const TrialRow& r : rows) {
        step_sum += static_cast<double>(r.steps);
        round_sum += static_cast<double>(r.rounds);
        max_steps = std::max(max_steps, r.steps);
        max_rounds = std::max(max_rounds, r.rounds);
        all_terminated &= r.terminated;
    }
    summary["mean_steps"] = step_sum / static_cast<double>(rows.size());
    summary["max_steps"] = max_steps;
    summary["mean_rounds"] = round_sum / static_cast<double>(rows.size());
    summary["max_rounds"] = max_rounds;
    summary["all_terminated"] = all_terminated;
    summary["rows"] = rows_json(rows);

    const std::string csv = trial_rows_csv(rows);
    if (!a.out_path.empty()) {
        write_text_file(a.out_path + ".csv", csv);
        write_json_file(a.out_path + ".json", summary);
    }
    if (a.format == "csv")
        os << csv;
    else if (a.format == "json")
        os << summary.dump(2) << "\n";
    else
        os << "trials = " << rows.size() << ", mean steps = " << summary["mean_steps"].get<double>()
           << ", max steps = " << max_steps << (a.parallel ? ", mean rounds = " : "")
           << (a.parallel ? std::to_string(summary["mean_rounds"].get<double>()) : std::string())
           << ", all terminated = " << (all_terminated ? "yes" : "no") << "\n";
    return 0;
}

// ---------------------------------------------------------------- stable ---

struct StableArgs {
    std::string instance;
    std::string order;
    std::string root;
    size_t t = 1;
    size_t max_len = 0; // 0 = same as t
    bool strong = false;
    std::string mode = "cluster";
    std::string mu;
    std::string p;
    std::string lambda;
    std::string theta;
    size_t cap = kDefaultEnumCap;
    bool audit = false;
    std::string strategy = "first_present";
    std::string out_path;
};

int do_stable(const StableArgs& a, const std::string& config, std::ostream& os) {
    LoadedInstance li = load_instance(a.instance);
    const EnumeratedInstance& inst = li.inst();
    const std::vector<int> order = int_list(a.order);
    json out{{"header", report_header("stable", config, {})}, {"instance", li.name}};

    if (a.audit) {
        const auto strat = make_strategy(a.strategy, li.dep);
        BadSet bad = enumerate_bad(inst, *strat, a.t, a.cap);
        std::set<Walk> images;
        bool stable_ok = true, endpoints_ok = true;
        for (const Walk& tau : bad.walks) {
            CanonWalkResult res = forward_canonicalize_walk(inst, li.dep, order, tau);
            stable_ok &= is_pi_stable(li.dep, order, res.walk.word());
            endpoints_ok &= res.walk.start == tau.start && res.walk.final_state() == tau.final_state();
            images.insert(res.walk);
        }
        const bool fwd_injective = images.size() == bad.walks.size();
        BackwardAudit ba = backward_canonicalize_set(inst, li.dep, order, bad.walks, std::nullopt);
        const bool pass = fwd_injective && stable_ok && endpoints_ok && ba.injective &&
                          ba.prefix_ok && ba.groups_prefix_free;
        out["audit"] = json{{"walks", bad.walks.size()},
                            {"total_probability", rat_str(bad.total)},
                            {"forward",
                             json{{"injective", fwd_injective},
                                  {"images_stable", stable_ok},
                                  {"endpoints_preserved", endpoints_ok}}},
                            {"backward",
                             json{{"injective", ba.injective},
                                  {"prefix_ok", ba.prefix_ok},
                                  {"groups_prefix_free", ba.groups_prefix_free},
                                  {"rounds", ba.rounds},
                                  {"swaps", ba.swap_count}}},
                            {"pass", pass}};
        os << "walks = " << bad.walks.size() << ", forward injective = " << (fwd_injective ? "yes" : "no")
           << ", images stable = " << (stable_ok ? "yes" : "no")
           << ", backward audit = " << (ba.injective && ba.prefix_ok && ba.groups_prefix_free ? "pass" : "FAIL")
           << "\n";
        if (!a.out_path.empty()) write_json_file(a.out_path, out);
        return pass ? 0 : 1;
    }

    ParamsBuild b = build_params(li, a.mode, a.mu, a.p, a.lambda, a.theta, a.cap, 1);
    out.update(b.detail);
    const size_t max_len = a.max_len == 0 ? a.t : a.max_len;
    StabCountingReport rep = verify_stab_counting(&inst, li.dep, order, b.params, int_list(a.root),
                                                  a.t, max_len, a.strong, a.cap);
    out["counting"] = json{{"root", rep.root},
                           {"t", rep.t},
                           {"max_len", rep.max_len},
                           {"strong", rep.strong},
                           {"enumerated", rep.enumerated},
                           {"partial_sum", rat_str(rep.partial_sum)},
                           {"bound", rat_str(rep.bound)},
                           {"tail_bound", rep.tail_bound},
                           {"ok", rep.ok}};
    os << (rep.ok ? "pass" : "FAIL") << "  " << rep.enumerated << " words, sum "
       << to_double(rep.partial_sum) << " vs bound " << to_double(rep.bound) << "\n";
    if (!a.out_path.empty()) write_json_file(a.out_path, out);
    return rep.ok ? 0 : 1;
}

// ----------------------------------------------------------- rainbow-gen ---

struct GenArgs {
    int n = 4;
    int q = 2;
    uint64_t seed = 0;
    std::string out_path;
};

int do_gen(const GenArgs& a, std::ostream& os) {
    ColoredGraph g = random_coloring(a.n, a.q, a.seed);
    json j = coloring_to_json(g);
    j["seed"] = a.seed;
    RainbowParams rp = compute_params(g);
    os << "K_" << g.nverts() << " with " << g.color_count() << " colors, " << rp.flaw_count
       << " flaws, theta = " << std::setprecision(12) << to_double(rp.theta)
       << (rp.certified ? "" : " (no certificate)") << "\n";
    if (a.out_path.empty())
        os << j.dump(2) << "\n";
    else
        write_json_file(a.out_path, j);
    return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& os) {
    CLI::App app{"resampling-walk toolkit: verification, certificates, experiments"};
    app.require_subcommand(1);

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand("verify", "structural checks by exhaustive enumeration");
    verify->add_option("--instance", va.instance, "instance JSON file")->required();
    verify->add_option("--checks", va.checks, "comma list: atomic,causality,weak,strong,regenerating");
    verify->add_option("--jobs", va.jobs, "worker threads (0 = all cores)");
    verify->add_option("--out", va.out_path, "write the JSON report here");

    CondArgs ca;
    CLI::App* cond = app.add_subcommand("conditions", "evaluate convergence certificates and bounds");
    cond->add_option("--instance", ca.instance, "instance JSON file")->required();
    cond->add_option("--mode", ca.mode, "cluster | symmetric | shearer");
    cond->add_option("--mu", ca.mu, "weights (rational, single value broadcasts)");
    cond->add_option("--p", ca.p, "shearer probabilities");
    cond->add_option("--lambda", ca.lambda, "per-flaw charges (default: tightest from the instance)");
    cond->add_option("--theta", ca.theta, "override the contraction ratio");
    cond->add_option("--variant", ca.variant, "step bound: seq_a | seq_b | seq_c | parallel");
    cond->add_option("--cap", ca.cap, "enumeration cap");
    cond->add_option("--jobs", ca.jobs, "worker threads");
    cond->add_option("--out", ca.out_path, "write the JSON report here");

    RunArgs ra;
    CLI::App* run = app.add_subcommand("run", "seeded Monte Carlo trials of the walk");
    run->add_option("--instance", ra.instance, "instance JSON file")->required();
    run->add_option("--trials", ra.trials, "number of trials");
    run->add_option("--seed", ra.seed, "master seed");
    run->add_option("--strategy", ra.strategy,
                    "first_present | pi_stable | uniform_random | scripted:f1,f2,...");
    run->add_flag("--parallel", ra.parallel, "round-based walk (rounds column populated)");
    run->add_option("--max-steps", ra.max_steps, "per-trial step cap");
    run->add_option("--max-rounds", ra.max_rounds, "per-trial round cap");
    run->add_option("--jobs", ra.jobs, "worker threads");
    run->add_flag("--force", ra.force, "run colorings even without a certificate");
    run->add_option("--out", ra.out_path, "prefix: writes <prefix>.csv and <prefix>.json");
    run->add_option("--format", ra.format, "stdout format: csv | json (default: short text)");

    StableArgs sa;
    CLI::App* stable = app.add_subcommand("stable", "counting bounds and canonicalization audits");
    stable->add_option("--instance", sa.instance, "instance JSON file")->required();
    stable->add_option("--order", sa.order, "priority order (rank per flaw, comma list)");
    stable->add_option("--root", sa.root, "root independent set (comma list, empty = {})");
    stable->add_option("--t", sa.t, "minimum total word length");
    stable->add_option("--max-len", sa.max_len, "truncation length (default: t)");
    stable->add_flag("--strong", sa.strong, "strongly-stable sequence mode (witness-free)");
    stable->add_option("--mode", sa.mode, "cluster | symmetric | shearer");
    stable->add_option("--mu", sa.mu, "weights for the bound");
    stable->add_option("--p", sa.p, "shearer probabilities");
    stable->add_option("--lambda", sa.lambda, "per-flaw charges (default: tightest)");
    stable->add_option("--theta", sa.theta, "override the contraction ratio");
    stable->add_option("--cap", sa.cap, "enumeration cap");
    stable->add_flag("--audit", sa.audit, "canonicalization audit over the unrolled walk set");
    stable->add_option("--strategy", sa.strategy, "deterministic strategy for the audit");
    stable->add_option("--out", sa.out_path, "write the JSON report here");

    GenArgs ga;
    CLI::App* gen = app.add_subcommand("rainbow-gen", "generate a random edge coloring of K_{2n}");
    gen->add_option("--n", ga.n, "half the vertex count")->required();
    gen->add_option("--q", ga.q, "exact color-class size")->required();
    gen->add_option("--seed", ga.seed, "coloring seed");
    gen->add_option("--out", ga.out_path, "write the coloring JSON here (default: stdout)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, os, os);
        return code == 0 ? 0 : 2;
    }

    const std::string config = join_args(args);
    try {
        if (verify->parsed()) return do_verify(va, config, os);
        if (cond->parsed()) return do_conditions(ca, config, os);
        if (run->parsed()) return do_run(ra, config, os);
        if (stable->parsed()) return do_stable(sa, config, os);
        if (gen->parsed()) return do_gen(ga, os);
        os << "no subcommand\n";
        return 2;
    } catch (const capability_error& e) {
        os << "capability error: " << e.what() << "\n";
        return 3;
    } catch (const property_violation& e) {
        os << "property violation: " << e.what() << "\n";
        return 1;
    } catch (const input_error& e) {
        os << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        os << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace lll
