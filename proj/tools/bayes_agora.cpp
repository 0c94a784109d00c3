// bayes_agora: command-line front end.
//
// Exit codes: 0 ok, 1 validation or I/O error, 2 budget refusal, 3 verify failure.

#include <bayes_agora.hpp>

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace agora;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_budget = 2;
constexpr int exit_verify = 3;

struct Common {
    unsigned threads = default_threads();
    std::optional<std::uint64_t> budget;
    std::vector<std::string> argv;

    std::uint64_t state_budget() const { return budget.value_or(default_state_budget()); }
};

struct GraphSource {
    std::string file;
    std::string family;
    int n = 0;
    double gnp_p = 0.5;
    std::uint64_t gnp_seed = 0;

    SocialGraph load() const
    {
        if (!file.empty())
            return read_graph_file(file);
        if (family.empty())
            throw Error(ErrorCode::InvalidArgument, "give --graph <file> or --family <name> --n <count>");
        if (family == "gnp")
            return graphs::gnp_connected(n, gnp_p, gnp_seed);
        return family_graph(family, n);
    }

    json to_json() const
    {
        if (!file.empty())
            return json{{"file", file}};
        json j{{"family", family}, {"n", n}};
        if (family == "gnp")
            j.update({{"p", gnp_p}, {"seed", gnp_seed}});
        return j;
    }

    void attach(CLI::App* app)
    {
        app->add_option("--graph", file, "Graph file ('n <count> directed' header, then 'u w' lines)");
        app->add_option("--family", family, "Generated graph: chain|cycle|complete|star|royal_family|gnp");
        app->add_option("--n", n, "Vertex count for --family");
        app->add_option("--gnp-p", gnp_p, "Edge probability for gnp");
        app->add_option("--gnp-seed", gnp_seed, "Seed for gnp");
    }
};

std::string read_text(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Accepts a JSON literal or a path to a file holding one.
std::string json_argument(const std::string& value)
{
    const auto first = value.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (value[first] == '{' || value[first] == '['))
        return value;
    return read_text(value);
}

json parse_json_text(const std::string& text, const std::string& what)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, what + " is not valid JSON: " + e.what());
    }
}

void emit(const std::string& out, const std::string& content, const json& config)
{
    if (out.empty() || out == "-") {
        std::cout << content;
        return;
    }
    write_file_atomic(out, content);
    write_file_atomic(sidecar_path(out), config.dump(2) + "\n");
}

json base_config(const Common& common, const std::string& command)
{
    return json{{"tool", "bayes_agora"},
                {"version", "0.1.0"},
                {"command", command},
                {"argv", common.argv},
                {"state_budget", common.state_budget()}};
}

// ---------------------------------------------------------------------------

int cmd_graph_info(const Common&, const GraphSource& src)
{
    const auto g = src.load();
    std::cout << "n " << g.size() << "\n";
    std::cout << "edges " << g.edge_count() << "\n";
    std::cout << "undirected " << (g.is_undirected() ? "yes" : "no") << "\n";
    std::cout << "strongly_connected " << (g.is_strongly_connected() ? "yes" : "no") << "\n";
    std::cout << "max_out_degree " << g.max_out_degree() << "\n";
    for (int L = 1; L <= 4; ++L)
        std::cout << "locally_strongly_connected_L" << L << " "
                  << (is_L_locally_strongly_connected(g, L) ? "yes" : "no") << "\n";
    return exit_ok;
}

int cmd_graph_generate(const Common& common, const GraphSource& src, const std::string& out)
{
    const auto g = src.load();
    std::ostringstream text;
    write_graph(text, g);
    auto config = base_config(common, "graph generate");
    config["graph"] = src.to_json();
    emit(out, text.str(), config);
    return exit_ok;
}

struct ExactArgs {
    std::string model;
    std::string tiebreak = "own-initial";
    int t_cap = 64;
    std::string out;
    std::string summary;
};

int cmd_exact(const Common& common, const GraphSource& src, const ExactArgs& a)
{
    const auto g = src.load();
    const auto model = parse_model(json_argument(a.model));
    EngineOptions options;
    options.tiebreak = parse_tiebreak(a.tiebreak);
    options.t_cap = a.t_cap;
    options.state_budget = common.state_budget();
    const auto run = run_exact(g, model, options);
    if (run.cap_hit())
        std::cerr << "warning: no fixpoint within t_cap = " << a.t_cap << "; rows stop at the cap\n";

    CsvBuilder csv({"profile_id", "agent", "time", "action", "belief_num", "belief_den", "cell_id"});
    for (std::size_t p = 0; p < run.profiles(); ++p)
        for (int u = 0; u < run.agents(); ++u)
            for (int t = 1; t <= run.rounds(); ++t) {
                const auto& c = run.cell_stat(u, t, p);
                const Rational x = ratio(c.w1, c.w0 + c.w1);
                csv.add(p, u, t, static_cast<int>(c.action), numerator_of(x).str(), denominator_of(x).str(),
                        run.cell(u, t, p));
            }

    CsvBuilder summary({"agent", "t", "p_u", "p_u_decimal"});
    for (int u = 0; u < run.agents(); ++u)
        for (int t = 1; t <= run.rounds(); ++t) {
            const auto p = accuracy(run, u, t);
            summary.add(u, t, to_string(p), to_decimal(p));
        }
    if (run.fixpoint_reached()) {
        const auto la = learning_and_agreement(run);
        const int fix = *run.fixpoint_time();
        summary.add("P_learn", fix, to_string(la.learn), to_decimal(la.learn));
        summary.add("P_agree", fix, to_string(la.agree), to_decimal(la.agree));
        summary.add("P_disagree", fix, to_string(la.disagree), to_decimal(la.disagree));
    }

    auto config = base_config(common, "exact");
    config.update({{"graph", src.to_json()},
                   {"model", model_to_json(model)},
                   {"tiebreak", to_string(options.tiebreak)},
                   {"t_cap", a.t_cap},
                   {"rounds", run.rounds()},
                   {"fixpoint_time", run.fixpoint_time() ? json(*run.fixpoint_time()) : json(nullptr)},
                   {"cap_hit", run.cap_hit()}});
    emit(a.out, csv.str(), config);
    std::string summary_path = a.summary;
    if (summary_path.empty() && !a.out.empty() && a.out != "-")
        summary_path = a.out + ".summary.csv";
    if (!summary_path.empty())
        emit(summary_path, summary.str(), config);
    return exit_ok;
}

struct SimulateArgs {
    std::string model;
    std::string tiebreak = "own-initial";
    std::uint64_t seed = 0;
    int horizon = 3;
    std::string out;
};

int cmd_simulate(const Common& common, const GraphSource& src, const SimulateArgs& a)
{
    const auto g = src.load();
    g.require_strongly_connected();
    const auto model = parse_model(json_argument(a.model));
    const auto rule = parse_tiebreak(a.tiebreak);
    const auto world = sample_world(model, g, a.seed);
    const BallEngine engine(g, model, a.horizon, rule, common.state_budget(), common.threads);
    const auto result = engine.run(world);

    CsvBuilder csv({"agent", "time", "action", "belief_num", "belief_den", "ball_size"});
    for (int u = 0; u < g.size(); ++u)
        for (int t = 1; t <= a.horizon; ++t) {
            const auto& x = result.beliefs[u][t - 1];
            csv.add(u, t, result.actions[u][t - 1], numerator_of(x).str(), denominator_of(x).str(),
                    result.ball_sizes[u]);
        }
    auto config = base_config(common, "simulate");
    std::vector<std::string> labels;
    for (int s : world.signals)
        labels.push_back(model.support()[static_cast<std::size_t>(s)]);
    config.update({{"graph", src.to_json()},
                   {"model", model_to_json(model)},
                   {"tiebreak", to_string(rule)},
                   {"seed", a.seed},
                   {"horizon", a.horizon},
                   {"state", world.state},
                   {"signals", labels}});
    emit(a.out, csv.str(), config);
    return exit_ok;
}

int report_row_errors(const std::vector<RowError>& errors)
{
    int code = exit_ok;
    for (const auto& e : errors) {
        std::cerr << "n=" << e.n << ": " << e.message << "\n";
        code = std::max(code, is_budget_error(e.code) ? exit_budget : exit_validation);
    }
    return code;
}

int cmd_curve(const Common& common, const std::string& spec_arg, const std::string& out)
{
    auto spec = spec_from_json(parse_json_text(json_argument(spec_arg), "experiment spec"));
    if (common.budget)
        spec.state_budget = *common.budget;
    const auto result = learning_curve(spec, common.threads);
    auto config = base_config(common, "curve");
    config["spec"] = to_json(spec);
    json errors = json::array();
    for (const auto& e : result.errors)
        errors.push_back({{"n", e.n}, {"code", std::string(to_string(e.code))}, {"message", e.message}});
    config["errors"] = errors;
    emit(out, curve_csv(result.rows), config);
    return report_row_errors(result.errors);
}

struct RoyalArgs {
    std::vector<int> sizes{10, 14, 18};
    std::string q = "11/20";
    int trials = 10000;
    std::uint64_t seed = 1;
    std::optional<int> horizon;
    int exact_n = 8;
    std::string tiebreak = "own-initial";
    std::string out;
};

int cmd_royal(const Common& common, const RoyalArgs& a)
{
    RoyalOptions opt;
    opt.sizes = a.sizes;
    opt.q = parse_rational(a.q);
    opt.trials = a.trials;
    opt.master_seed = a.seed;
    opt.horizon = a.horizon;
    opt.exact_n = a.exact_n;
    opt.tiebreak = parse_tiebreak(a.tiebreak);
    opt.state_budget = common.state_budget();
    make_binary_model(opt.q);
    const auto r = royal_family_experiment(opt, common.threads);
    for (const auto& w : r.warnings)
        std::cerr << "warning: " << w << "\n";

    auto config = base_config(common, "experiment royal");
    json events = json::array();
    for (const auto& e : r.events)
        events.push_back({{"n", e.n},
                          {"trials", e.trials},
                          {"all_royals_wrong", e.all_royals_wrong},
                          {"wilson_lo", format_fixed(e.interval.lo)},
                          {"wilson_hi", format_fixed(e.interval.hi)}});
    config.update({{"sizes", a.sizes},
                   {"q", to_string(opt.q)},
                   {"trials", a.trials},
                   {"master_seed", a.seed},
                   {"horizon", a.horizon ? json(*a.horizon) : json("limit")},
                   {"tiebreak", to_string(opt.tiebreak)},
                   {"estimate", a.horizon ? "non-learning: some agent's action at the horizon differs from S"
                                          : "non-learning: some agent's limit action set is not {S}"},
                   {"analytic_all_royals_wrong", to_string(r.analytic_event)},
                   {"all_royals_wrong_events", events},
                   {"exact_check",
                    {{"n", r.exact.n},
                     {"event_profiles", r.exact.event_profiles},
                     {"violations", r.exact.violations},
                     {"event_probability", to_string(r.exact.event_probability)},
                     {"fixpoint_time", r.exact.fixpoint_time}}}});
    emit(a.out, curve_csv(r.rows), config);
    std::cerr << "exact royal_family(" << r.exact.n << "): " << r.exact.violations << " violations over "
              << r.exact.event_profiles << " all-royals-wrong outcomes\n";
    return r.exact.violations ? exit_verify : exit_ok;
}

int cmd_chain(const Common& common, const std::vector<int>& sizes, std::uint64_t seed, const std::string& out)
{
    const auto r = atomic_chain_experiment(sizes, seed, common.threads, common.state_budget());
    auto config = base_config(common, "experiment chain");
    json checks = json::array();
    std::size_t violations = 0;
    for (const auto& c : r.checks) {
        checks.push_back({{"n", c.n},
                          {"non_learning", to_string(c.non_learning)},
                          {"stuck_pairs", c.stuck_pairs},
                          {"violations", c.violations},
                          {"fixpoint_time", c.fixpoint_time}});
        violations += c.violations;
    }
    config.update({{"sizes", sizes},
                   {"model", model_to_json(make_binary_model(Rational(2, 3)))},
                   {"tiebreak", "own-initial"},
                   {"master_seed", seed},
                   {"estimate", "exact non-learning probability 1 - P_learn"},
                   {"stuck_checks", checks}});
    emit(out, curve_csv(r.rows), config);
    return violations ? exit_verify : exit_ok;
}

int cmd_agreement(const Common& common, const GraphSource& src, const std::vector<int>& m_list,
                  const std::string& tiebreak, const std::string& out)
{
    const auto g = src.load();
    const auto rule = parse_tiebreak(tiebreak);
    const std::string name = src.file.empty() ? src.family : src.file;
    const auto rows = agreement_refinement_experiment(g, name, m_list, rule, common.threads, common.state_budget());
    auto config = base_config(common, "experiment agreement");
    config.update({{"graph", src.to_json()}, {"m", m_list}, {"tiebreak", to_string(rule)}});
    emit(out, agreement_csv(rows, rule), config);
    for (const auto& r : rows)
        if (r.violations)
            return exit_verify;
    return exit_ok;
}

int cmd_stats_majority(const Common& common, const std::string& p_text, const std::string& out)
{
    const auto p = parse_rational(p_text);
    CsvBuilder csv({"quantity", "value", "decimal"});
    for (const auto& [name, value] : std::vector<std::pair<std::string, Rational>>{
             {"p", p}, {"majority_accuracy", majority_accuracy(p)}, {"eta_p", eta_p(p)}, {"epsilon_p", epsilon_p(p)}})
        csv.add(name, to_string(value), to_decimal(value));
    auto config = base_config(common, "stats majority");
    config["p"] = to_string(p);
    emit(out, csv.str(), config);
    return exit_ok;
}

/// {"bits":[["9/10","9/10"],...]} or {"bits":[{"one_given_one":..,"zero_given_zero":..},...]}
std::array<BitConditional, 3> bits_from_json(const json& j)
{
    if (!j.contains("bits") || !j.at("bits").is_array() || j.at("bits").size() != 3)
        throw Error(ErrorCode::ParseError, "map3 spec needs \"bits\": three entries");
    std::array<BitConditional, 3> bits;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& b = j.at("bits")[i];
        if (b.is_array() && b.size() == 2)
            bits[i] = {rational_from_json(b[0], "bit"), rational_from_json(b[1], "bit")};
        else if (b.is_object())
            bits[i] = {rational_from_json(b.at("one_given_one"), "one_given_one"),
                       rational_from_json(b.at("zero_given_zero"), "zero_given_zero")};
        else
            throw Error(ErrorCode::ParseError, "each bit is [P(X=1|S=1), P(X=0|S=0)]");
    }
    return bits;
}

int cmd_stats_map3(const Common& common, const std::string& spec_arg, const std::string& out)
{
    const auto j = parse_json_text(json_argument(spec_arg), "map3 spec");
    const auto bits = bits_from_json(j);
    const auto acc = map_three_bits(bits);
    CsvBuilder csv({"quantity", "value", "decimal"});
    for (std::size_t i = 0; i < 3; ++i) {
        const auto a = bits[i].accuracy();
        csv.add("bit" + std::to_string(i + 1) + "_accuracy", to_string(a), to_decimal(a));
    }
    csv.add("map_accuracy", to_string(acc), to_decimal(acc));
    auto config = base_config(common, "stats map3");
    config["spec"] = j;
    emit(out, csv.str(), config);
    return exit_ok;
}

struct FarBallArgs {
    std::string model;
    int u0 = 0;
    int u = 0;
    int r = 1;
    std::string tiebreak = "own-initial";
    std::string out;
};

int cmd_stats_far_ball(const Common& common, const GraphSource& src, const FarBallArgs& a)
{
    const auto g = src.load();
    const auto model = parse_model(json_argument(a.model));
    const auto rule = parse_tiebreak(a.tiebreak);
    EngineOptions base;
    base.state_budget = common.state_budget();
    const auto r = far_ball_independence(g, model, a.u0, a.u, a.r, rule, base);
    CsvBuilder csv({"quantity", "value", "decimal"});
    csv.add("gap_given_S0", to_string(r.per_state[0]), to_decimal(r.per_state[0]));
    csv.add("gap_given_S1", to_string(r.per_state[1]), to_decimal(r.per_state[1]));
    csv.add("gap", to_string(r.gap), to_decimal(r.gap));
    auto config = base_config(common, "stats far-ball");
    config.update({{"graph", src.to_json()},
                   {"model", model_to_json(model)},
                   {"u0", a.u0},
                   {"u", a.u},
                   {"r", a.r},
                   {"tiebreak", to_string(rule)},
                   {"distance", r.distance},
                   {"ball_size", r.ball_size},
                   {"fixpoint_time", r.fixpoint_time},
                   {"limit_variable", "A_{u0}: limit action set of u0 at the finite fixpoint T*"}});
    emit(a.out, csv.str(), config);
    return exit_ok;
}

int cmd_stats_degree(const Common& common, const std::string& model_arg, const std::vector<int>& degrees,
                     const std::string& tiebreak, const std::string& out)
{
    const auto model = parse_model(json_argument(model_arg));
    const auto rule = parse_tiebreak(tiebreak);
    EngineOptions base;
    base.state_budget = common.state_budget();
    const auto curve = degree_accuracy_curve(model, degrees, rule, base);
    CsvBuilder csv({"degree", "p_center_2", "p_center_2_decimal", "log_one_minus_p"});
    for (const auto& p : curve.points)
        csv.add(p.degree, to_string(p.accuracy), to_decimal(p.accuracy), format_fixed(p.log_error));
    auto config = base_config(common, "stats degree-curve");
    config.update({{"model", model_to_json(model)}, {"degrees", degrees}, {"tiebreak", to_string(rule)}});
    if (curve.decay_rate)
        config["fitted_log_error_slope"] = *curve.decay_rate;
    emit(out, csv.str(), config);
    return exit_ok;
}

int cmd_verify(const Common& common, bool full, const std::string& fault_name, const std::string& out)
{
    Fault fault = Fault::None;
    if (fault_name == "float-belief")
        fault = Fault::FloatBelief;
    else if (!fault_name.empty() && fault_name != "none")
        throw Error(ErrorCode::InvalidArgument, "unknown fault '" + fault_name + "' (none, float-belief)");
    const auto report = verify(full ? VerifyLevel::Full : VerifyLevel::Quick, fault);
    for (const auto& r : report.results)
        std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.checked << " checks, " << r.failures
                  << " failures)\n";
    std::cout << (report.passed() ? "verify: all invariants hold" : "verify: FAILED") << " over " << report.cases
              << " cases in " << format_fixed(report.seconds, 2) << " s\n";
    auto j = to_json(report);
    j["fault"] = fault_name.empty() ? "none" : fault_name;
    if (!out.empty()) {
        auto config = base_config(common, "verify");
        config["level"] = report.level;
        emit(out, j.dump(2) + "\n", config);
    }
    if (!report.passed())
        for (const auto& r : report.results)
            if (!r.passed())
                std::cerr << "counterexample for " << r.name << ": " << r.counterexample.dump() << "\n";
    return report.passed() ? exit_ok : exit_verify;
}

} // namespace

int main(int argc, char** argv)
{
    Common common;
    for (int i = 0; i < argc; ++i)
        common.argv.emplace_back(argv[i]);

    CLI::App app{"Exact Bayesian learning on social networks"};
    app.require_subcommand(1);
    app.add_option("--threads", common.threads, "Worker threads (default: hardware concurrency)")
        ->check(CLI::PositiveNumber);
    app.add_option("--budget", common.budget, "State budget m^n*n*rounds (overrides BAYES_AGORA_BUDGET)");

    // graph
    auto* graph = app.add_subcommand("graph", "Graph utilities");
    graph->require_subcommand(1);
    GraphSource info_src;
    auto* info = graph->add_subcommand("info", "Print graph properties");
    info->add_option("file", info_src.file, "Graph file");
    info_src.attach(info);
    GraphSource gen_src;
    std::string gen_out;
    auto* gen = graph->add_subcommand("generate", "Write a generated family graph");
    gen_src.attach(gen);
    gen->add_option("--out", gen_out, "Output file (stdout when omitted)");

    // exact
    GraphSource exact_src;
    ExactArgs exact_args;
    auto* exact = app.add_subcommand("exact", "Exact run over every signal profile");
    exact_src.attach(exact);
    exact->add_option("--model", exact_args.model, "Model JSON literal or file")->required();
    exact->add_option("--tiebreak", exact_args.tiebreak, "prefer-zero|prefer-one|own-initial|coin:<seed>");
    exact->add_option("--t-cap", exact_args.t_cap, "Round cap");
    exact->add_option("--out", exact_args.out, "Per-profile CSV")->required();
    exact->add_option("--summary", exact_args.summary, "Summary CSV (default <out>.summary.csv)");

    // simulate
    GraphSource sim_src;
    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Sampled world, exact up to a horizon");
    sim_src.attach(sim);
    sim->add_option("--model", sim_args.model, "Model JSON literal or file")->required();
    sim->add_option("--seed", sim_args.seed, "World seed");
    sim->add_option("--horizon", sim_args.horizon, "Horizon T")->check(CLI::PositiveNumber);
    sim->add_option("--tiebreak", sim_args.tiebreak, "Tie rule");
    sim->add_option("--out", sim_args.out, "Output CSV")->required();

    // curve
    std::string curve_spec, curve_out;
    auto* curve = app.add_subcommand("curve", "Learning curve q(n) from an experiment spec");
    curve->add_option("--spec", curve_spec, "Spec JSON literal or file")->required();
    curve->add_option("--out", curve_out, "Output CSV")->required();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Counterexample and agreement experiments");
    experiment->require_subcommand(1);
    RoyalArgs royal_args;
    auto* royal = experiment->add_subcommand("royal", "Royal-family non-learning");
    royal->add_option("--sizes", royal_args.sizes, "Sizes n")->delimiter(',');
    royal->add_option("--q", royal_args.q, "Signal accuracy q");
    royal->add_option("--trials", royal_args.trials, "Trials per n")->check(CLI::NonNegativeNumber);
    royal->add_option("--seed", royal_args.seed, "Master seed");
    royal->add_option("--horizon", royal_args.horizon, "Ball-engine horizon T (default: sample exact limit sets)")
        ->check(CLI::PositiveNumber);
    royal->add_option("--exact-n", royal_args.exact_n, "Size of the exhaustive exact check");
    royal->add_option("--tiebreak", royal_args.tiebreak, "Tie rule");
    royal->add_option("--out", royal_args.out, "Output CSV")->required();
    std::vector<int> chain_sizes{2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::uint64_t chain_seed = 0;
    std::string chain_out;
    auto* chain = experiment->add_subcommand("chain", "Atomic chain (q = 2/3, own-initial)");
    chain->add_option("--sizes", chain_sizes, "Sizes n")->delimiter(',');
    chain->add_option("--seed", chain_seed, "Master seed (recorded only; the experiment is exact)");
    chain->add_option("--out", chain_out, "Output CSV")->required();
    GraphSource agree_src;
    std::vector<int> agree_m{2, 4, 8};
    std::string agree_tiebreak = "own-initial", agree_out;
    auto* agree = experiment->add_subcommand("agreement", "Disagreement under quantile refinement");
    agree_src.attach(agree);
    agree->add_option("--m", agree_m, "Quantile sizes m")->delimiter(',');
    agree->add_option("--tiebreak", agree_tiebreak, "Tie rule");
    agree->add_option("--out", agree_out, "Output CSV")->required();

    // stats
    auto* stats = app.add_subcommand("stats", "Lemma constants and independence checks");
    stats->require_subcommand(1);
    std::string maj_p, maj_out;
    auto* maj = stats->add_subcommand("majority", "Majority accuracy, eta_p and epsilon_p");
    maj->add_option("--p", maj_p, "p in (1/2, 1)")->required();
    maj->add_option("--out", maj_out, "Output CSV (stdout when omitted)");
    std::string map3_spec, map3_out;
    auto* map3 = stats->add_subcommand("map3", "Exact MAP accuracy of three independent bits");
    map3->add_option("--spec", map3_spec, "JSON literal or file")->required();
    map3->add_option("--out", map3_out, "Output CSV (stdout when omitted)");
    GraphSource far_src;
    FarBallArgs far_args;
    auto* far = stats->add_subcommand("far-ball", "Independence of a far ball and a limit action set");
    far_src.attach(far);
    far->add_option("--model", far_args.model, "Model JSON literal or file")->required();
    far->add_option("--u0", far_args.u0, "Agent whose limit set is used")->required();
    far->add_option("--u", far_args.u, "Center of the signal ball")->required();
    far->add_option("--r", far_args.r, "Ball radius")->required();
    far->add_option("--tiebreak", far_args.tiebreak, "Tie rule");
    far->add_option("--out", far_args.out, "Output CSV (stdout when omitted)");
    std::string deg_model, deg_tiebreak = "own-initial", deg_out;
    std::vector<int> deg_list{2, 4, 6, 8};
    auto* deg = stats->add_subcommand("degree-curve", "p_center(2) on stars of growing degree");
    deg->add_option("--model", deg_model, "Model JSON literal or file")->required();
    deg->add_option("--degrees", deg_list, "Degrees d")->delimiter(',');
    deg->add_option("--tiebreak", deg_tiebreak, "Tie rule");
    deg->add_option("--out", deg_out, "Output CSV (stdout when omitted)");

    // verify
    bool verify_full = false;
    std::string verify_fault, verify_out;
    auto* ver = app.add_subcommand("verify", "Run the invariant battery");
    auto* quick_flag = ver->add_flag("--quick", "Reduced sizes (default)");
    ver->add_flag("--full", verify_full, "n <= 8 families plus chain(10)")->excludes(quick_flag);
    ver->add_option("--inject-fault", verify_fault, "Mutation test: none|float-belief");
    ver->add_option("--out", verify_out, "JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        if (info->parsed())
            return cmd_graph_info(common, info_src);
        if (gen->parsed())
            return cmd_graph_generate(common, gen_src, gen_out);
        if (exact->parsed())
            return cmd_exact(common, exact_src, exact_args);
        if (sim->parsed())
            return cmd_simulate(common, sim_src, sim_args);
        if (curve->parsed())
            return cmd_curve(common, curve_spec, curve_out);
        if (royal->parsed())
            return cmd_royal(common, royal_args);
        if (chain->parsed())
            return cmd_chain(common, chain_sizes, chain_seed, chain_out);
        if (agree->parsed())
            return cmd_agreement(common, agree_src, agree_m, agree_tiebreak, agree_out);
        if (maj->parsed())
            return cmd_stats_majority(common, maj_p, maj_out);
        if (map3->parsed())
            return cmd_stats_map3(common, map3_spec, map3_out);
        if (far->parsed())
            return cmd_stats_far_ball(common, far_src, far_args);
        if (deg->parsed())
            return cmd_stats_degree(common, deg_model, deg_list, deg_tiebreak, deg_out);
        if (ver->parsed())
            return cmd_verify(common, verify_full, verify_fault, verify_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_budget_error(e.code()) ? exit_budget : exit_validation;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return exit_budget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    }
    return exit_validation;
}
