#include "iset/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "iset/apps.hpp"
#include "iset/errors.hpp"
#include "iset/gen.hpp"
#include "iset/graph.hpp"
#include "iset/json_io.hpp"
#include "iset/oracle.hpp"
#include "iset/postprocess.hpp"
#include "iset/reductions.hpp"
#include "iset/rng.hpp"
#include "iset/rydberg.hpp"
#include "iset/sampling.hpp"

namespace iset::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Shared flags plus the run manifest bookkeeping.
struct RunContext {
    std::uint64_t seed = 0;
    fs::path out_dir = "out";
    std::string format = "json";
    int threads = 1;
    bool emit_plot_data = false;
    oracle::Caps caps;
    rydberg::EvolveConfig evolve_cfg;

    std::string subcommand;
    json config = json::object();
    std::map<std::string, std::string> input_hashes;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    json load_input(const fs::path& path) {
        std::string bytes = read_text_file(path);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                      static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
        input_hashes[path.filename().string()] = buf;
        std::istringstream in(bytes);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw InputError("malformed JSON in " + path.string() + ": " + e.what());
        }
        return j;
    }

    std::string load_text(const fs::path& path) {
        std::string bytes = read_text_file(path);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                      static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
        input_hashes[path.filename().string()] = buf;
        return bytes;
    }

    void write_artifact(const std::string& name, const json& j) {
        fs::create_directories(out_dir);
        write_json_file(out_dir / name, j);
    }

    void write_artifact_text(const std::string& name, const std::string& text) {
        fs::create_directories(out_dir);
        write_text_file(out_dir / name, text);
    }

    void finish() {
        double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json manifest{{"subcommand", subcommand},
                      {"inputs", input_hashes},
                      {"seed", seed},
                      {"config", config},
                      {"tool_version", kVersion},
                      {"wall_time_s", wall}};
        write_artifact("manifest.json", manifest);
    }
};

Graph load_graph(RunContext& ctx, const fs::path& path) {
    return graph_from_json(ctx.load_input(path));
}

void validate_solution(const Graph& g, const std::string& problem, const VertexSet& set) {
    auto flags = classify_set(g, set);
    bool ok = true;
    if (problem == "mis" || problem == "mwis") ok = flags.independent;
    if (problem == "vcover") ok = flags.vertex_cover;
    if (problem == "mds") ok = flags.dominating;
    if (problem == "mcds") ok = flags.dominating && flags.connected;
    internal_check(ok, "solution failed re-validation against its defining predicate");
}

// ---- gen ---------------------------------------------------------------

void run_gen(RunContext& ctx, const std::string& family, int n, double p, double radius,
             double box, int rows, int cols, double spacing, bool connected) {
    Rng rng = Rng::stream(ctx.seed, "gen");
    Graph g;
    if (family == "udg")
        g = connected ? gen::random_connected_unit_disk(n, radius, box, rng)
                      : gen::random_unit_disk(n, radius, box, rng);
    else if (family == "er")
        g = gen::erdos_renyi(n, p, rng);
    else
        g = gen::lattice_unit_disk(rows, cols, spacing, radius);
    ctx.write_artifact("graph.json", graph_to_json(g));
    std::cout << "generated " << family << " graph: n=" << g.n() << " edges=" << g.edge_count()
              << "\n";
}

// ---- solve ---------------------------------------------------------------

void run_solve(RunContext& ctx, const std::string& problem, const fs::path& graph_path) {
    Graph g = load_graph(ctx, graph_path);
    json out;
    if (problem == "chromatic") {
        auto res = oracle::chromatic_number_exact(g, ctx.caps);
        for (auto [u, v] : g.edges())
            internal_check(res.colors[static_cast<std::size_t>(u)] !=
                               res.colors[static_cast<std::size_t>(v)],
                           "coloring failed re-validation");
        out = json{{"problem", "chromatic"},
                   {"k", res.chromatic_number},
                   {"coloring", res.colors}};
        std::cout << "chromatic number " << res.chromatic_number << "\n";
    } else if (problem == "clique") {
        auto cert = reduce::clique_or_cover(g, reduce::Which::max_clique);
        Graph uniform = cert.derived.with_weights(std::vector<double>(g.n(), 1.0));
        auto mis = oracle::mwis_exact(uniform, ctx.caps);
        auto ans = std::get<reduce::CliqueAnswer>(
            reduce::decode(cert, make_vertex_set(cert.derived, mis.set.members)));
        auto clique_set = make_vertex_set(g, ans.clique);
        internal_check(classify_set(g, clique_set).clique, "clique failed re-validation");
        out = json{{"problem", "clique"},
                   {"set", ans.clique},
                   {"objective", static_cast<double>(ans.clique.size())},
                   {"optimal", mis.optimal},
                   {"nodes_explored", mis.nodes_explored}};
        std::cout << "max clique size " << ans.clique.size() << "\n";
    } else if (problem == "vcover") {
        auto cert = reduce::clique_or_cover(g, reduce::Which::min_vertex_cover);
        Graph uniform = g.with_weights(std::vector<double>(g.n(), 1.0));
        auto mis = oracle::mwis_exact(uniform, ctx.caps);
        auto ans = std::get<reduce::CoverAnswer>(
            reduce::decode(cert, make_vertex_set(cert.derived, mis.set.members)));
        auto cover_set = make_vertex_set(g, ans.cover);
        validate_solution(g, "vcover", cover_set);
        out = json{{"problem", "vcover"},
                   {"set", ans.cover},
                   {"objective", static_cast<double>(ans.cover.size())},
                   {"optimal", mis.optimal},
                   {"nodes_explored", mis.nodes_explored}};
        std::cout << "min vertex cover size " << ans.cover.size() << "\n";
    } else {
        oracle::ExactSolution sol;
        if (problem == "mis") {
            sol = oracle::mwis_exact(g.with_weights(std::vector<double>(g.n(), 1.0)), ctx.caps);
            sol.problem = "mis";
            sol.set = make_vertex_set(g, sol.set.members);
        } else if (problem == "mwis") {
            sol = oracle::mwis_exact(g, ctx.caps);
        } else if (problem == "mds") {
            sol = oracle::mds_exact(g, ctx.caps);
        } else {
            sol = oracle::mcds_exact(g, ctx.caps);
        }
        validate_solution(g, sol.problem, sol.set);
        out = oracle::solution_to_json(sol);
        std::cout << sol.problem << ": objective " << fmt_double(sol.objective) << " set size "
                  << sol.set.members.size() << "\n";
    }
    ctx.write_artifact("solution.json", out);
    if (ctx.format == "csv" && out.contains("set")) {
        std::string csv = "problem,objective,optimal,set\n";
        std::string members;
        for (const auto& v : out["set"]) {
            if (!members.empty()) members += " ";
            members += v.dump();
        }
        csv += out["problem"].get<std::string>() + "," + fmt_double(out["objective"].get<double>()) +
               "," + (out.value("optimal", true) ? "1" : "0") + "," + members + "\n";
        ctx.write_artifact_text("solution.csv", csv);
    }
}

// ---- count ----------------------------------------------------------------

void run_count(RunContext& ctx, const fs::path& graph_path, double nu,
               const std::string& activities_file) {
    Graph g = load_graph(ctx, graph_path);
    std::vector<double> act;
    if (!activities_file.empty())
        act = ctx.load_input(activities_file).get<std::vector<double>>();
    else
        act.assign(static_cast<std::size_t>(g.n()), nu);
    auto res = oracle::partition_function(g, act, ctx.caps);
    json out{{"z", res.z}, {"count_mode", res.count_mode}, {"activities", res.activities}};
    ctx.write_artifact("count.json", out);
    std::cout << "z = " << fmt_double(res.z) << (res.count_mode ? " (independent-set count)" : "")
              << "\n";
}

// ---- reduce / decode ---------------------------------------------------------

void run_reduce(RunContext& ctx, const std::string& kind, const fs::path& graph_path, int k,
                const fs::path& cnf_path, const std::string& seq) {
    if (kind == "coloring") {
        Graph g = load_graph(ctx, graph_path);
        auto cert = reduce::coloring_to_mis(g, k);
        ctx.write_artifact("certificate.json", reduce::certificate_to_json(cert));
        std::cout << "coloring gadget: " << cert.derived.n() << " vertices, threshold "
                  << cert.threshold << "\n";
    } else if (kind == "sat") {
        auto cnf = reduce::parse_dimacs(ctx.load_text(cnf_path));
        auto cert = reduce::sat_to_mis(cnf);
        if (!cert) {
            ctx.write_artifact("result.json",
                               json{{"answer", "sat"},
                                    {"satisfiable", false},
                                    {"reason", "empty clause: trivially unsatisfiable"}});
            std::cout << "UNSAT (empty clause); no graph built\n";
        } else {
            ctx.write_artifact("certificate.json", reduce::certificate_to_json(*cert));
            std::cout << "sat gadget: " << cert->derived.n() << " vertices, threshold "
                      << cert->threshold << "\n";
        }
    } else {
        auto cert = reduce::paintshop_to_mwis(reduce::paintshop_seq_from_string(seq));
        ctx.config["seq"] = seq;
        ctx.write_artifact("certificate.json", reduce::certificate_to_json(cert));
        std::cout << "paintshop gadget: " << cert.derived.n() << " vertices, base "
                  << cert.threshold << "\n";
    }
}

void run_decode(RunContext& ctx, const fs::path& cert_path, const fs::path& solution_path) {
    auto cert = reduce::certificate_from_json(ctx.load_input(cert_path));
    json sj = ctx.load_input(solution_path);
    std::vector<int> members;
    if (sj.is_array())
        members = sj.get<std::vector<int>>();
    else if (sj.contains("set"))
        members = sj["set"].get<std::vector<int>>();
    else
        members = sj.at("members").get<std::vector<int>>();
    auto solution = make_vertex_set(cert.derived, members);
    auto decoded = reduce::decode(cert, solution);
    ctx.write_artifact("decoded.json", reduce::decoded_to_json(decoded));
    std::cout << "decoded " << to_string(cert.source_kind) << " answer\n";
}

// ---- sample -------------------------------------------------------------------

void run_sample(RunContext& ctx, const std::string& sampler, const fs::path& graph_path,
                std::size_t n_samples, double nu, long long burn_in, long long thinning,
                const std::string& order) {
    Graph g = load_graph(ctx, graph_path);
    sampling::SamplerConfig cfg = sampling::uniform_config(g, ctx.seed, nu);
    cfg.burn_in = burn_in;
    cfg.thinning = thinning;
    std::vector<VertexSet> samples;
    if (sampler == "greedy") {
        auto greedy_order = order == "degree" ? sampling::GreedyOrder::degree_biased
                                              : sampling::GreedyOrder::uniform;
        for (std::size_t i = 0; i < n_samples; ++i)
            samples.push_back(sampling::greedy_maximal_is(
                g, Rng::stream(ctx.seed, "sample", i).next(), greedy_order));
    } else {
        samples = sampling::gibbs_sample_is(g, cfg, n_samples);
    }
    for (const auto& s : samples)
        internal_check(classify_set(g, s).independent, "sampler emitted a dependent set");
    fs::create_directories(ctx.out_dir);
    sampling::write_samples_jsonl(ctx.out_dir / "samples.jsonl", g, cfg, samples, sampler);
    std::cout << "wrote " << samples.size() << " samples\n";
}

// ---- pipeline -------------------------------------------------------------------

void run_pipeline(RunContext& ctx, const std::string& stage, const fs::path& graph_path,
                  const std::string& set_file, int k) {
    Graph g = load_graph(ctx, graph_path);
    json out;
    if (stage == "dominate") {
        VertexSet start = set_file.empty()
                              ? VertexSet{}
                              : vertex_set_from_json(ctx.load_input(set_file), g);
        postprocess::PipelineTrace t1;
        VertexSet repaired = postprocess::repair_to_independent(g, start, ctx.seed, &t1);
        postprocess::PipelineTrace t2;
        VertexSet maximal = postprocess::complete_to_maximal(g, repaired, ctx.seed, &t2);
        auto flags = classify_set(g, maximal);
        internal_check(flags.maximal_independent && flags.dominating,
                       "dominate pipeline output failed validation");
        out = json{{"stage", "dominate"},
                   {"result", vertex_set_to_json(maximal)},
                   {"trace", json::array({postprocess::trace_to_json(t1),
                                          postprocess::trace_to_json(t2)})}};
        std::cout << "dominating set of size " << maximal.members.size() << "\n";
    } else if (stage == "connect") {
        VertexSet d;
        if (set_file.empty()) {
            d = oracle::mds_exact(g, ctx.caps).set;
        } else {
            d = vertex_set_from_json(ctx.load_input(set_file), g);
        }
        postprocess::PipelineTrace trace;
        VertexSet connected = postprocess::connect_dominating(g, d, &trace);
        auto flags = classify_set(g, connected);
        internal_check(flags.dominating && flags.connected,
                       "connect pipeline output failed validation");
        out = json{{"stage", "connect"},
                   {"result", vertex_set_to_json(connected)},
                   {"trace", postprocess::trace_to_json(trace)}};
        std::cout << "connected dominating set of size " << connected.members.size() << "\n";
    } else {
        auto plan = postprocess::immunize_budget(g, k, ctx.seed);
        out = json{{"stage", "immunize"},
                   {"result", vertex_set_to_json(plan.immunized)},
                   {"spread_score", plan.spread_score},
                   {"residual_edgeless", plan.residual_edgeless},
                   {"trace", postprocess::trace_to_json(plan.trace)}};
        std::cout << "immunized " << plan.immunized.members.size()
                  << " vertices, spread score " << fmt_double(plan.spread_score) << "\n";
    }
    ctx.write_artifact("pipeline.json", out);
}

// ---- sim ----------------------------------------------------------------------

json state_to_json(const rydberg::QuantumState& state) {
    json amps = json::array();
    for (const auto& a : state.amplitudes) amps.push_back({a.real(), a.imag()});
    json j{{"basis", state.basis == rydberg::QuantumState::Basis::full ? "full" : "blockaded"},
           {"n_atoms", state.n_atoms},
           {"amplitudes", amps}};
    if (!state.basis_states.empty()) {
        json idx = json::array();
        for (auto m : state.basis_states) idx.push_back(rydberg::bitstring(m, state.n_atoms));
        j["basis_index"] = idx;
    }
    return j;
}

void run_sim_evolve(RunContext& ctx, const fs::path& register_path, const fs::path& schedule_path) {
    auto reg = rydberg::register_from_json(ctx.load_input(register_path));
    auto schedule = rydberg::schedule_from_json(ctx.load_input(schedule_path));
    auto state = rydberg::make_all_ground(reg, ctx.evolve_cfg);
    rydberg::EvolveStats stats;
    state = rydberg::evolve(std::move(state), reg, schedule, ctx.evolve_cfg, &stats);
    ctx.write_artifact("state.json", state_to_json(state));
    ctx.write_artifact("metadata.json",
                       json{{"mode", to_string(ctx.evolve_cfg.mode)},
                            {"steps", stats.steps},
                            {"step_size", stats.step},
                            {"max_step_drift", stats.max_step_drift},
                            {"total_drift", stats.total_drift},
                            {"seed", ctx.seed},
                            {"inputs", ctx.input_hashes}});
    std::cout << "evolved " << reg.n() << " atoms for " << stats.steps
              << " steps; norm drift " << fmt_double(stats.total_drift) << "\n";
}

void run_sim_groundstate(RunContext& ctx, const fs::path& register_path,
                         const fs::path& schedule_path) {
    auto reg = rydberg::register_from_json(ctx.load_input(register_path));
    auto schedule = rydberg::schedule_from_json(ctx.load_input(schedule_path));
    double omega_end = schedule.omega(schedule.duration);
    if (omega_end != 0.0)
        throw InputError("groundstate is defined at the Omega=0 schedule endpoint");
    auto gs = rydberg::exact_ground_state(reg, schedule.delta(schedule.duration),
                                          schedule.local_delta, ctx.evolve_cfg);
    json states = json::array();
    for (auto m : gs.states) states.push_back(rydberg::bitstring(m, reg.n()));
    ctx.write_artifact("groundstate.json", json{{"energy", gs.energy},
                                                {"states", states},
                                                {"mode", to_string(ctx.evolve_cfg.mode)},
                                                {"seed", ctx.seed},
                                                {"inputs", ctx.input_hashes}});
    std::cout << "ground energy " << fmt_double(gs.energy) << " with " << gs.states.size()
              << " state(s)\n";
}

void run_sim_adiabatic(RunContext& ctx, const fs::path& graph_path, double duration,
                       double omega_max, double delta0, double delta_final, std::uint64_t shots,
                       const std::string& sweep_durations) {
    Graph g = load_graph(ctx, graph_path);
    rydberg::SweepParams params{duration, omega_max, delta0, delta_final};
    if (!sweep_durations.empty()) {
        std::vector<double> ts;
        std::stringstream ss(sweep_durations);
        std::string tok;
        while (std::getline(ss, tok, ',')) ts.push_back(std::stod(tok));
        auto sweep = rydberg::parameter_sweep(g, ts, {omega_max}, {delta0}, {delta_final}, shots,
                                              ctx.evolve_cfg, ctx.seed, ctx.threads);
        std::string csv = "duration,omega_max,delta_start,delta_final,mean_weight,success\n";
        for (const auto& row : sweep.table)
            csv += fmt_double(row.params.duration) + "," + fmt_double(row.params.omega_max) + "," +
                   fmt_double(row.params.delta_start) + "," + fmt_double(row.params.delta_final) +
                   "," + fmt_double(row.mean_weight) + "," + fmt_double(row.success_fraction) +
                   "\n";
        ctx.write_artifact_text("sweep.csv", csv);
        const auto& best = sweep.table[sweep.best_index];
        ctx.write_artifact("result.json", json{{"best_duration", best.params.duration},
                                               {"best_mean_weight", best.mean_weight},
                                               {"best_success", best.success_fraction}});
        std::cout << "sweep best duration " << best.params.duration << " mean weight "
                  << fmt_double(best.mean_weight) << "\n";
        return;
    }
    auto res = rydberg::adiabatic_solve(g, params, shots, ctx.evolve_cfg, ctx.seed);
    fs::create_directories(ctx.out_dir);
    rydberg::write_histogram_csv(ctx.out_dir / "histogram.csv", res.histogram, g.n());
    ctx.write_artifact("result.json",
                       json{{"best_set", res.best_set.members},
                            {"best_weight", res.best_weight},
                            {"oracle_weight", res.oracle_weight},
                            {"success_fraction", res.success_fraction},
                            {"mode", to_string(ctx.evolve_cfg.mode)},
                            {"steps", res.stats.steps},
                            {"step_size", res.stats.step},
                            {"total_drift", res.stats.total_drift},
                            {"seed", ctx.seed},
                            {"inputs", ctx.input_hashes}});
    std::cout << "adiabatic best weight " << fmt_double(res.best_weight) << " success "
              << fmt_double(res.success_fraction) << "\n";
}

// ---- app ----------------------------------------------------------------------

void run_app_lossnet(RunContext& ctx, const fs::path& routes_path, double nu) {
    auto rs = apps::route_set_from_json(ctx.load_input(routes_path));
    if (nu > 0.0) rs.activity = nu;
    auto rep = apps::blocking_probabilities(rs, ctx.caps);
    std::string csv = "route,success,failure\n";
    for (std::size_t r = 0; r < rep.success.size(); ++r)
        csv += std::to_string(r) + "," + fmt_double(rep.success[r]) + "," +
               fmt_double(rep.failure[r]) + "\n";
    ctx.write_artifact_text("lossnet.csv", csv);
    ctx.write_artifact("lossnet.json", json{{"z", rep.z},
                                            {"activity", rs.activity},
                                            {"success", rep.success},
                                            {"failure", rep.failure}});
    if (ctx.emit_plot_data) {
        std::string plot = "series,x,y\n";
        for (std::size_t r = 0; r < rep.success.size(); ++r)
            plot += "success," + std::to_string(r) + "," + fmt_double(rep.success[r]) + "\n";
        ctx.write_artifact_text("plot_data.csv", plot);
    }
    std::cout << "loss network: " << rep.success.size() << " routes, z = " << fmt_double(rep.z)
              << "\n";
}

void run_app_siteplan(RunContext& ctx, const fs::path& problem_path, const std::string& mode,
                      std::size_t n_samples, bool conditional) {
    auto problem = apps::site_plan_from_json(ctx.load_input(problem_path));
    apps::SitePlanResult res;
    bool exact = mode == "exact" ||
                 (mode == "auto" && static_cast<int>(problem.candidates.size()) <= 18);
    if (exact)
        res = apps::next_store_selection_exact(problem, conditional);
    else
        res = apps::next_store_selection_sampled(problem, n_samples, ctx.seed, conditional);
    std::string csv = "candidate,score,std_error\n";
    for (const auto& sc : res.ranked)
        csv += std::to_string(sc.candidate) + "," + fmt_double(sc.score) + "," +
               fmt_double(sc.std_error) + "\n";
    ctx.write_artifact_text("siteplan.csv", csv);
    if (ctx.emit_plot_data) {
        std::string plot = "series,x,y\n";
        for (const auto& sc : res.ranked)
            plot += "score," + std::to_string(sc.candidate) + "," + fmt_double(sc.score) + "\n";
        ctx.write_artifact_text("plot_data.csv", plot);
    }
    json ranked = json::array();
    for (const auto& sc : res.ranked)
        ranked.push_back(json{{"candidate", sc.candidate},
                              {"score", sc.score},
                              {"std_error", sc.std_error}});
    ctx.write_artifact("siteplan.json", json{{"best", res.best},
                                             {"exact", res.exact},
                                             {"n_plans", res.n_plans},
                                             {"z", res.z},
                                             {"ranked", ranked}});
    std::cout << "best next site: candidate " << res.best << "\n";
}

void run_app_market(RunContext& ctx, const fs::path& returns_path) {
    auto r = apps::returns_from_json(ctx.load_input(returns_path));
    auto res = apps::market_graph(r);
    // portfolio = max weighted clique = MWIS of the complement
    auto cert = reduce::clique_or_cover(res.graph, reduce::Which::max_clique);
    auto mis = oracle::mwis_exact(cert.derived, ctx.caps);
    auto ans = std::get<reduce::CliqueAnswer>(
        reduce::decode(cert, make_vertex_set(cert.derived, mis.set.members)));
    json out{{"graph", graph_to_json(res.graph)},
             {"kept_assets", res.kept},
             {"excluded_assets", res.excluded},
             {"weight_shift", res.weight_shift},
             {"portfolio", ans.clique},
             {"portfolio_weight", mis.objective}};
    ctx.write_artifact("market.json", out);
    std::string csv = "asset,in_portfolio,weight\n";
    for (int a = 0; a < res.graph.n(); ++a) {
        bool in = std::find(ans.clique.begin(), ans.clique.end(), a) != ans.clique.end();
        csv += std::to_string(res.kept[static_cast<std::size_t>(a)]) + "," +
               (in ? "1" : "0") + "," + fmt_double(res.graph.weight(a)) + "\n";
    }
    ctx.write_artifact_text("market.csv", csv);
    if (ctx.emit_plot_data) {
        std::string plot = "series,x,y\n";
        for (int a = 0; a < res.graph.n(); ++a)
            plot += "weight," + std::to_string(a) + "," + fmt_double(res.graph.weight(a)) + "\n";
        ctx.write_artifact_text("plot_data.csv", plot);
    }
    std::cout << "portfolio of " << ans.clique.size() << " assets\n";
}

void run_app_schedule(RunContext& ctx, const fs::path& tasks_path, int k) {
    auto p = apps::schedule_from_json(ctx.load_input(tasks_path));
    if (k > 0) p.rounds = k;
    auto res = apps::schedule_tasks(p, ctx.caps);
    ctx.write_artifact("schedule.json", json{{"feasible", res.feasible},
                                             {"round", res.round},
                                             {"excluded", res.excluded},
                                             {"rounds", p.rounds}});
    std::string csv = "task,round\n";
    for (std::size_t t = 0; t < res.round.size(); ++t)
        csv += std::to_string(t) + "," + std::to_string(res.round[t]) + "\n";
    ctx.write_artifact_text("schedule.csv", csv);
    if (ctx.emit_plot_data) {
        std::string plot = "series,x,y\n";
        for (std::size_t t = 0; t < res.round.size(); ++t)
            plot += "round," + std::to_string(t) + "," + std::to_string(res.round[t]) + "\n";
        ctx.write_artifact_text("plot_data.csv", plot);
    }
    std::cout << (res.feasible ? "all tasks scheduled" : "some tasks excluded") << "\n";
}

void run_app_antenna(RunContext& ctx, const fs::path& problem_path) {
    auto p = apps::antenna_from_json(ctx.load_input(problem_path));
    auto plan = apps::antenna_plan(p, ctx.caps);
    json out{{"placement", plan.placement.set.members},
             {"objective", plan.placement.objective},
             {"unit_disk", plan.unit_disk},
             {"conflict_graph", graph_to_json(plan.conflict_graph)}};
    ctx.write_artifact("antenna.json", out);
    {
        std::string csv = "antenna,placed,value\n";
        for (int a = 0; a < plan.conflict_graph.n(); ++a) {
            bool placed = std::binary_search(plan.placement.set.members.begin(),
                                             plan.placement.set.members.end(), a);
            csv += std::to_string(a) + "," + (placed ? "1" : "0") + "," +
                   fmt_double(plan.conflict_graph.weight(a)) + "\n";
        }
        ctx.write_artifact_text("antenna.csv", csv);
        if (ctx.emit_plot_data) {
            std::string plot = "series,x,y\n";
            for (int a = 0; a < plan.conflict_graph.n(); ++a)
                plot += "value," + std::to_string(a) + "," +
                        fmt_double(plan.conflict_graph.weight(a)) + "\n";
            ctx.write_artifact_text("plot_data.csv", plot);
        }
    }
    if (plan.compiled) {
        ctx.write_artifact("register.json", rydberg::register_to_json(plan.compiled->reg));
        ctx.write_artifact("schedule.json", rydberg::schedule_to_json(plan.compiled->schedule));
    }
    std::cout << "placed " << plan.placement.set.members.size() << " antennas, value "
              << fmt_double(plan.placement.objective) << "\n";
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"independent-set problems: exact solvers, samplers, reduction gadgets, and a "
                 "Rydberg-blockade analog simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunContext ctx;
    std::string out_dir = "out";
    app.add_option("--seed", ctx.seed, "root random seed; all stages derive named substreams");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", ctx.format, "artifact format preference")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", ctx.threads, "worker threads (default 1 for determinism)");
    app.add_flag("--emit-plot-data", ctx.emit_plot_data, "write long-format plot CSV");
    app.add_option("--cap-enum", ctx.caps.enumeration, "enumeration size cap");
    app.add_option("--cap-bnb", ctx.caps.branch_and_bound, "branch-and-bound size cap");
    app.add_option("--cap-subset", ctx.caps.subset_search, "subset-search size cap");
    app.add_option("--cap-chromatic", ctx.caps.chromatic, "chromatic size cap");
    app.add_option("--cap-full-atoms", ctx.evolve_cfg.max_full_atoms, "full-basis atom cap");
    app.add_option("--cap-blockaded-dim", ctx.evolve_cfg.max_blockaded_dim,
                   "blockaded basis dimension cap");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate instances");
    std::string gen_family = "udg";
    int gen_n = 10, gen_rows = 3, gen_cols = 3;
    double gen_p = 0.3, gen_radius = 1.0, gen_box = 3.0, gen_spacing = 0.8;
    bool gen_connected = false;
    gen_cmd->add_option("family", gen_family, "udg | er | lattice")
        ->check(CLI::IsMember({"udg", "er", "lattice"}));
    gen_cmd->add_option("--n", gen_n, "vertex count");
    gen_cmd->add_option("--p", gen_p, "edge probability (er)");
    gen_cmd->add_option("--radius", gen_radius, "disk radius");
    gen_cmd->add_option("--box", gen_box, "sampling box side (udg)");
    gen_cmd->add_option("--rows", gen_rows, "lattice rows");
    gen_cmd->add_option("--cols", gen_cols, "lattice cols");
    gen_cmd->add_option("--spacing", gen_spacing, "lattice spacing");
    gen_cmd->add_flag("--connected", gen_connected, "resample until connected (udg)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "exact solvers");
    std::string solve_problem;
    std::string solve_graph;
    solve_cmd->add_option("problem", solve_problem, "mis|mwis|clique|vcover|mds|mcds|chromatic")
        ->required()
        ->check(CLI::IsMember({"mis", "mwis", "clique", "vcover", "mds", "mcds", "chromatic"}));
    solve_cmd->add_option("--graph", solve_graph, "graph JSON file")->required();

    // count
    auto* count_cmd = app.add_subcommand("count", "partition function / IS count");
    std::string count_graph, count_activities;
    double count_nu = 1.0;
    count_cmd->add_option("--graph", count_graph)->required();
    count_cmd->add_option("--nu", count_nu, "uniform activity");
    count_cmd->add_option("--activities", count_activities, "per-vertex activities JSON");

    // reduce
    auto* reduce_cmd = app.add_subcommand("reduce", "build MIS/MWIS gadgets");
    std::string reduce_kind, reduce_graph, reduce_cnf, reduce_seq;
    int reduce_k = 3;
    reduce_cmd->add_option("kind", reduce_kind, "coloring|sat|paintshop")
        ->required()
        ->check(CLI::IsMember({"coloring", "sat", "paintshop"}));
    reduce_cmd->add_option("--graph", reduce_graph, "graph JSON (coloring)");
    reduce_cmd->add_option("--k", reduce_k, "colors (coloring)");
    reduce_cmd->add_option("--cnf", reduce_cnf, "DIMACS file (sat)");
    reduce_cmd->add_option("--seq", reduce_seq, "car word, e.g. ABAB (paintshop)");

    // decode
    auto* decode_cmd = app.add_subcommand("decode", "decode a derived solution");
    std::string decode_cert, decode_solution;
    decode_cmd->add_option("--cert", decode_cert)->required();
    decode_cmd->add_option("--solution", decode_solution)->required();

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "classical samplers");
    std::string sample_kind, sample_graph, sample_order = "uniform";
    std::size_t sample_count = 100;
    double sample_nu = 1.0;
    long long sample_burnin = -1, sample_thin = -1;
    sample_cmd->add_option("kind", sample_kind, "greedy|gibbs")
        ->required()
        ->check(CLI::IsMember({"greedy", "gibbs"}));
    sample_cmd->add_option("--graph", sample_graph)->required();
    sample_cmd->add_option("--samples", sample_count);
    sample_cmd->add_option("--nu", sample_nu, "activity (gibbs)");
    sample_cmd->add_option("--burn-in", sample_burnin, "burn-in steps (-1 = default)");
    sample_cmd->add_option("--thin", sample_thin, "thinning (-1 = default)");
    sample_cmd->add_option("--order", sample_order, "uniform|degree (greedy)")
        ->check(CLI::IsMember({"uniform", "degree"}));

    // pipeline
    auto* pipeline_cmd = app.add_subcommand("pipeline", "classical postprocessing pipelines");
    std::string pipeline_stage, pipeline_graph, pipeline_set;
    int pipeline_k = 0;
    pipeline_cmd->add_option("stage", pipeline_stage, "dominate|connect|immunize")
        ->required()
        ->check(CLI::IsMember({"dominate", "connect", "immunize"}));
    pipeline_cmd->add_option("--graph", pipeline_graph)->required();
    pipeline_cmd->add_option("--set", pipeline_set, "starting vertex set JSON");
    pipeline_cmd->add_option("--k", pipeline_k, "immunization budget");

    // sim
    auto* sim_cmd = app.add_subcommand("sim", "Rydberg analog simulator");
    std::string sim_kind, sim_register, sim_schedule, sim_graph, sim_mode = "hard_blockade";
    std::string sim_sweep;
    double sim_T = 4.0, sim_omega = 2.5, sim_delta0 = 6.0, sim_deltaf = 6.0;
    std::uint64_t sim_shots = 1000;
    sim_cmd->add_option("kind", sim_kind, "evolve|adiabatic|groundstate")
        ->required()
        ->check(CLI::IsMember({"evolve", "adiabatic", "groundstate"}));
    sim_cmd->add_option("--register", sim_register, "register JSON");
    sim_cmd->add_option("--schedule", sim_schedule, "schedule JSON");
    sim_cmd->add_option("--graph", sim_graph, "unit-disk graph JSON (adiabatic)");
    sim_cmd->add_option("--mode", sim_mode, "physical|hard_blockade")
        ->check(CLI::IsMember({"physical", "hard_blockade"}));
    sim_cmd->add_option("--T", sim_T, "sweep duration");
    sim_cmd->add_option("--omega", sim_omega, "peak Rabi frequency");
    sim_cmd->add_option("--delta0", sim_delta0, "initial detuning magnitude");
    sim_cmd->add_option("--deltaf", sim_deltaf, "final detuning");
    sim_cmd->add_option("--shots", sim_shots, "measurement shots");
    sim_cmd->add_option("--sweep", sim_sweep, "comma-separated durations for a parameter sweep");
    sim_cmd->add_option("--step-scale", ctx.evolve_cfg.step_scale,
                        "step control h*scale <= step-scale (max 0.1)");

    // app
    auto* app_cmd = app.add_subcommand("app", "application drivers");
    std::string app_kind, app_input;
    double app_nu = 0.0;
    int app_k = 0;
    std::string app_mode = "auto";
    std::size_t app_samples = 20000;
    bool app_conditional = false;
    app_cmd->add_option("kind", app_kind, "lossnet|siteplan|market|schedule|antenna")
        ->required()
        ->check(CLI::IsMember({"lossnet", "siteplan", "market", "schedule", "antenna"}));
    app_cmd->add_option("--input", app_input, "problem JSON file")->required();
    app_cmd->add_option("--nu", app_nu, "activity override (lossnet)");
    app_cmd->add_option("--k", app_k, "rounds override (schedule)");
    app_cmd->add_option("--mode", app_mode, "exact|sampled|auto (siteplan)")
        ->check(CLI::IsMember({"exact", "sampled", "auto"}));
    app_cmd->add_option("--samples", app_samples, "sampler draws (siteplan)");
    app_cmd->add_flag("--conditional", app_conditional, "conditional normalization (siteplan)");

    for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    ctx.out_dir = out_dir;
    if (ctx.evolve_cfg.step_scale > 0.1) ctx.evolve_cfg.step_scale = 0.1;

    try {
        if (*gen_cmd) {
            ctx.subcommand = "gen " + gen_family;
            ctx.config = json{{"n", gen_n},       {"p", gen_p},
                              {"radius", gen_radius}, {"box", gen_box},
                              {"rows", gen_rows},  {"cols", gen_cols},
                              {"spacing", gen_spacing}, {"connected", gen_connected}};
            run_gen(ctx, gen_family, gen_n, gen_p, gen_radius, gen_box, gen_rows, gen_cols,
                    gen_spacing, gen_connected);
        } else if (*solve_cmd) {
            ctx.subcommand = "solve " + solve_problem;
            run_solve(ctx, solve_problem, solve_graph);
        } else if (*count_cmd) {
            ctx.subcommand = "count";
            ctx.config = json{{"nu", count_nu}};
            run_count(ctx, count_graph, count_nu, count_activities);
        } else if (*reduce_cmd) {
            ctx.subcommand = "reduce " + reduce_kind;
            ctx.config = json{{"k", reduce_k}};
            run_reduce(ctx, reduce_kind, reduce_graph, reduce_k, reduce_cnf, reduce_seq);
        } else if (*decode_cmd) {
            ctx.subcommand = "decode";
            run_decode(ctx, decode_cert, decode_solution);
        } else if (*sample_cmd) {
            ctx.subcommand = "sample " + sample_kind;
            ctx.config = json{{"samples", sample_count},
                              {"nu", sample_nu},
                              {"burn_in", sample_burnin},
                              {"thinning", sample_thin},
                              {"order", sample_order}};
            run_sample(ctx, sample_kind, sample_graph, sample_count, sample_nu, sample_burnin,
                       sample_thin, sample_order);
        } else if (*pipeline_cmd) {
            ctx.subcommand = "pipeline " + pipeline_stage;
            ctx.config = json{{"k", pipeline_k}};
            run_pipeline(ctx, pipeline_stage, pipeline_graph, pipeline_set, pipeline_k);
        } else if (*sim_cmd) {
            ctx.subcommand = "sim " + sim_kind;
            ctx.evolve_cfg.mode = rydberg::mode_from_string(sim_mode);
            ctx.config = json{{"mode", sim_mode},
                              {"T", sim_T},
                              {"omega", sim_omega},
                              {"delta0", sim_delta0},
                              {"deltaf", sim_deltaf},
                              {"shots", sim_shots},
                              {"step_scale", ctx.evolve_cfg.step_scale}};
            if (sim_kind == "evolve")
                run_sim_evolve(ctx, sim_register, sim_schedule);
            else if (sim_kind == "groundstate")
                run_sim_groundstate(ctx, sim_register, sim_schedule);
            else
                run_sim_adiabatic(ctx, sim_graph, sim_T, sim_omega, sim_delta0, sim_deltaf,
                                  sim_shots, sim_sweep);
        } else if (*app_cmd) {
            ctx.subcommand = "app " + app_kind;
            ctx.config = json{{"nu", app_nu},
                              {"k", app_k},
                              {"mode", app_mode},
                              {"samples", app_samples},
                              {"conditional", app_conditional}};
            if (app_kind == "lossnet")
                run_app_lossnet(ctx, app_input, app_nu);
            else if (app_kind == "siteplan")
                run_app_siteplan(ctx, app_input, app_mode, app_samples, app_conditional);
            else if (app_kind == "market")
                run_app_market(ctx, app_input);
            else if (app_kind == "schedule")
                run_app_schedule(ctx, app_input, app_k);
            else
                run_app_antenna(ctx, app_input);
        }
        ctx.finish();
        return 0;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const SizeCapError& e) {
        std::cerr << "size cap: " << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << "internal invariant failure (bug): " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace iset::cli
