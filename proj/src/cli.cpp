#include "sc/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "sc/suites.hpp"

namespace sc {

namespace {

json finite_or_inf(double v) {
    if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
    return json(v);
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f.good()) throw io_error("cannot open '" + path + "'");
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw io_error("failed to parse '" + path + "': " + e.what());
    }
    return j;
}

void emit(const run_config& cfg, const json& report, const std::string& csv_body) {
    std::string payload;
    if (cfg.format == "csv" && !csv_body.empty())
        payload = csv_body;
    else
        payload = report.dump(2) + "\n";
    if (cfg.out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream f(cfg.out_path);
        if (!f.good()) throw io_error("cannot write '" + cfg.out_path + "'");
        f << payload;
    }
}

// key,value rows for reports without a dedicated CSV layout
std::string flat_csv(const json& j, const std::string& prefix = "") {
    std::string out;
    if (prefix.empty()) out += "key,value\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object())
            out += flat_csv(*it, key);
        else if (it->is_number())
            out += key + "," + format_double(it->get<double>()) + "\n";
        else if (it->is_boolean())
            out += key + "," + std::string(it->get<bool>() ? "true" : "false") + "\n";
        else if (it->is_string())
            out += key + "," + it->get<std::string>() + "\n";
    }
    return out;
}

json config_echo(const run_config& cfg) {
    json j{{"command", cfg.command},
           {"seed", cfg.seed},
           {"budget", cfg.budget_restarts},
           {"format", cfg.format}};
    if (!cfg.channel_arg.empty()) j["channel"] = cfg.channel_arg;
    if (!cfg.rho_path.empty()) j["rho"] = cfg.rho_path;
    if (!cfg.sigma_path.empty()) j["sigma"] = cfg.sigma_path;
    if (cfg.command == "divergence") j["alpha"] = cfg.alpha;
    if (cfg.command == "divergence") j["umegaki"] = cfg.umegaki;
    if (cfg.rate >= 0.0) j["rate"] = cfg.rate;
    if (!cfg.grid.empty()) j["grid"] = cfg.grid;
    if (cfg.command == "verify") j["suite"] = cfg.suite;
    if (cfg.command == "simulate") {
        j["rounds"] = cfg.rounds;
        j["messages"] = cfg.messages;
        j["decoder"] = cfg.decoder;
        if (!cfg.protocol_path.empty()) j["protocol"] = cfg.protocol_path;
    }
    return j;
}

json envelope(const run_config& cfg) {
    return json{{"tool", "strongconverse"},
                {"version", tool_version()},
                {"command", cfg.command},
                {"seed", cfg.seed},
                {"config", config_echo(cfg)}};
}

int cmd_divergence(const run_config& cfg) {
    if (cfg.rho_path.empty() || cfg.sigma_path.empty())
        throw usage_error("divergence requires --rho and --sigma files");
    density_operator rho = density_from_json(load_json_file(cfg.rho_path));
    density_operator sigma = density_from_json(load_json_file(cfg.sigma_path));
    json report = envelope(cfg);
    double v;
    if (cfg.umegaki) {
        v = relative_entropy(rho, sigma);
        report["result"] = json{{"kind", "umegaki"}, {"value", finite_or_inf(v)}};
    } else {
        v = sandwiched_renyi(rho, sigma, cfg.alpha);
        report["result"] =
            json{{"kind", "sandwiched"}, {"alpha", cfg.alpha}, {"value", finite_or_inf(v)}};
    }
    emit(cfg, report, cfg.format == "csv" ? flat_csv(report["result"]) : "");
    return 0;
}

int cmd_capacity(const run_config& cfg) {
    channel_spec spec = parse_channel_arg(cfg.channel_arg);
    budget b{cfg.budget_restarts, 2000, cfg.seed};
    capacity_result chi = holevo_information(spec.channel, b);
    json report = envelope(cfg);
    report["result"] = json{{"holevo", capacity_result_to_json(chi)}};
    if (cfg.radius) {
        capacity_result k = information_radius(spec.channel, b);
        report["result"]["radius"] = capacity_result_to_json(k);
        report["result"]["abs_chi_minus_k"] = std::abs(chi.value - k.value);
    }
    emit(cfg, report, cfg.format == "csv" ? flat_csv(report["result"]) : "");
    return 0;
}

int cmd_exponent(const run_config& cfg) {
    if (cfg.rate < 0.0) throw usage_error("exponent requires --rate >= 0");
    channel_spec spec = parse_channel_arg(cfg.channel_arg);
    budget b{cfg.budget_restarts, 2000, cfg.seed};
    exponent_curve curve = strong_converse_exponent(spec.channel, cfg.rate, cfg.grid, b);
    json report = envelope(cfg);
    report["result"] = exponent_curve_to_json(curve);
    emit(cfg, report, cfg.format == "csv" ? exponent_curve_to_csv(curve) : "");
    return 0;
}

int cmd_eb_check(const run_config& cfg) {
    channel_spec spec = parse_channel_arg(cfg.channel_arg);
    eb_report rep = is_entanglement_breaking(spec.channel);
    const char* verdict = rep.verdict == eb_verdict::eb       ? "EB"
                          : rep.verdict == eb_verdict::not_eb ? "NotEB"
                                                              : "Inconclusive";
    json result{{"verdict", verdict},
                {"choi_min_pt_eigenvalue", rep.choi_min_pt_eigenvalue},
                {"ppt", rep.ppt}};
    if (spec.family == "depolarizing") {
        // bisection on the sign of the min PT eigenvalue over the family
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (is_entanglement_breaking(depolarizing_channel(mid)).choi_min_pt_eigenvalue >=
                0.0)
                lo = mid;
            else
                hi = mid;
        }
        result["boundary_estimate"] = 0.5 * (lo + hi);
    }
    json report = envelope(cfg);
    report["result"] = std::move(result);
    emit(cfg, report, cfg.format == "csv" ? flat_csv(report["result"]) : "");
    return 0;
}

int cmd_simulate(const run_config& cfg) {
    channel_spec spec = parse_channel_arg(cfg.channel_arg);
    feedback_protocol p;
    if (!cfg.protocol_path.empty()) {
        p = protocol_from_json(load_json_file(cfg.protocol_path));
    } else {
        p = random_protocol(spec.channel, cfg.rounds, cfg.messages, 2, 2, 2, cfg.seed);
    }
    decoder_strategy strat;
    if (cfg.decoder == "pgm")
        strat = decoder_strategy::pgm;
    else if (cfg.decoder == "helstrom")
        strat = decoder_strategy::helstrom;
    else if (cfg.decoder == "given")
        strat = decoder_strategy::given;
    else if (cfg.decoder == "best")
        strat = decoder_strategy::best;
    else
        throw usage_error("unknown decoder '" + cfg.decoder + "'");

    budget b{cfg.budget_restarts, 2000, cfg.seed};
    simulation_report rep = verify_strong_converse_bound(p, spec.channel, strat, nullptr, b);
    json report = envelope(cfg);
    report["result"] = simulation_report_to_json(rep);
    emit(cfg, report, cfg.format == "csv" ? simulation_report_to_csv(rep) : "");
    return rep.bound_holds && rep.separability_ok && rep.chain_ok ? 0 : 1;
}

int cmd_verify(const run_config& cfg) {
    std::vector<std::string> names;
    if (cfg.suite == "all")
        names = suite_names();
    else
        names = {cfg.suite};
    json suites = json::array();
    bool all_passed = true;
    int total_cases = 0;
    for (const auto& name : names) {
        suite_result r = run_suite(name, cfg.seed, cfg.budget_restarts);
        all_passed = all_passed && r.passed;
        total_cases += r.cases;
        json metrics = json::object();
        for (const auto& [k, v] : r.metrics) metrics[k] = v;
        suites.push_back(json{{"name", r.name},
                              {"passed", r.passed},
                              {"cases", r.cases},
                              {"failures", r.failures},
                              {"failure_notes", r.failure_notes},
                              {"metrics", std::move(metrics)}});
    }
    json report = envelope(cfg);
    report["result"] = json{{"suites", std::move(suites)},
                            {"all_passed", all_passed},
                            {"total_cases", total_cases}};
    emit(cfg, report, cfg.format == "csv" ? flat_csv(report["result"]) : "");
    return all_passed ? 0 : 1;
}

}  // namespace

std::string tool_version() { return "1.0.0"; }

run_config parse_cli(const std::vector<std::string>& args) {
    run_config cfg;
    CLI::App app{"strongconverse: Renyi divergences, Holevo quantities, strong-converse "
                 "exponents, and feedback-protocol simulation for finite-dimensional channels"};
    app.require_subcommand(1);
    app.fallthrough(false);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "random seed (default 42)");
        sub->add_option("--budget", cfg.budget_restarts, "optimizer restarts (default 20)");
        sub->add_option("--out", cfg.out_path, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* divergence = app.add_subcommand("divergence", "sandwiched Renyi divergence");
    divergence->add_option("--rho", cfg.rho_path, "density matrix JSON file")->required();
    divergence->add_option("--sigma", cfg.sigma_path, "density matrix JSON file")->required();
    divergence->add_option("--alpha", cfg.alpha, "Renyi order (not 1)");
    divergence->add_flag("--umegaki", cfg.umegaki, "compute the relative entropy instead");
    add_common(divergence);

    CLI::App* capacity = app.add_subcommand("capacity", "Holevo information");
    capacity->add_option("--channel", cfg.channel_arg, "name:params or JSON file")->required();
    capacity->add_flag("--radius", cfg.radius, "also compute the information radius");
    add_common(capacity);

    CLI::App* exponent = app.add_subcommand("exponent", "strong-converse exponent curve");
    exponent->add_option("--channel", cfg.channel_arg, "name:params or JSON file")->required();
    exponent->add_option("--rate", cfg.rate, "communication rate in bits")->required();
    exponent->add_option("--grid", cfg.grid, "alpha grid (default internal)");
    add_common(exponent);

    CLI::App* ebcheck = app.add_subcommand("eb-check", "entanglement-breaking verdict");
    ebcheck->add_option("--channel", cfg.channel_arg, "name:params or JSON file")->required();
    add_common(ebcheck);

    CLI::App* simulate = app.add_subcommand("simulate", "feedback protocol simulation");
    simulate->add_option("--channel", cfg.channel_arg, "name:params or JSON file")->required();
    simulate->add_option("--rounds", cfg.rounds, "protocol rounds (default 2)");
    simulate->add_option("--messages", cfg.messages, "message count L (default 2)");
    simulate->add_option("--protocol", cfg.protocol_path, "protocol JSON file");
    simulate->add_option("--decoder", cfg.decoder, "pgm|helstrom|given|best");
    add_common(simulate);

    CLI::App* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("--suite", cfg.suite, "suite name or 'all'");
    add_common(verify);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        throw cli_help(app.help());
    } catch (const CLI::ParseError& e) {
        throw usage_error(e.what());
    }

    for (auto* sub : {divergence, capacity, exponent, ebcheck, simulate, verify})
        if (sub->parsed()) cfg.command = sub->get_name();

    if (cfg.command == "divergence" && !cfg.umegaki && cfg.alpha == 1.0)
        throw usage_error("alpha = 1 is reserved for the Umegaki relative entropy; "
                          "pass --umegaki");
    if (cfg.budget_restarts <= 0) throw usage_error("--budget must be positive");
    if (cfg.command == "verify" && cfg.suite != "all") {
        auto names = suite_names();
        if (std::find(names.begin(), names.end(), cfg.suite) == names.end())
            throw usage_error("unknown suite '" + cfg.suite + "'");
    }
    return cfg;
}

int run(const run_config& cfg) {
    if (cfg.command == "divergence") return cmd_divergence(cfg);
    if (cfg.command == "capacity") return cmd_capacity(cfg);
    if (cfg.command == "exponent") return cmd_exponent(cfg);
    if (cfg.command == "eb-check") return cmd_eb_check(cfg);
    if (cfg.command == "simulate") return cmd_simulate(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    throw usage_error("unknown command '" + cfg.command + "'");
}

}  // namespace sc
