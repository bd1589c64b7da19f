#include "sc/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sc {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

json matrix_to_json(const complex_matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

complex_matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw io_error("matrix_from_json: expected nested row arrays");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j.front().size());
    complex_matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols)
            throw io_error("matrix_from_json: ragged rows");
        for (int c = 0; c < cols; ++c) {
            const json& e = j[i][c];
            if (e.is_array() && e.size() == 2)
                m(i, c) = cplx(e[0].get<double>(), e[1].get<double>());
            else if (e.is_number())
                m(i, c) = cplx(e.get<double>(), 0.0);
            else
                throw io_error("matrix_from_json: entries must be [re, im] or numbers");
        }
    }
    return m;
}

json density_to_json(const density_operator& rho) {
    return json{{"matrix", matrix_to_json(rho.op)}, {"dims", rho.dims}};
}

density_operator density_from_json(const json& j) {
    if (j.is_array()) return density_operator(matrix_from_json(j), {});
    complex_matrix m = matrix_from_json(j.at("matrix"));
    std::vector<int> dims = j.contains("dims") ? j["dims"].get<std::vector<int>>()
                                               : std::vector<int>{};
    return density_operator(std::move(m), std::move(dims));
}

json ensemble_to_json(const ensemble& e) {
    json states = json::array();
    for (const auto& s : e.states) states.push_back(matrix_to_json(s.op));
    return json{{"probs", e.probs}, {"states", std::move(states)}};
}

ensemble ensemble_from_json(const json& j) {
    std::vector<double> probs = j.at("probs").get<std::vector<double>>();
    std::vector<density_operator> states;
    for (const auto& sj : j.at("states"))
        states.emplace_back(matrix_from_json(sj), std::vector<int>{});
    return ensemble(std::move(probs), std::move(states));
}

json povm_to_json(const povm& p) {
    json els = json::array();
    for (const auto& e : p.elements) els.push_back(matrix_to_json(e));
    return els;
}

povm povm_from_json(const json& j) {
    std::vector<complex_matrix> els;
    for (const auto& e : j) els.push_back(matrix_from_json(e));
    return povm(std::move(els));
}

json channel_to_json(const kraus_channel& ch) {
    json ops = json::array();
    for (const auto& k : ch.ops) ops.push_back(matrix_to_json(k));
    return json{{"kind", "kraus"}, {"d_in", ch.d_in}, {"d_out", ch.d_out}, {"ops", std::move(ops)}};
}

channel_spec channel_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "kraus") {
        std::vector<complex_matrix> ops;
        for (const auto& oj : j.at("ops")) ops.push_back(matrix_from_json(oj));
        const int din = j.at("d_in").get<int>();
        const int dout = j.at("d_out").get<int>();
        return {kraus_channel(std::move(ops), din, dout), "kraus", {}};
    }
    if (kind == "measure_prepare") {
        povm p = povm_from_json(j.at("povm"));
        std::vector<density_operator> states;
        for (const auto& sj : j.at("states"))
            states.emplace_back(matrix_from_json(sj), std::vector<int>{});
        measure_prepare_channel mp(std::move(p), std::move(states));
        return {measure_prepare_to_kraus(mp), "measure_prepare", {}};
    }
    if (kind == "named") {
        const std::string name = j.at("name").get<std::string>();
        json params = j.contains("params") ? j["params"] : json::object();
        if (name == "identity") {
            const int d = static_cast<int>(params.value("d", 2.0));
            return {identity_channel(d), "identity", {{"d", static_cast<double>(d)}}};
        }
        if (name == "depolarizing") {
            const double lam = params.at("lambda").get<double>();
            return {depolarizing_channel(lam), "depolarizing", {{"lambda", lam}}};
        }
        if (name == "dephasing") {
            const double q = params.at("q").get<double>();
            return {dephasing_channel(q), "dephasing", {{"q", q}}};
        }
        if (name == "replacement") {
            if (j.contains("omega")) {
                density_operator omega(matrix_from_json(j["omega"]), {});
                return {replacement_channel(omega), "replacement", {}};
            }
            const int d = static_cast<int>(params.value("d", 2.0));
            return {replacement_channel(density_operator::maximally_mixed(d)),
                    "replacement",
                    {{"d", static_cast<double>(d)}}};
        }
        if (name == "bsc") {
            const double p = params.at("p").get<double>();
            return {bsc_channel(p), "bsc", {{"p", p}}};
        }
        if (name == "bit") return {classical_channel({{1.0, 0.0}, {0.0, 1.0}}), "bit", {}};
        if (name == "classical") {
            std::vector<std::vector<double>> rows;
            for (const auto& rj : j.at("matrix")) rows.push_back(rj.get<std::vector<double>>());
            return {classical_channel(rows), "classical", {}};
        }
        throw io_error("channel_from_json: unknown named channel '" + name + "'");
    }
    throw io_error("channel_from_json: unknown kind '" + kind + "'");
}

channel_spec parse_channel_arg(const std::string& arg) {
    // file path if it points at an existing file
    {
        std::ifstream f(arg);
        if (f.good()) {
            json j;
            try {
                f >> j;
            } catch (const std::exception& e) {
                throw io_error(std::string("failed to parse channel file: ") + e.what());
            }
            return channel_from_json(j);
        }
    }
    if (arg.find('/') != std::string::npos ||
        (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json"))
        throw io_error("cannot open channel file '" + arg + "'");
    auto parts = split(arg, ':');
    const std::string name = parts[0];
    auto num = [&](size_t i, const char* what) {
        if (parts.size() <= i) throw usage_error(std::string("channel ") + name +
                                                 " needs a parameter: " + what);
        return std::stod(parts[i]);
    };
    if (name == "identity") return {identity_channel(static_cast<int>(num(1, "d"))), "identity",
                                    {{"d", num(1, "d")}}};
    if (name == "depolarizing")
        return {depolarizing_channel(num(1, "lambda")), "depolarizing", {{"lambda", num(1, "lambda")}}};
    if (name == "dephasing") return {dephasing_channel(num(1, "q")), "dephasing", {{"q", num(1, "q")}}};
    if (name == "replacement") {
        const int d = static_cast<int>(num(1, "d"));
        return {replacement_channel(density_operator::maximally_mixed(d)), "replacement",
                {{"d", static_cast<double>(d)}}};
    }
    if (name == "bsc") return {bsc_channel(num(1, "p")), "bsc", {{"p", num(1, "p")}}};
    if (name == "bit") return {classical_channel({{1.0, 0.0}, {0.0, 1.0}}), "bit", {}};
    throw usage_error("unknown channel '" + arg + "' (not a file, not a known name)");
}

json protocol_to_json(const feedback_protocol& p) {
    json enc = json::array(), dec = json::array(), init_a = json::array();
    for (const auto& e : p.encoders) enc.push_back(channel_to_json(e));
    for (const auto& d : p.decoders) dec.push_back(channel_to_json(d));
    for (const auto& s : p.initial_alice) init_a.push_back(matrix_to_json(s.op));
    json j{{"n_rounds", p.n_rounds},
           {"message_count", p.message_count},
           {"feedback_dims", p.feedback_dims},
           {"alice_dims", p.alice_dims},
           {"bob_dims", p.bob_dims},
           {"initial_alice", std::move(init_a)},
           {"initial_bob", ensemble_to_json(p.initial_bob)},
           {"encoders", std::move(enc)},
           {"decoders", std::move(dec)},
           {"separable_inputs", p.separable_inputs}};
    if (p.final_povm) j["final_povm"] = povm_to_json(*p.final_povm);
    return j;
}

feedback_protocol protocol_from_json(const json& j) {
    feedback_protocol p;
    p.n_rounds = j.at("n_rounds").get<int>();
    p.message_count = j.at("message_count").get<int>();
    p.feedback_dims = j.at("feedback_dims").get<std::vector<int>>();
    p.alice_dims = j.at("alice_dims").get<std::vector<int>>();
    p.bob_dims = j.at("bob_dims").get<std::vector<int>>();
    for (const auto& sj : j.at("initial_alice"))
        p.initial_alice.emplace_back(matrix_from_json(sj), std::vector<int>{});
    p.initial_bob = ensemble_from_json(j.at("initial_bob"));
    for (const auto& ej : j.at("encoders")) p.encoders.push_back(channel_from_json(ej).channel);
    for (const auto& dj : j.at("decoders")) p.decoders.push_back(channel_from_json(dj).channel);
    if (j.contains("final_povm")) p.final_povm = povm_from_json(j["final_povm"]);
    p.separable_inputs = j.value("separable_inputs", false);
    return p.with_classical_feedback_enforced();
}

json exponent_curve_to_json(const exponent_curve& c) {
    json witnesses = json::array();
    for (const auto& s : c.sigma_witnesses) witnesses.push_back(matrix_to_json(s));
    return json{{"alphas", c.alphas},
                {"chi_alphas", c.chi_alphas},
                {"terms", c.terms},
                {"sigma_witnesses", std::move(witnesses)},
                {"rate", c.rate},
                {"exponent", c.exponent},
                {"gap_estimate", c.gap_estimate}};
}

std::string exponent_curve_to_csv(const exponent_curve& c) {
    std::string out = "alpha,chi_alpha,term\n";
    for (size_t i = 0; i < c.alphas.size(); ++i)
        out += format_double(c.alphas[i]) + "," + format_double(c.chi_alphas[i]) + "," +
               format_double(c.terms[i]) + "\n";
    return out;
}

json simulation_report_to_json(const simulation_report& r) {
    json mi = json::array();
    for (const auto& m : r.mi_chain)
        mi.push_back(json{{"round", m.round},
                          {"mi_bob", m.mi_bob},
                          {"mi_memory", m.mi_memory},
                          {"cmi", m.cmi},
                          {"chain_slack", m.chain_slack},
                          {"identity_defect", m.identity_defect}});
    json sep = json::array();
    for (const auto& e : r.separability) {
        const char* stage = e.stage == stage_kind::initial        ? "initial"
                            : e.stage == stage_kind::post_encode  ? "post_encode"
                            : e.stage == stage_kind::post_channel ? "post_channel"
                                                                  : "post_decode";
        sep.push_back(json{{"round", e.round},
                           {"stage", stage},
                           {"message", e.message},
                           {"min_pt_eigenvalue", e.min_pt_eigenvalue},
                           {"ppt", e.ppt},
                           {"conclusive", e.conclusive}});
    }
    return json{{"p_succ", r.p_succ},
                {"rate", r.rate},
                {"exponent", r.exponent},
                {"bound", r.bound},
                {"margin", r.margin},
                {"bound_holds", r.bound_holds},
                {"decoder", r.decoder},
                {"chi", r.chi},
                {"mi_chain", std::move(mi)},
                {"chain_ok", r.chain_ok},
                {"cumulative_mi", r.cumulative_mi},
                {"separability", std::move(sep)},
                {"separability_ok", r.separability_ok}};
}

std::string simulation_report_to_csv(const simulation_report& r) {
    std::string out = "round,quantity,value\n";
    auto row = [&](int round, const char* q, double v) {
        out += std::to_string(round) + "," + q + "," + format_double(v) + "\n";
    };
    row(0, "p_succ", r.p_succ);
    row(0, "rate", r.rate);
    row(0, "exponent", r.exponent);
    row(0, "bound", r.bound);
    row(0, "margin", r.margin);
    row(0, "chi", r.chi);
    for (const auto& m : r.mi_chain) {
        row(m.round, "mi_bob", m.mi_bob);
        row(m.round, "mi_memory", m.mi_memory);
        row(m.round, "cmi", m.cmi);
        row(m.round, "chain_slack", m.chain_slack);
    }
    for (const auto& e : r.separability)
        row(e.round, "min_pt_eigenvalue", e.min_pt_eigenvalue);
    return out;
}

json capacity_result_to_json(const capacity_result& r) {
    json j{{"value", r.value},
           {"iterations", r.iterations},
           {"gap_estimate", r.gap_estimate},
           {"lower_bound", r.lower_bound}};
    if (r.ensemble_witness) j["ensemble_witness"] = ensemble_to_json(*r.ensemble_witness);
    if (r.sigma_witness) j["sigma_witness"] = matrix_to_json(r.sigma_witness->op);
    return j;
}

}  // namespace sc
