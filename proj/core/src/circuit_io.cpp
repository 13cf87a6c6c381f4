#include "dqas/circuit.hpp"
#include "dqas/error.hpp"
#include "json.hpp"

namespace dqas {

namespace {

using nlohmann::json;

json gate_to_json(const Gate& g) {
    json j;
    j["kind"] = to_string(g.kind);
    j["q"] = g.kind == GateKind::U ? json::array({g.qubits[0]}) : json::array({g.qubits[0], g.qubits[1]});
    if (g.kind == GateKind::U) j["param"] = g.param_offset;
    if (g.nonlocal) {
        j["tag"] = to_string(g.nonlocal->method);
        j["cycle"] = g.nonlocal->cycle;
        if (g.nonlocal->relocation)
            j["move"] = json::array({g.nonlocal->relocation->from, g.nonlocal->relocation->to});
    }
    return j;
}

Gate gate_from_json(const json& j) {
    Gate g;
    g.kind = parse_gate_kind(j.at("kind").get<std::string>());
    const auto& q = j.at("q");
    if (q.size() != static_cast<std::size_t>(g.arity())) throw ConfigError("circuit: gate arity mismatch");
    g.qubits[0] = q[0].get<int>();
    if (g.arity() == 2) g.qubits[1] = q[1].get<int>();
    if (g.kind == GateKind::U) g.param_offset = j.at("param").get<int>();
    if (j.contains("tag")) {
        NonlocalTag tag;
        tag.method = parse_nonlocal_method(j["tag"].get<std::string>());
        tag.cycle = j.at("cycle").get<int>();
        if (j.contains("move")) tag.relocation = Relocation{j["move"].at(0).get<int>(), j["move"].at(1).get<int>()};
        g.nonlocal = tag;
    }
    return g;
}

}  // namespace

std::string circuit_to_text(const Circuit& c) {
    json j;
    j["device"] = c.device_fingerprint;
    j["data_qubits"] = c.data_qubits;
    j["assignment"] = c.assignment.logical_to_physical;
    j["empty"] = c.assignment.empty;
    j["ebits"] = c.ebits;
    j["n_params"] = c.n_params;
    if (c.meta) {
        j["meta"] = {{"gate_dist", c.meta->gate_dist},
                     {"p_nonlocal", c.meta->p_nonlocal},
                     {"method", to_string(c.meta->method)},
                     {"seed", c.meta->seed}};
    }
    j["gates"] = json::array();
    for (const auto& g : c.gates) j["gates"].push_back(gate_to_json(g));
    return j.dump();
}

Circuit circuit_from_text(std::string_view text) {
    try {
        const json j = json::parse(text);
        Circuit c;
        c.device_fingerprint = j.at("device").get<std::string>();
        c.data_qubits = j.at("data_qubits").get<std::vector<QubitId>>();
        c.assignment.logical_to_physical = j.at("assignment").get<std::vector<QubitId>>();
        c.assignment.empty = j.at("empty").get<std::vector<QubitId>>();
        c.ebits = j.at("ebits").get<int>();
        c.n_params = j.at("n_params").get<int>();
        if (j.contains("meta")) {
            const auto& m = j["meta"];
            c.meta = GenerationMeta{m.at("gate_dist").get<std::array<double, 3>>(),
                                    m.at("p_nonlocal").get<double>(),
                                    parse_method(m.at("method").get<std::string>()),
                                    m.at("seed").get<std::uint64_t>()};
        }
        for (const auto& g : j.at("gates")) c.gates.push_back(gate_from_json(g));
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("circuit: malformed record: ") + e.what());
    }
}

}  // namespace dqas
