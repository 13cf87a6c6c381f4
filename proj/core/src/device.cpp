#include "dqas/device.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "dqas/error.hpp"
#include "json.hpp"

namespace dqas {

namespace {

using nlohmann::json;

std::string role_name(QubitRole r) { return r == QubitRole::data ? "data" : "communication"; }

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError("device: " + message);
}

std::string qname(QubitId q) { return "q" + std::to_string(q); }

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    require(obj.is_object(), where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return key == k; });
        require(known, "unknown key '" + key + "' in " + where);
    }
}

std::vector<Edge> parse_pairs(const json& arr, const std::string& where) {
    require(arr.is_array(), where + " must be an array of pairs");
    std::vector<Edge> out;
    for (const auto& p : arr) {
        require(p.is_array() && p.size() == 2 && p[0].is_number_integer() && p[1].is_number_integer(),
                where + " entries must be [int, int]");
        out.push_back(make_edge(p[0].get<int>(), p[1].get<int>()));
    }
    return out;
}

}  // namespace

DeviceGraph::DeviceGraph(std::vector<QubitSpec> qubits, std::vector<Edge> couplings,
                         std::vector<Edge> links)
    : qubits_(std::move(qubits)), couplings_(std::move(couplings)), links_(std::move(links)) {
    const int n = static_cast<int>(qubits_.size());
    require(n > 0, "at least one qubit is required");
    std::sort(qubits_.begin(), qubits_.end(),
              [](const QubitSpec& a, const QubitSpec& b) { return a.id < b.id; });
    for (int i = 0; i < n; ++i) {
        require(qubits_[i].id == i, "qubit ids must be exactly 0.." + std::to_string(n - 1));
        require(qubits_[i].qpu >= 0, "qpu index of " + qname(i) + " must be non-negative");
    }

    auto normalize = [&](std::vector<Edge>& edges, const char* what) {
        for (auto& e : edges) {
            e = make_edge(e.first, e.second);
            require(contains(e.first) && contains(e.second),
                    std::string(what) + " references an unknown qubit");
            require(e.first != e.second, std::string(what) + " joins " + qname(e.first) + " to itself");
        }
        std::sort(edges.begin(), edges.end());
        require(std::adjacent_find(edges.begin(), edges.end()) == edges.end(),
                std::string("duplicate ") + what);
    };
    normalize(couplings_, "coupling");
    normalize(links_, "link");

    adjacency_.assign(n, {});
    for (const auto& [a, b] : couplings_) {
        require(qpu_of(a) == qpu_of(b),
                "coupling (" + qname(a) + "," + qname(b) + ") crosses QPUs");
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

    for (const auto& [a, b] : links_) {
        require(is_communication(a) && is_communication(b),
                "link (" + qname(a) + "," + qname(b) + ") touches a data qubit");
        require(qpu_of(a) != qpu_of(b),
                "link (" + qname(a) + "," + qname(b) + ") joins qubits on the same QPU");
    }

    for (const auto& q : qubits_) {
        if (q.role != QubitRole::data) continue;
        data_.push_back(q.id);
        const auto comm = std::count_if(adjacency_[q.id].begin(), adjacency_[q.id].end(),
                                        [&](QubitId r) { return is_communication(r); });
        require(comm <= 1, "data qubit " + qname(q.id) + " is coupled to " + std::to_string(comm) +
                               " communication qubits");
    }
}

bool DeviceGraph::coupled(QubitId a, QubitId b) const {
    if (!contains(a) || !contains(b)) return false;
    const auto& adj = adjacency_[a];
    return std::binary_search(adj.begin(), adj.end(), b);
}

std::optional<QubitId> DeviceGraph::communication_neighbor(QubitId q) const {
    for (QubitId r : neighbors(q))
        if (is_communication(r)) return r;
    return std::nullopt;
}

std::vector<std::size_t> DeviceGraph::links_of(QubitId q) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < links_.size(); ++i)
        if (links_[i].first == q || links_[i].second == q) out.push_back(i);
    return out;
}

std::string DeviceGraph::to_text() const {
    json doc;
    doc["qubits"] = json::array();
    for (const auto& q : qubits_)
        doc["qubits"].push_back({{"id", q.id}, {"role", role_name(q.role)}, {"qpu", q.qpu}});
    doc["couplings"] = json::array();
    for (const auto& [a, b] : couplings_) doc["couplings"].push_back({a, b});
    doc["links"] = json::array();
    for (const auto& [a, b] : links_) doc["links"].push_back({a, b});
    return doc.dump(1) + "\n";
}

std::string DeviceGraph::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_text()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

DeviceGraph load_device(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("device: malformed text: ") + e.what());
    }
    check_keys(doc, {"qubits", "couplings", "links"}, "topology");
    require(doc.contains("qubits") && doc["qubits"].is_array(), "'qubits' array is required");

    std::vector<QubitSpec> qubits;
    for (const auto& q : doc["qubits"]) {
        check_keys(q, {"id", "role", "qpu"}, "qubit entry");
        require(q.contains("id") && q["id"].is_number_integer(), "qubit 'id' must be an integer");
        require(q.contains("qpu") && q["qpu"].is_number_integer(), "qubit 'qpu' must be an integer");
        require(q.contains("role") && q["role"].is_string(), "qubit 'role' must be a string");
        const auto role = q["role"].get<std::string>();
        require(role == "data" || role == "communication",
                "qubit role must be 'data' or 'communication', got '" + role + "'");
        qubits.push_back({q["id"].get<int>(),
                          role == "data" ? QubitRole::data : QubitRole::communication,
                          q["qpu"].get<int>()});
    }
    auto couplings = doc.contains("couplings") ? parse_pairs(doc["couplings"], "couplings")
                                               : std::vector<Edge>{};
    auto links = doc.contains("links") ? parse_pairs(doc["links"], "links") : std::vector<Edge>{};
    return DeviceGraph(std::move(qubits), std::move(couplings), std::move(links));
}

DeviceGraph load_device_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("device: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return load_device(ss.str());
}

DeviceGraph two_yorktown_device() {
    std::vector<QubitSpec> qubits;
    for (int i = 0; i < 10; ++i) {
        const bool comm = (i == 4 || i == 5);
        qubits.push_back({i, comm ? QubitRole::communication : QubitRole::data, i < 5 ? 0 : 1});
    }
    // QPU 2 mirrors QPU 1 through q4->q5, q3->q6, q2->q7, q0->q8, q1->q9.
    std::vector<Edge> couplings = {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4},
                                   {8, 9}, {7, 8}, {7, 9}, {6, 7}, {5, 7}, {5, 6}};
    return DeviceGraph(std::move(qubits), std::move(couplings), {{4, 5}});
}

QubitAssignment make_assignment(const DeviceGraph& device, std::vector<QubitId> logical_to_physical) {
    std::set<QubitId> used;
    for (QubitId q : logical_to_physical) {
        if (!device.is_data(q))
            throw PreconditionError("assignment: q" + std::to_string(q) + " is not a data qubit");
        if (!used.insert(q).second)
            throw PreconditionError("assignment: q" + std::to_string(q) + " assigned twice");
    }
    QubitAssignment out;
    out.logical_to_physical = std::move(logical_to_physical);
    for (QubitId q : device.data_qubits())
        if (!used.contains(q)) out.empty.push_back(q);
    return out;
}

QubitAssignment sample_assignment(const DeviceGraph& device, int n_logical, Rng& rng) {
    const auto& data = device.data_qubits();
    if (n_logical < 0 || n_logical > static_cast<int>(data.size()))
        throw PreconditionError("assignment: " + std::to_string(n_logical) +
                                " logical qubits requested but the device has " +
                                std::to_string(data.size()) + " data qubits");
    std::vector<QubitId> pool = data;
    // Partial Fisher-Yates: the first n_logical entries form a uniform injective sample.
    for (int i = 0; i < n_logical; ++i) {
        const auto j = i + uniform_index(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(n_logical);
    return make_assignment(device, std::move(pool));
}

}  // namespace dqas
