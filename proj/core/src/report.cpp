#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dqas/dag.hpp"
#include "dqas/error.hpp"
#include "dqas/pipeline.hpp"
#include "jsonl.hpp"

namespace dqas {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kHistogramBins = 40;

struct Bin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

std::vector<Bin> histogram(const std::vector<double>& values, int n_bins) {
    if (values.empty()) return {};
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn;
    const double width = *mx > lo ? (*mx - lo) / n_bins : 1.0;
    std::vector<Bin> bins(n_bins);
    for (int k = 0; k < n_bins; ++k) bins[k] = {lo + k * width, lo + (k + 1) * width, 0};
    for (double v : values) ++bins[std::clamp(static_cast<int>((v - lo) / width), 0, n_bins - 1)].count;
    return bins;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error("cannot write " + path.string());
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

}  // namespace

StageStatus PipelineReport::status(Stage s) const {
    for (const auto& st : stages)
        if (st.stage == s) return st.status;
    return StageStatus::pending;
}

PipelineReport load_report(const fs::path& dir) {
    const fs::path manifest_path = dir / files::manifest;
    if (!fs::exists(manifest_path))
        throw Error("no pipeline state in '" + dir.string() +
                    "'; run `dqas pipeline --config <file>` (or `dqas generate`) with this output_dir first");
    json manifest;
    {
        std::ifstream in(manifest_path);
        try {
            manifest = json::parse(in);
        } catch (const json::exception& e) {
            throw Error("manifest " + manifest_path.string() + " is unreadable: " + e.what());
        }
    }

    PipelineReport r;
    if (manifest.contains("ground_energy")) r.ground_energy = manifest.at("ground_energy").get<double>();
    const auto& stages = manifest.at("stages");
    auto status_of = [&](Stage s) {
        const auto v = stages.value(std::string(to_string(s)), std::string("pending"));
        return v == "done" ? StageStatus::done : v == "partial" ? StageStatus::partial : StageStatus::pending;
    };

    const auto generated = detail::read_jsonl(dir / files::generated);
    for (const auto& g : generated) {
        r.generated_paths.push_back(g.at("paths").get<std::string>());
        r.generated_ebits.push_back(g.at("ebits").get<int>());
    }
    const auto top = detail::read_jsonl(dir / files::paths_top);
    for (const auto& e : detail::read_jsonl(dir / files::expressibility))
        r.expressibility.push_back(e.at("expressibility").get<double>());
    for (const auto& c : detail::read_jsonl(dir / files::candidates)) r.candidate_ebits.push_back(c.at("ebits").get<int>());

    double lowest = 0.0;
    for (const auto& q : detail::read_jsonl(dir / files::queries)) {
        QueryRecord rec;
        rec.query = q.at("query").get<int>();
        rec.id = q.at("id").get<int>();
        rec.best_energy = q.at("best_energy").get<double>();
        rec.restart_energies = q.at("restart_energies").get<std::vector<double>>();
        rec.iterations = q.at("iterations").get<std::vector<int>>();
        rec.solved = q.at("solved").get<bool>();
        rec.ebits = q.at("ebits").get<int>();
        lowest = r.query_trace.empty() ? rec.best_energy : std::min(lowest, rec.best_energy);
        r.query_trace.push_back(lowest);
        if (rec.solved) {
            ++r.n_solutions;
            r.min_solution_ebits = r.min_solution_ebits ? std::min(*r.min_solution_ebits, rec.ebits) : rec.ebits;
        }
        r.queries.push_back(std::move(rec));
    }
    if (r.ground_energy && !r.query_trace.empty()) r.gap = r.query_trace.back() - *r.ground_energy;

    r.stages = {{Stage::generate, status_of(Stage::generate), generated.size()},
                {Stage::paths, status_of(Stage::paths), top.size()},
                {Stage::expressibility, status_of(Stage::expressibility), r.expressibility.size()},
                {Stage::train, status_of(Stage::train), r.queries.size()}};
    return r;
}

std::string write_report(const fs::path& dir) {
    const PipelineReport r = load_report(dir);

    std::vector<double> log_paths;
    for (const auto& p : r.generated_paths) log_paths.push_back(std::log10(PathCount(p).convert_to<double>()));
    std::string paths_csv = "log10_paths_lo,log10_paths_hi,count\n";
    for (const auto& b : histogram(log_paths, kHistogramBins))
        paths_csv += fmt(b.lo) + "," + fmt(b.hi) + "," + std::to_string(b.count) + "\n";
    write_file(dir / "paths_hist.csv", paths_csv);

    std::string expr_csv = "expressibility_lo,expressibility_hi,count\n";
    for (const auto& b : histogram(r.expressibility, kHistogramBins))
        expr_csv += fmt(b.lo) + "," + fmt(b.hi) + "," + std::to_string(b.count) + "\n";
    write_file(dir / "expressibility_hist.csv", expr_csv);

    const auto top = detail::read_jsonl(dir / files::paths_top);
    std::map<int, std::array<std::size_t, 3>> ebits;
    for (int e : r.generated_ebits) ++ebits[e][0];
    for (const auto& t : top) ++ebits[t.at("ebits").get<int>()][1];
    for (int e : r.candidate_ebits) ++ebits[e][2];
    std::string ebits_csv = "ebits,generated,path_filtered,candidates\n";
    for (const auto& [e, c] : ebits)
        ebits_csv += std::to_string(e) + "," + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," +
                     std::to_string(c[2]) + "\n";
    write_file(dir / "ebits_hist.csv", ebits_csv);

    std::string trace_csv = "query,circuit_id,energy,lowest_energy,solved\n";
    for (std::size_t i = 0; i < r.queries.size(); ++i) {
        const auto& q = r.queries[i];
        trace_csv += std::to_string(q.query + 1) + "," + std::to_string(q.id) + "," + fmt(q.best_energy) + "," +
                     fmt(r.query_trace[i]) + "," + (q.solved ? "1" : "0") + "\n";
    }
    write_file(dir / "query_trace.csv", trace_csv);

    const bool trained = r.status(Stage::train) != StageStatus::pending && !r.queries.empty();
    std::string summary = "#solution,gap,#ebit,queries,ground_energy,best_energy";
    for (Stage s : kStages) summary += "," + std::string(to_string(s));
    summary += "\n";
    if (trained) {
        summary += std::to_string(r.n_solutions) + "," + (r.gap ? fmt(*r.gap) : "") + "," +
                   (r.min_solution_ebits ? std::to_string(*r.min_solution_ebits) : "-") + "," +
                   std::to_string(r.queries.size()) + "," + (r.ground_energy ? fmt(*r.ground_energy) : "") + "," +
                   fmt(r.query_trace.back());
    } else {
        summary += "pending,pending,pending,0,,";
    }
    for (const auto& st : r.stages) summary += "," + std::string(to_string(st.status));
    summary += "\n";
    write_file(dir / "summary.csv", summary);
    return summary;
}

}  // namespace dqas
