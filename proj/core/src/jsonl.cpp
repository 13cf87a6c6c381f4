#include "jsonl.hpp"

#include <fstream>
#include <sstream>

#include "dqas/error.hpp"

namespace dqas::detail {

namespace fs = std::filesystem;

std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
    std::vector<nlohmann::json> out;
    if (!fs::exists(path)) return out;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        const std::size_t end = text.find('\n', start);
        if (end == std::string::npos) break;
        ++line_no;
        try {
            out.push_back(nlohmann::json::parse(text.begin() + static_cast<std::ptrdiff_t>(start),
                                                text.begin() + static_cast<std::ptrdiff_t>(end)));
        } catch (const nlohmann::json::exception& e) {
            throw Error(path.string() + ":" + std::to_string(line_no) + ": corrupt record: " + e.what());
        }
        start = end + 1;
    }
    if (start < text.size()) {
        in.close();
        fs::resize_file(path, start);
    }
    return out;
}

void append_lines(const fs::path& path, const std::vector<std::string>& lines) {
    if (lines.empty()) return;
    std::string block;
    for (const auto& l : lines) block += l + "\n";
    std::ofstream out(path, std::ios::binary | std::ios::app);
    out << block;
    out.flush();
    if (!out) throw Error("cannot append to " + path.string());
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) throw Error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace dqas::detail
