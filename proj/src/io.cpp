#include "infrared/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "infrared/errors.hpp"

namespace infrared::io {

namespace {

bool skip_line(std::string_view line) {
    auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string_view::npos || line[pos] == '#' || line[pos] == '%';
}

// Reads the next whitespace-delimited integer; false if none is left.
bool next_int(std::string_view& rest, long long& out, bool& malformed) {
    auto pos = rest.find_first_not_of(" \t\r,");
    if (pos == std::string_view::npos) return false;
    rest.remove_prefix(pos);
    auto end = rest.find_first_of(" \t\r,");
    std::string_view token = rest.substr(0, end);
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    malformed = ec != std::errc{} || ptr != token.data() + token.size() || out < 0;
    rest.remove_prefix(token.size());
    return true;
}

}  // namespace

LoadedGraph read_edge_list(std::istream& in) {
    std::vector<std::pair<long long, long long>> raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) continue;
        std::string_view rest(line);
        long long a = 0, b = 0;
        bool bad_a = false, bad_b = false;
        if (!next_int(rest, a, bad_a) || !next_int(rest, b, bad_b) || bad_a || bad_b) {
            throw InputError("malformed edge at line " + std::to_string(line_no) + ": '" + line + "'");
        }
        raw.emplace_back(a, b);
    }
    if (in.bad()) throw IoError("read error in edge list");

    std::vector<long long> ids;
    ids.reserve(raw.size() * 2);
    for (const auto& [a, b] : raw) {
        ids.push_back(a);
        ids.push_back(b);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.empty()) throw InputError("edge list contains no edges");

    auto compact = [&](long long id) {
        return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (const auto& [a, b] : raw) edges.emplace_back(compact(a), compact(b));

    LoadedGraph out;
    out.graph = Graph::from_edges(edges, static_cast<NodeId>(ids.size()));
    out.file_ids = std::move(ids);
    return out;
}

LoadedGraph read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    for (const auto& [u, v] : g.edge_list()) out << (u + 1) << '\t' << (v + 1) << '\n';
}

void write_labels(std::ostream& out, const std::vector<long long>& node_ids, const std::vector<int>& labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) out << node_ids[i] << '\t' << (labels[i] + 1) << '\n';
}

std::vector<int> read_labels(const std::filesystem::path& path, const std::vector<long long>& file_ids) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::unordered_map<long long, std::size_t> index;
    index.reserve(file_ids.size());
    for (std::size_t i = 0; i < file_ids.size(); ++i) index.emplace(file_ids[i], i);

    std::vector<int> labels(file_ids.size(), 0);
    std::vector<char> seen(file_ids.size(), 0);
    std::size_t count = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) continue;
        std::string_view rest(line);
        long long node = 0, block = 0;
        bool bad_a = false, bad_b = false;
        if (!next_int(rest, node, bad_a) || !next_int(rest, block, bad_b) || bad_a || bad_b) {
            throw InputError("malformed label at line " + std::to_string(line_no) + " of " + path.string());
        }
        auto it = index.find(node);
        if (it == index.end()) {
            throw InputError("label file names node " + std::to_string(node) + " absent from the graph (line " +
                             std::to_string(line_no) + ")");
        }
        if (seen[it->second]) throw InputError("node " + std::to_string(node) + " labelled twice");
        seen[it->second] = 1;
        labels[it->second] = static_cast<int>(block);
        ++count;
    }
    if (count != file_ids.size()) {
        throw InputError("label file covers " + std::to_string(count) + " nodes, graph has " +
                         std::to_string(file_ids.size()));
    }
    return labels;
}

std::ofstream open_for_write(const std::filesystem::path& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

}  // namespace infrared::io
