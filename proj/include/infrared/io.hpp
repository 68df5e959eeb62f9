#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "infrared/graph.hpp"

namespace infrared::io {

/// A graph read from an edge-list file together with the file's node ids.
/// `file_ids[v]` is the id used in the file for compact node v.
struct LoadedGraph {
    Graph graph;
    std::vector<long long> file_ids;
};

/// Parses `src dst [weight]` lines; blank lines and lines starting with '#'
/// or '%' are skipped, a third column is ignored. Node ids are arbitrary
/// non-negative integers and are compacted in ascending id order, so a
/// 1-indexed Graph Challenge file maps id k to node k-1.
/// Throws InputError naming the offending line number.
LoadedGraph read_edge_list(std::istream& in);
LoadedGraph read_edge_list(const std::filesystem::path& path);

/// `node_id block_id` per line, 1-indexed ids for both columns.
void write_edge_list(std::ostream& out, const Graph& g);
void write_labels(std::ostream& out, const std::vector<long long>& node_ids, const std::vector<int>& labels);

/// Reads `node_id block_id` lines and returns block ids aligned to
/// `file_ids` (the compacted order). Block ids are kept as given.
/// Throws InputError if the file's node set differs from `file_ids`.
std::vector<int> read_labels(const std::filesystem::path& path, const std::vector<long long>& file_ids);

std::ofstream open_for_write(const std::filesystem::path& path, bool binary = false);

}  // namespace infrared::io
