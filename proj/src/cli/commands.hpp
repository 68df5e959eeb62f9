#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "infrared/birch.hpp"
#include "infrared/embedder.hpp"
#include "infrared/generator.hpp"

namespace infrared::cli {

namespace fs = std::filesystem;

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kInputError = 2, kIoError = 3, kNumericalError = 4 };

/// Parameter rows used by the benchmark runs (tau, L, d) plus the BIRCH
/// threshold calibrated for each row.
struct Preset {
    std::string name;
    double tau;
    int layers;
    int dim;
    double threshold;
};

const std::vector<Preset>& presets();
/// Throws InputError for an unknown name.
const Preset& find_preset(const std::string& name);

struct GenerateOptions {
    SbmParams params;
    fs::path out_prefix;
};

struct GenerateOutputs {
    fs::path edges, truth, manifest;
};

GenerateOutputs run_generate(const GenerateOptions& opts);

enum class DumpFormat { Text, Binary };

struct PartitionOptions {
    fs::path input;
    std::optional<fs::path> truth;
    fs::path output;
    std::optional<fs::path> metrics;
    EmbedConfig embed;
    BirchConfig birch;
    std::optional<fs::path> dump_embeddings;
    DumpFormat dump_format = DumpFormat::Binary;
};

void run_partition(const PartitionOptions& opts, std::ostream& log);

struct StreamCommandOptions {
    fs::path input;
    std::optional<fs::path> truth;
    fs::path records;  // JSONL, one record per step
    std::optional<fs::path> summary;
    std::optional<fs::path> output;  // final-step partition
    EmbedConfig embed;
    BirchConfig birch;
    int steps = 10;
    std::uint64_t split_seed = 1;
    bool compare_static = false;
    bool refresh_embeddings = false;
};

void run_stream(const StreamCommandOptions& opts, std::ostream& log);

struct SpectrumOptions {
    fs::path input;
    double tau = 0.0;
    double epsilon = kDefaultEpsilon;
    std::optional<fs::path> output;  // stdout when absent
    std::optional<fs::path> histogram;
    int bins = 40;
    std::vector<int> eigenvectors;  // 0-based eigenvector indices to include
};

void run_spectrum(const SpectrumOptions& opts, std::ostream& out);

struct AblateOptions {
    fs::path input;
    fs::path truth;
    fs::path output;  // CSV
    std::vector<double> taus;
    EmbedConfig embed;
    BirchConfig birch;
};

void run_ablate(const AblateOptions& opts, std::ostream& log);

/// -100, -90, ..., -10, -1, 0, 1, 10, 20, ..., 100.
std::vector<double> default_tau_grid();

/// Writes the 16-byte header (magic "IGPE", N, d, float width as
/// little-endian uint32) followed by row-major float32 values.
void write_embeddings_binary(const fs::path& path, const EmbeddingMatrix& z);
void write_embeddings_text(const fs::path& path, const EmbeddingMatrix& z);
EmbeddingMatrix read_embeddings_binary(const fs::path& path);

}  // namespace infrared::cli
