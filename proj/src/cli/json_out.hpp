#pragma once

#include <filesystem>
#include <span>

#include "json.hpp"

#include "infrared/birch.hpp"
#include "infrared/embedder.hpp"
#include "infrared/generator.hpp"
#include "infrared/metrics.hpp"
#include "infrared/pipeline.hpp"

namespace infrared::cli {

using nlohmann::json;

inline constexpr const char* kManifestSchema = "infrared.manifest/v1";
inline constexpr const char* kMetricsSchema = "infrared.metrics/v1";
inline constexpr const char* kStreamStepSchema = "infrared.stream_step/v1";
inline constexpr const char* kStreamSummarySchema = "infrared.stream_summary/v1";
inline constexpr const char* kSpectrumSchema = "infrared.spectrum/v1";

json to_json(const SbmParams& p);
json to_json(const EmbedConfig& cfg);
json to_json(const BirchConfig& cfg);
json to_json(const Timings& t);
json to_json(const TreeStats& s);

/// Quality block for a prediction; precision/recall/f1/ari only when truth is non-empty.
json quality_json(std::span<const int> truth, std::span<const int> pred, int k_pred);

/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace infrared::cli
