#include "json_out.hpp"

#include "infrared/errors.hpp"
#include "infrared/io.hpp"

namespace infrared::cli {

json to_json(const SbmParams& p) {
    return {{"num_nodes", p.num_nodes},
            {"num_blocks", p.resolved_blocks()},
            {"block_size_heterogeneity", p.block_size_heterogeneity},
            {"within_between_ratio", p.within_between_ratio},
            {"target_avg_degree", p.target_avg_degree},
            {"degree_exponent", p.degree_exponent},
            {"degree_spread", p.degree_spread},
            {"seed", p.seed}};
}

json to_json(const EmbedConfig& cfg) {
    return {{"tau", cfg.tau},
            {"layers", cfg.num_layers},
            {"dim", cfg.dim},
            {"seed", cfg.seed},
            {"theta", cfg.theta},
            {"alpha", cfg.alpha},
            {"epsilon", cfg.epsilon},
            {"std", cfg.std_convention == StdConvention::Population ? "population" : "sample"},
            {"tanh", cfg.apply_tanh},
            {"znorm", cfg.apply_znorm}};
}

json to_json(const BirchConfig& cfg) {
    return {{"threshold", cfg.threshold}, {"branching_factor", cfg.branching_factor}};
}

json to_json(const Timings& t) {
    return {{"embed_seconds", t.embed_seconds},
            {"cluster_seconds", t.cluster_seconds},
            {"total_seconds", t.total_seconds}};
}

json to_json(const TreeStats& s) {
    return {{"subclusters", s.num_subclusters},
            {"depth", s.depth},
            {"nodes", s.num_nodes},
            {"points", s.num_points}};
}

json quality_json(std::span<const int> truth, std::span<const int> pred, int k_pred) {
    json j = {{"k_pred", k_pred}};
    if (truth.empty()) return j;
    auto pr = precision_recall_f1(truth, pred);
    j["precision"] = pr.precision;
    j["recall"] = pr.recall;
    j["f1"] = pr.f1;
    j["ari"] = ari(truth, pred);
    j["k_truth"] = count_labels(truth);
    return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
    auto out = io::open_for_write(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace infrared::cli
