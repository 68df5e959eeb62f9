#include "commands.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "json_out.hpp"

#include "infrared/errors.hpp"
#include "infrared/io.hpp"
#include "infrared/metrics.hpp"
#include "infrared/pipeline.hpp"
#include "infrared/spectral.hpp"

namespace infrared::cli {

namespace {

constexpr char kMagic[4] = {'I', 'G', 'P', 'E'};

std::vector<int> load_truth(const std::optional<fs::path>& path, const io::LoadedGraph& loaded) {
    if (!path) return {};
    return io::read_labels(*path, loaded.file_ids);
}

void write_partition(const fs::path& path, const std::vector<long long>& ids, const std::vector<int>& labels) {
    auto out = io::open_for_write(path);
    io::write_labels(out, ids, labels);
    if (!out) throw IoError("failed writing " + path.string());
}

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* b) {
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
}

}  // namespace

const std::vector<Preset>& presets() {
    // tau/L/d per benchmark size; thresholds calibrated on seeds disjoint
    // from the acceptance seeds.
    static const std::vector<Preset> table = {
        {"5k", -6.0, 10, 64, 0.8},         {"10k", -3.0, 9, 64, 0.7},
        {"50k", -80.0, 40, 32, 0.5},       {"100k", -80.0, 60, 32, 0.5},
        {"500k", -80.0, 70, 32, 0.5},      {"1m", -80.0, 60, 32, 0.5},
        {"stream-100k", -100.0, 20, 32, 0.5}, {"stream-1m", -100.0, 20, 16, 0.5},
    };
    return table;
}

const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    throw InputError("unknown preset '" + name + "'");
}

std::vector<double> default_tau_grid() {
    std::vector<double> taus;
    for (int t = -100; t <= -10; t += 10) taus.push_back(t);
    taus.insert(taus.end(), {-1.0, 0.0, 1.0});
    for (int t = 10; t <= 100; t += 10) taus.push_back(t);
    return taus;
}

GenerateOutputs run_generate(const GenerateOptions& opts) {
    const GeneratedGraph gen = generate_sbm(opts.params);
    const Graph& g = gen.graph;

    GenerateOutputs paths;
    const std::string prefix = opts.out_prefix.string();
    paths.edges = prefix + ".tsv";
    paths.truth = prefix + "_truth.tsv";
    paths.manifest = prefix + "_manifest.json";

    {
        auto out = io::open_for_write(paths.edges);
        io::write_edge_list(out, g);
        if (!out) throw IoError("failed writing " + paths.edges.string());
    }
    std::vector<long long> ids(static_cast<std::size_t>(g.num_nodes()));
    for (std::size_t v = 0; v < ids.size(); ++v) ids[v] = static_cast<long long>(v) + 1;
    write_partition(paths.truth, ids, gen.truth.labels);

    EdgeOffset within = 0;
    NodeId min_deg = g.num_nodes() ? g.degree(0) : 0, max_deg = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        min_deg = std::min(min_deg, g.degree(v));
        max_deg = std::max(max_deg, g.degree(v));
        for (NodeId u : g.neighbors(v)) {
            if (u > v && gen.truth.labels[u] == gen.truth.labels[v]) ++within;
        }
    }
    const EdgeOffset m = g.num_edges();
    json manifest = {
        {"schema", kManifestSchema},
        {"params", to_json(opts.params)},
        {"nodes", g.num_nodes()},
        {"sampled_nodes", gen.sampled_nodes},
        {"edges", m},
        {"blocks", gen.truth.num_blocks},
        {"avg_degree", g.num_nodes() ? 2.0 * double(m) / g.num_nodes() : 0.0},
        {"min_degree", min_deg},
        {"max_degree", max_deg},
        {"within_edges", within},
        {"between_edges", m - within},
        {"files", {{"edges", paths.edges.filename().string()}, {"truth", paths.truth.filename().string()}}},
    };
    write_json(paths.manifest, manifest);
    return paths;
}

void write_embeddings_binary(const fs::path& path, const EmbeddingMatrix& z) {
    static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
    auto out = io::open_for_write(path, true);
    out.write(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(z.rows()));
    put_u32(out, static_cast<std::uint32_t>(z.cols()));
    put_u32(out, sizeof(float));
    out.write(reinterpret_cast<const char*>(z.data()), static_cast<std::streamsize>(z.values().size() * sizeof(float)));
    if (!out) throw IoError("failed writing " + path.string());
}

void write_embeddings_text(const fs::path& path, const EmbeddingMatrix& z) {
    auto out = io::open_for_write(path);
    out << std::setprecision(9);
    for (std::size_t i = 0; i < z.rows(); ++i) {
        auto row = z.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ' ';
            out << row[j];
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

EmbeddingMatrix read_embeddings_binary(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    unsigned char header[16];
    if (!in.read(reinterpret_cast<char*>(header), 16) || std::memcmp(header, kMagic, 4) != 0) {
        throw InputError(path.string() + ": not an embedding dump");
    }
    const std::uint32_t n = get_u32(header + 4), d = get_u32(header + 8), width = get_u32(header + 12);
    if (width != sizeof(float)) throw InputError(path.string() + ": unsupported float width " + std::to_string(width));
    EmbeddingMatrix z(n, d);
    if (!in.read(reinterpret_cast<char*>(z.data()), static_cast<std::streamsize>(std::size_t(n) * d * sizeof(float)))) {
        throw InputError(path.string() + ": truncated embedding dump");
    }
    return z;
}

void run_partition(const PartitionOptions& opts, std::ostream& log) {
    const io::LoadedGraph loaded = io::read_edge_list(opts.input);
    const std::vector<int> truth = load_truth(opts.truth, loaded);
    const Graph& g = loaded.graph;

    EmbeddingMatrix z;
    const PartitionResult r = static_partition(g, opts.embed, opts.birch, opts.dump_embeddings ? &z : nullptr);
    write_partition(opts.output, loaded.file_ids, r.labels);
    if (opts.dump_embeddings) {
        if (opts.dump_format == DumpFormat::Binary) {
            write_embeddings_binary(*opts.dump_embeddings, z);
        } else {
            write_embeddings_text(*opts.dump_embeddings, z);
        }
    }

    json report = quality_json(truth, r.labels, r.k);
    report["schema"] = kMetricsSchema;
    report["nodes"] = g.num_nodes();
    report["edges"] = g.num_edges();
    report["timings"] = to_json(r.timings);
    report["tree"] = to_json(r.tree);
    report["embed"] = to_json(opts.embed);
    report["birch"] = to_json(opts.birch);
    report["degenerate_columns"] = r.embed_report.degenerate_columns;
    if (opts.metrics) write_json(*opts.metrics, report);

    log << "partitioned " << g.num_nodes() << " nodes into " << r.k << " blocks in " << std::fixed
        << std::setprecision(3) << r.timings.total_seconds << " s";
    if (!truth.empty()) {
        log << " (f1 " << report["f1"].get<double>() << ", ari " << report["ari"].get<double>() << ")";
    }
    log << '\n';
    log.unsetf(std::ios::floatfield);
}

void run_stream(const StreamCommandOptions& opts, std::ostream& log) {
    if (opts.steps < 1) throw InputError("--steps must be at least 1");
    const io::LoadedGraph loaded = io::read_edge_list(opts.input);
    const std::vector<int> truth = load_truth(opts.truth, loaded);
    const Graph& g = loaded.graph;
    if (!g.is_connected()) throw InputError("snowball streaming needs a connected graph");

    const SnowballStream stream = snowball_split(g, opts.steps, opts.split_seed);
    StreamingPartitioner partitioner(g, opts.embed, opts.birch, {opts.refresh_embeddings});

    auto records = io::open_for_write(opts.records);
    json steps = json::array();
    StreamStep last;
    for (const auto& batch : stream.subsets) {
        StreamStep s = partitioner.advance(batch);
        std::vector<int> sub_truth;
        if (!truth.empty()) {
            sub_truth.reserve(s.nodes.size());
            for (NodeId v : s.nodes) sub_truth.push_back(truth[v]);
        }
        json rec = {{"schema", kStreamStepSchema},
                    {"step", s.step},
                    {"new_nodes", s.new_nodes},
                    {"cumulative_nodes", s.nodes.size()},
                    {"cumulative_edges", s.cumulative_edges}};
        json st = quality_json(sub_truth, s.result.labels, s.result.k);
        st["timings"] = to_json(s.result.timings);
        rec["stream"] = st;
        if (opts.compare_static) {
            const PartitionResult ref = static_partition(partitioner.cumulative_graph(), opts.embed, opts.birch);
            json sr = quality_json(sub_truth, ref.labels, ref.k);
            sr["timings"] = to_json(ref.timings);
            rec["static"] = sr;
            rec["speedup"] = s.result.timings.total_seconds > 0
                                 ? ref.timings.total_seconds / s.result.timings.total_seconds
                                 : 0.0;
        }
        records << rec.dump() << '\n';
        if (!records) throw IoError("failed writing " + opts.records.string());
        log << "step " << s.step << ": " << s.nodes.size() << " nodes, k=" << s.result.k << ", "
            << s.result.timings.total_seconds << " s\n";
        steps.push_back(std::move(rec));
        last = std::move(s);
    }

    if (opts.output) {
        std::vector<long long> ids;
        ids.reserve(last.nodes.size());
        for (NodeId v : last.nodes) ids.push_back(loaded.file_ids[v]);
        write_partition(*opts.output, ids, last.result.labels);
    }
    if (opts.summary) {
        json summary = {{"schema", kStreamSummarySchema},
                        {"steps", opts.steps},
                        {"split_seed", opts.split_seed},
                        {"refresh_embeddings", opts.refresh_embeddings},
                        {"embed", to_json(opts.embed)},
                        {"birch", to_json(opts.birch)},
                        {"final", steps.back()}};
        write_json(*opts.summary, summary);
    }
}

void run_spectrum(const SpectrumOptions& opts, std::ostream& out) {
    if (opts.bins < 1) throw InputError("--bins must be positive");
    const io::LoadedGraph loaded = io::read_edge_list(opts.input);
    const Graph& g = loaded.graph;
    const spectral::SpectrumReport rep = spectral::spectrum(g, opts.tau, opts.epsilon);
    const Eigen::Index n = rep.eigenvalues.size();

    bool inside = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lam = rep.eigenvalues[i];
        const double slack = 1e-9 * std::max(1.0, std::abs(lam));
        inside = inside && lam >= rep.gershgorin.lo - slack && lam <= rep.gershgorin.hi + slack;
    }

    json j = {{"schema", kSpectrumSchema},
              {"tau", opts.tau},
              {"epsilon", opts.epsilon},
              {"nodes", g.num_nodes()},
              {"edges", g.num_edges()},
              {"eigenvalues", std::vector<double>(rep.eigenvalues.data(), rep.eigenvalues.data() + n)},
              {"min_eigenvalue", n ? rep.eigenvalues[0] : 0.0},
              {"max_eigenvalue", n ? rep.eigenvalues[n - 1] : 0.0},
              {"num_infrared", rep.num_infrared},
              {"num_ultraviolet", rep.num_ultraviolet},
              {"gershgorin", {{"lo", rep.gershgorin.lo}, {"hi", rep.gershgorin.hi}}},
              {"within_gershgorin", inside}};
    if (!opts.eigenvectors.empty()) {
        // Components are listed in compact node order; file_ids gives the id
        // each position carries in the input (1-based for Graph Challenge data).
        j["node_ids"] = loaded.file_ids;
        json vecs = json::array();
        for (int s : opts.eigenvectors) {
            if (s < 0 || s >= n) throw InputError("eigenvector index " + std::to_string(s) + " out of range");
            std::vector<double> v(static_cast<std::size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = rep.eigenvectors(i, s);
            vecs.push_back({{"index", s}, {"one_based_index", s + 1}, {"eigenvalue", rep.eigenvalues[s]}, {"values", v}});
        }
        j["eigenvectors"] = vecs;
    }

    if (opts.output) {
        write_json(*opts.output, j);
    } else {
        out << j.dump(2) << '\n';
    }

    if (opts.histogram) {
        const double lo = n ? rep.eigenvalues[0] : 0.0;
        const double hi = n ? rep.eigenvalues[n - 1] : 0.0;
        const double width = hi > lo ? (hi - lo) / opts.bins : 1.0;
        std::vector<long long> counts(static_cast<std::size_t>(opts.bins), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            auto b = static_cast<int>((rep.eigenvalues[i] - lo) / width);
            ++counts[static_cast<std::size_t>(std::clamp(b, 0, opts.bins - 1))];
        }
        auto csv = io::open_for_write(*opts.histogram);
        csv << std::setprecision(12) << "bin_lo,bin_hi,count\n";
        for (int b = 0; b < opts.bins; ++b) {
            csv << lo + b * width << ',' << lo + (b + 1) * width << ',' << counts[static_cast<std::size_t>(b)] << '\n';
        }
        if (!csv) throw IoError("failed writing " + opts.histogram->string());
    }
}

void run_ablate(const AblateOptions& opts, std::ostream& log) {
    const io::LoadedGraph loaded = io::read_edge_list(opts.input);
    const std::vector<int> truth = io::read_labels(opts.truth, loaded.file_ids);
    const std::vector<double> taus = opts.taus.empty() ? default_tau_grid() : opts.taus;

    auto csv = io::open_for_write(opts.output);
    csv << "tau,precision,recall,f1,ari,k,seconds\n" << std::setprecision(10);
    for (double tau : taus) {
        // One row at a time so partial results survive an interrupted sweep.
        const std::vector<double> one{tau};
        const AblationRow r = tau_ablation(loaded.graph, truth, one, opts.embed, opts.birch).front();
        csv << r.tau << ',' << r.precision << ',' << r.recall << ',' << r.f1 << ',' << r.ari << ',' << r.k << ','
            << r.seconds << '\n' << std::flush;
        if (!csv) throw IoError("failed writing " + opts.output.string());
        log << "tau " << r.tau << ": f1 " << r.f1 << ", ari " << r.ari << ", k " << r.k << '\n';
    }
}

}  // namespace infrared::cli
