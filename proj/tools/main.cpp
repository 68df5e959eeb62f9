// infrared: K-agnostic graph partitioning from the command line.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "commands.hpp"
#include "infrared/errors.hpp"

using namespace infrared;
using namespace infrared::cli;

namespace {

struct ModelFlags {
    std::string preset;
    EmbedConfig embed;
    BirchConfig birch;
    CLI::Option* tau = nullptr;
    CLI::Option* layers = nullptr;
    CLI::Option* dim = nullptr;
    CLI::Option* threshold = nullptr;

    void attach(CLI::App* app) {
        app->add_option("--preset", preset, "parameter row: 5k, 10k, 50k, 100k, 500k, 1m, stream-100k, stream-1m");
        tau = app->add_option("--tau", embed.tau, "degree correction");
        layers = app->add_option("--layers", embed.num_layers, "propagation layers L")->check(CLI::PositiveNumber);
        dim = app->add_option("--dim", embed.dim, "embedding dimension d")->check(CLI::PositiveNumber);
        app->add_option("--theta", embed.theta, "self-loop weight");
        app->add_option("--alpha", embed.alpha, "neighbor weight");
        app->add_option("--epsilon", embed.epsilon, "degree clamp floor");
        app->add_option("--seed", embed.seed, "noise seed");
        threshold = app->add_option("--threshold", birch.threshold, "BIRCH subcluster radius");
        app->add_option("--branching", birch.branching_factor, "BIRCH branching factor");
    }

    // Explicit flags win over the preset.
    void resolve() {
        if (preset.empty()) return;
        const Preset& p = find_preset(preset);
        if (!*tau) embed.tau = p.tau;
        if (!*layers) embed.num_layers = p.layers;
        if (!*dim) embed.dim = p.dim;
        if (!*threshold) birch.threshold = p.threshold;
    }
};

std::vector<double> parse_taus(const std::string& s) {
    std::vector<double> taus;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            taus.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError("bad tau value '" + item + "'");
        }
    }
    return taus;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"infrared - K-agnostic graph partitioning with degree-corrected feed-forward embeddings"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

    // generate
    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "planted-partition benchmark graph");
    g->add_option("--nodes", gen.params.num_nodes, "target node count")->check(CLI::PositiveNumber);
    g->add_option("--blocks", gen.params.num_blocks, "blocks (0 = floor(N^0.35))");
    g->add_option("--heterogeneity", gen.params.block_size_heterogeneity, "block size heterogeneity");
    g->add_option("--ratio", gen.params.within_between_ratio, "within/between edge ratio");
    g->add_option("--avg-degree", gen.params.target_avg_degree, "target average degree");
    g->add_option("--degree-exponent", gen.params.degree_exponent, "power-law exponent of node weights");
    g->add_option("--degree-spread", gen.params.degree_spread, "max/min node weight");
    g->add_option("--seed", gen.params.seed, "generator seed");
    g->add_option("--out", gen.out_prefix, "output prefix (writes PREFIX.tsv, PREFIX_truth.tsv, PREFIX_manifest.json)")
        ->required();

    // partition
    PartitionOptions part;
    ModelFlags part_model;
    std::string dump_format = "binary";
    auto* p = app.add_subcommand("partition", "static partition of an edge list");
    p->add_option("--input", part.input, "edge list")->required();
    p->add_option("--truth", part.truth, "ground-truth partition");
    p->add_option("--out", part.output, "partition file")->required();
    p->add_option("--metrics", part.metrics, "metrics JSON");
    p->add_option("--dump-embeddings", part.dump_embeddings, "write the final embeddings");
    p->add_option("--format", dump_format, "embedding dump format")->check(CLI::IsMember({"text", "binary"}));
    part_model.attach(p);

    // stream
    StreamCommandOptions stream;
    ModelFlags stream_model;
    auto* s = app.add_subcommand("stream", "snowball streaming partition");
    s->add_option("--input", stream.input, "edge list")->required();
    s->add_option("--truth", stream.truth, "ground-truth partition");
    s->add_option("--records", stream.records, "per-step JSONL")->required();
    s->add_option("--summary", stream.summary, "summary JSON");
    s->add_option("--out", stream.output, "final partition file");
    s->add_option("--steps", stream.steps, "snowball steps")->check(CLI::PositiveNumber);
    s->add_option("--split-seed", stream.split_seed, "snowball seed");
    s->add_flag("--compare-static", stream.compare_static, "also run a from-scratch partition each step");
    s->add_flag("--refresh-embeddings", stream.refresh_embeddings, "predict on refreshed embeddings");
    stream_model.attach(s);

    // spectrum
    SpectrumOptions spec;
    std::string vectors;
    auto* sp = app.add_subcommand("spectrum", "eigenvalues of the degree-corrected Laplacian (small graphs)");
    sp->add_option("--input", spec.input, "edge list")->required();
    sp->add_option("--tau", spec.tau, "degree correction");
    sp->add_option("--epsilon", spec.epsilon, "degree clamp floor");
    sp->add_option("--out", spec.output, "JSON report (stdout if omitted)");
    sp->add_option("--histogram", spec.histogram, "eigenvalue histogram CSV");
    sp->add_option("--bins", spec.bins, "histogram bins")->check(CLI::PositiveNumber);
    sp->add_option("--eigenvectors", vectors, "comma-separated 0-based eigenvector indices to include");

    // ablate
    AblateOptions abl;
    ModelFlags abl_model;
    std::string taus;
    auto* a = app.add_subcommand("ablate", "sweep tau on one graph");
    a->add_option("--input", abl.input, "edge list")->required();
    a->add_option("--truth", abl.truth, "ground-truth partition")->required();
    a->add_option("--out", abl.output, "CSV")->required();
    a->add_option("--taus", taus, "comma-separated tau grid (default -100..100)");
    abl_model.attach(a);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    try {
        if (threads > 0) kernels::set_num_threads(threads);
        if (*g) {
            const auto out = run_generate(gen);
            std::cerr << "wrote " << out.edges.string() << ", " << out.truth.string() << ", "
                      << out.manifest.string() << '\n';
        } else if (*p) {
            part_model.resolve();
            part.embed = part_model.embed;
            part.birch = part_model.birch;
            part.dump_format = dump_format == "text" ? DumpFormat::Text : DumpFormat::Binary;
            run_partition(part, std::cerr);
        } else if (*s) {
            stream_model.resolve();
            stream.embed = stream_model.embed;
            stream.birch = stream_model.birch;
            run_stream(stream, std::cerr);
        } else if (*sp) {
            if (!vectors.empty()) {
                for (double v : parse_taus(vectors)) spec.eigenvectors.push_back(static_cast<int>(v));
            }
            run_spectrum(spec, std::cout);
        } else if (*a) {
            abl_model.resolve();
            abl.embed = abl_model.embed;
            abl.birch = abl_model.birch;
            if (!taus.empty()) abl.taus = parse_taus(taus);
            run_ablate(abl, std::cerr);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const StateError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return kOk;
}
