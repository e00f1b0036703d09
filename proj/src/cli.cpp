// SPDX-License-Identifier: Apache-2.0
#include "faceset/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "faceset/curator.hpp"
#include "faceset/emb_io.hpp"
#include "faceset/error.hpp"
#include "faceset/manifest.hpp"
#include "faceset/metrics.hpp"
#include "faceset/report.hpp"

namespace faceset::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct EvalArgs {
    std::string probs;
    std::string embeddings;
    std::string reference;
    std::string faces;
    std::string reference_faces;
    std::size_t splits = metrics::kDefaultSplits;
    double threshold = metrics::kDefaultMatchThreshold;
    std::string out;
    std::uint64_t seed = 0;
    CLI::Option* splits_opt = nullptr;
    CLI::Option* threshold_opt = nullptr;
};

struct CurateArgs {
    std::string embeddings;
    std::size_t k = 0;
    std::string manifest;
    std::string copy_to;
    std::string out;
    std::uint64_t seed = 0;
};

struct IngestArgs {
    std::string manifest;
    std::string images;
    std::string records;
    std::size_t size = 256;
    std::string resample = "bilinear";
    std::string out;
};

struct PassesArgs {
    std::uint64_t total = 0;
    std::uint64_t dataset = 0;
    std::string out;
};

void emit(const json& doc, const std::string& out_path, std::ostream& out) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::trunc);
    file << text;
    file.close();
    if (!file) throw Error(ErrorCode::IoError, "cannot write report to '" + out_path + "'");
}

report::InputRecord describe(const std::string& role, const fs::path& path, std::size_t rows, std::size_t cols,
                             std::size_t valid) {
    return {role, path, report::sha256_file(path), rows, cols, valid};
}

int run_eval(const EvalArgs& args, std::ostream& out) {
    if (args.probs.empty() && args.embeddings.empty() && args.faces.empty()) {
        throw Error(ErrorCode::InvalidInput, "eval needs at least one of --probs, --embeddings, --faces");
    }
    if (!args.reference.empty() && args.embeddings.empty()) {
        throw Error(ErrorCode::InvalidInput, "--reference requires --embeddings");
    }
    if (!args.reference_faces.empty() && args.faces.empty() && args.embeddings.empty()) {
        throw Error(ErrorCode::InvalidInput, "--reference-faces requires --faces or --embeddings");
    }

    report::EvalReport rep;
    rep.defaults.splits = args.splits;
    rep.defaults.splits_defaulted = args.splits_opt->count() == 0;
    rep.defaults.threshold = args.threshold;
    rep.defaults.threshold_defaulted = args.threshold_opt->count() == 0;

    // Load everything before computing so input errors surface first.
    std::optional<ClassProbabilitySet> probs;
    std::optional<EmbeddingSet> embeddings, reference, faces, reference_faces;
    auto load_features = [&](const std::string& role, const std::string& path, std::optional<EmbeddingSet>& slot) {
        if (path.empty()) return;
        slot = ingest::read_embeddings(path);
        rep.inputs.push_back(describe(role, path, slot->rows(), slot->dim(), slot->valid_count()));
        spdlog::info("loaded {} '{}': {} x {} ({} valid)", role, path, slot->rows(), slot->dim(), slot->valid_count());
    };
    if (!args.probs.empty()) {
        probs = ingest::read_probabilities(args.probs);
        rep.inputs.push_back(describe("probs", args.probs, probs->rows(), probs->classes(), probs->rows()));
        spdlog::info("loaded probs '{}': {} x {}", args.probs, probs->rows(), probs->classes());
    }
    load_features("embeddings", args.embeddings, embeddings);
    load_features("reference", args.reference, reference);
    load_features("faces", args.faces, faces);
    load_features("reference_faces", args.reference_faces, reference_faces);

    if (probs) rep.inception = metrics::inception_score(*probs, args.splits);
    if (embeddings && reference) {
        rep.fid = metrics::fid(*reference, *embeddings);
        rep.defaults.regularization_fired = rep.fid->regularized;
        if (rep.fid->regularized) spdlog::info("FID covariances needed epsilon regularization");
    }
    const EmbeddingSet* face_set = faces ? &*faces : embeddings ? &*embeddings : nullptr;
    const EmbeddingSet* face_reference = reference_faces ? &*reference_faces : reference ? &*reference : nullptr;
    if (face_set) rep.variability = metrics::pairwise_variability(*face_set);
    if (face_set && face_reference) rep.match = metrics::match_classify(*face_set, *face_reference, args.threshold);

    emit(report::to_json(rep), args.out, out);
    return kExitOk;
}

int run_curate(const CurateArgs& args, std::ostream& out) {
    if (!args.copy_to.empty() && args.manifest.empty()) {
        throw Error(ErrorCode::InvalidInput, "--copy-to requires --manifest");
    }
    const EmbeddingSet pool = ingest::read_embeddings(args.embeddings);
    std::optional<ingest::DatasetManifest> manifest;
    if (!args.manifest.empty()) manifest = ingest::load_manifest(args.manifest);

    const curator::CurationResult result = curator::curate_subset(pool, args.k);

    json copied = json::array();
    if (!args.copy_to.empty()) {
        for (const auto& id : result.selected_ids) {
            if (!manifest->find(id)) {
                throw Error(ErrorCode::InvalidInput, "selected id '" + id + "' is not in the manifest");
            }
        }
        std::error_code ec;
        fs::create_directories(args.copy_to, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create '" + args.copy_to + "'");
        for (const auto& id : result.selected_ids) {
            const auto* entry = manifest->find(id);
            const fs::path target = fs::path(args.copy_to) / (id + entry->source_path.extension().string());
            fs::copy_file(entry->source_path, target, fs::copy_options::overwrite_existing, ec);
            if (ec) {
                throw Error(ErrorCode::IoError, "cannot copy '" + entry->source_path.string() + "': " + ec.message());
            }
            copied.push_back(target.generic_string());
        }
    }

    json doc = report::to_json(result);
    doc["tool_version"] = std::string(report::tool_version());
    doc["k"] = args.k;
    doc["inputs"] = {{"embeddings", report::to_json(describe("embeddings", args.embeddings, pool.rows(),
                                                              pool.dim(), pool.valid_count()))}};
    doc["copied"] = std::move(copied);
    emit(doc, args.out, out);
    return kExitOk;
}

int run_ingest(const IngestArgs& args, std::ostream& out, std::ostream& err) {
    if (args.images.empty() && args.records.empty()) {
        throw Error(ErrorCode::InvalidInput, "ingest needs --images DIR and/or --records FILE");
    }
    const ingest::DatasetManifest manifest = ingest::load_manifest(args.manifest);
    ingest::IngestOptions options;
    options.size = args.size;
    options.resample = ingest::parse_resample(args.resample);
    if (!args.images.empty()) options.image_dir = args.images;
    if (!args.records.empty()) options.records_path = args.records;

    const ingest::IngestSummary summary = ingest::run_ingest(manifest, options);
    for (const auto& f : summary.failures) err << "ingest: " << f.id << ": " << f.message << "\n";
    if (summary.total > 0 && summary.produced == 0) {
        err << "ingest: every entry failed\n";
        return kExitInputError;
    }

    json doc = report::to_json(summary);
    doc["tool_version"] = std::string(report::tool_version());
    doc["size"] = args.size;
    doc["resample"] = args.resample;
    doc["images"] = args.images.empty() ? json(nullptr) : json(args.images);
    doc["records"] = args.records.empty() ? json(nullptr) : json(args.records);
    emit(doc, args.out, out);
    return kExitOk;
}

int run_passes(const PassesArgs& args, std::ostream& out) {
    const double passes = report::training_passes(args.total, args.dataset);
    emit({{"total_images", args.total}, {"dataset_size", args.dataset}, {"passes", passes}}, args.out, out);
    return kExitOk;
}

}  // namespace

void configure_logging() {
    auto logger = spdlog::get("faceset");
    if (!logger) {
        logger = spdlog::stderr_color_mt("faceset");
        logger->set_pattern("[%l] %v");
    }
    spdlog::set_default_logger(logger);

    spdlog::level::level_enum level = spdlog::level::err;
    if (const char* env = std::getenv("FACESET_LOG")) {
        const std::string value = env;
        if (value == "debug") {
            level = spdlog::level::debug;
        } else if (value == "info") {
            level = spdlog::level::info;
        } else if (value != "error") {
            spdlog::error("unknown FACESET_LOG value '{}', using 'error'", value);
        }
    }
    spdlog::set_level(level);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Evaluate, curate and prepare generated face-image datasets", "faceset"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(report::tool_version()));

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Compute IS, FID, pairwise variability and match counts");
    eval_cmd->add_option("--probs", eval.probs, "EMB1 class-probability file (kind 1)")->check(CLI::ExistingFile);
    eval_cmd->add_option("--embeddings", eval.embeddings, "EMB1 features of the generated set");
    eval_cmd->add_option("--reference", eval.reference, "EMB1 features of the reference set");
    eval_cmd->add_option("--faces", eval.faces, "EMB1 face embeddings of the generated set (default: --embeddings)");
    eval_cmd->add_option("--reference-faces", eval.reference_faces,
                         "EMB1 face embeddings of the reference set (default: --reference)");
    eval.splits_opt = eval_cmd->add_option("--splits", eval.splits, "Inception Score splits")->capture_default_str();
    eval.threshold_opt =
        eval_cmd->add_option("--threshold", eval.threshold, "Match distance threshold")->capture_default_str();
    eval_cmd->add_option("--out", eval.out, "Write the report here instead of stdout");
    eval_cmd->add_option("--seed", eval.seed, "Reserved");

    CurateArgs curate;
    auto* curate_cmd = app.add_subcommand("curate", "Select k maximally varied rows from a pool");
    curate_cmd->add_option("--embeddings", curate.embeddings, "EMB1 pool embeddings")->required();
    curate_cmd->add_option("--k", curate.k, "Subset size")->required();
    curate_cmd->add_option("--manifest", curate.manifest, "Manifest mapping ids to images");
    curate_cmd->add_option("--copy-to", curate.copy_to, "Copy the selected images into this directory");
    curate_cmd->add_option("--out", curate.out, "Write the result here instead of stdout");
    curate_cmd->add_option("--seed", curate.seed, "Reserved");

    IngestArgs ingest_args;
    auto* ingest_cmd = app.add_subcommand("ingest", "Crop and resize manifest entries into images/records");
    ingest_cmd->add_option("--manifest", ingest_args.manifest, "Dataset manifest JSON")->required();
    ingest_cmd->add_option("--images", ingest_args.images, "Directory for <id>.png outputs");
    ingest_cmd->add_option("--records", ingest_args.records, "FSRC record file of PNG payloads");
    ingest_cmd->add_option("--size", ingest_args.size, "Output edge length in pixels")->capture_default_str();
    ingest_cmd->add_option("--resample", ingest_args.resample, "nearest | bilinear")
        ->check(CLI::IsMember({"nearest", "bilinear"}))
        ->capture_default_str();
    ingest_cmd->add_option("--out", ingest_args.out, "Write the summary here instead of stdout");

    PassesArgs passes;
    auto* passes_cmd = app.add_subcommand("passes", "Dataset passes implied by a training image budget");
    passes_cmd->add_option("--total", passes.total, "Total training images shown")->required();
    passes_cmd->add_option("--dataset", passes.dataset, "Dataset size")->required();
    passes_cmd->add_option("--out", passes.out, "Write the result here instead of stdout");

    std::vector<const char*> argv{"faceset"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*eval_cmd) return run_eval(eval, out);
        if (*curate_cmd) return run_curate(curate, out);
        if (*ingest_cmd) return run_ingest(ingest_args, out, err);
        if (*passes_cmd) return run_passes(passes, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_numeric_failure(e.code()) ? kExitNumericFailure : kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace faceset::cli
