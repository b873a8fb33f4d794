// Command-line front end: synthesize datasets, run the preprocessing and
// feature stages on single images, enroll galleries, train the score-fusion
// model, identify queries and run full evaluations.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "sigid/persist.hpp"
#include "sigid/workbench.hpp"

namespace {

using namespace sigid;

struct ConfigCli {
    std::string config_path;

    // flag overrides; only applied when the user passed them
    std::optional<int> target_height;
    std::optional<double> hpr_factor;
    std::optional<int> empirical_k;
    std::optional<std::string> cov_model;
    std::optional<double> shrink_factor;
    std::optional<double> svm_c;
    std::optional<double> svm_tol;
    std::optional<int> max_passes;
    std::optional<int> neg_ratio;
    std::optional<std::uint64_t> seed;
    std::optional<int> subjects;
    std::optional<int> genuine;
    std::optional<int> forgeries;
    std::optional<int> enroll_count;
    std::optional<int> canvas_width;
    std::optional<int> canvas_height;

    void add_common(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file overriding defaults")
            ->check(CLI::ExistingFile);
        cmd->add_option("--target-height", target_height, "normalized frame height");
        cmd->add_option("--hpr-factor", hpr_factor, "high-pressure threshold factor in (0,1)");
        cmd->add_option("--k", empirical_k, "empirical-rule band width (1, 2 or 3)");
        cmd->add_option("--cov-model", cov_model, "matcher covariance model")
            ->check(CLI::IsMember({"diagonal", "shrunk_full"}));
        cmd->add_option("--shrink-factor", shrink_factor, "covariance shrinkage factor");
        cmd->add_option("--svm-C", svm_c, "SVM box constraint");
        cmd->add_option("--svm-tol", svm_tol, "SVM KKT tolerance");
        cmd->add_option("--max-passes", max_passes, "SVM optimization pass limit");
        cmd->add_option("--neg-ratio", neg_ratio, "impostor samples per genuine sample");
        cmd->add_option("--seed", seed, "master seed (generator and training)");
    }

    void add_synth(CLI::App* cmd) {
        cmd->add_option("--subjects", subjects, "number of subjects");
        cmd->add_option("--genuine", genuine, "genuine samples per subject");
        cmd->add_option("--forgeries", forgeries, "forgeries per subject");
        cmd->add_option("--enroll", enroll_count, "genuine samples used for enrollment");
        cmd->add_option("--canvas-width", canvas_width, "rendered image width");
        cmd->add_option("--canvas-height", canvas_height, "rendered image height");
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (target_height) cfg.preprocess.target_height = *target_height;
        if (hpr_factor) cfg.preprocess.hpr_factor = *hpr_factor;
        if (empirical_k) cfg.matcher.empirical_k = *empirical_k;
        if (cov_model)
            cfg.matcher.cov_model =
                *cov_model == "shrunk_full" ? CovModel::shrunk_full : CovModel::diagonal;
        if (shrink_factor) cfg.matcher.shrink_factor = *shrink_factor;
        if (svm_c) cfg.svm.C = *svm_c;
        if (svm_tol) cfg.svm.tol = *svm_tol;
        if (max_passes) cfg.svm.max_passes = *max_passes;
        if (neg_ratio) cfg.training.neg_ratio = *neg_ratio;
        if (seed) cfg.set_seed(*seed);
        if (subjects) cfg.synth.subjects = *subjects;
        if (genuine) cfg.synth.genuine_per_subject = *genuine;
        if (forgeries) cfg.synth.forgeries_per_subject = *forgeries;
        if (enroll_count) cfg.synth.enroll_per_subject = *enroll_count;
        if (canvas_width) cfg.synth.canvas_width = *canvas_width;
        if (canvas_height) cfg.synth.canvas_height = *canvas_height;

        // every run logs the fully resolved configuration
        std::string line = serialize_config(cfg);
        for (auto& c : line)
            if (c == '\n') c = ' ';
        std::clog << "sigid: resolved config: " << line << "\n";
        return cfg;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"offline signature identification workbench"};
    app.require_subcommand(1);
    ConfigCli cli;

    std::string out_dir, input_path, output_path, manifest_path, gallery_path, model_path,
        subject_label;
    int top_n = 0;

    auto* synth = app.add_subcommand("synth", "render a synthetic signature dataset");
    synth->add_option("--out", out_dir, "output dataset directory")->required();
    cli.add_common(synth);
    cli.add_synth(synth);

    auto* prep = app.add_subcommand("preprocess", "emit the four per-signature views");
    prep->add_option("--input", input_path, "input PGM image")
        ->required()
        ->check(CLI::ExistingFile);
    prep->add_option("--outdir", out_dir, "directory for the view images")->required();
    cli.add_common(prep);

    auto* extract_cmd = app.add_subcommand("extract", "write feature vectors as CSV");
    extract_cmd->add_option("--manifest", manifest_path, "dataset manifest JSON")
        ->check(CLI::ExistingFile);
    extract_cmd->add_option("--input", input_path, "single input PGM image")
        ->check(CLI::ExistingFile);
    extract_cmd->add_option("--subject", subject_label, "subject id for --input rows");
    extract_cmd->add_option("--output", output_path, "output CSV path")->required();
    cli.add_common(extract_cmd);

    auto* enroll_cmd = app.add_subcommand("enroll", "fit per-subject statistics");
    enroll_cmd->add_option("--manifest", manifest_path, "dataset manifest JSON")
        ->required()
        ->check(CLI::ExistingFile);
    enroll_cmd->add_option("--output", output_path, "gallery JSON path")->required();
    cli.add_common(enroll_cmd);

    auto* train_cmd = app.add_subcommand("train", "train the score-fusion model");
    train_cmd->add_option("--manifest", manifest_path, "dataset manifest JSON")
        ->required()
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--gallery", gallery_path, "enrolled gallery JSON")
        ->required()
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--output", output_path, "model JSON path")->required();
    cli.add_common(train_cmd);

    auto* identify_cmd = app.add_subcommand("identify", "rank subjects for one query image");
    identify_cmd->add_option("--gallery", gallery_path, "enrolled gallery JSON")
        ->required()
        ->check(CLI::ExistingFile);
    identify_cmd->add_option("--model", model_path, "fusion model JSON")
        ->required()
        ->check(CLI::ExistingFile);
    identify_cmd->add_option("--input", input_path, "query PGM image")
        ->required()
        ->check(CLI::ExistingFile);
    identify_cmd->add_option("--top", top_n, "print only the best N subjects");
    cli.add_common(identify_cmd);

    auto* eval_cmd = app.add_subcommand("evaluate", "full identification report and curves");
    eval_cmd->add_option("--manifest", manifest_path, "dataset manifest JSON")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--gallery", gallery_path, "enrolled gallery JSON")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--model", model_path, "fusion model JSON")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--outdir", out_dir, "directory for report and curves")->required();
    cli.add_common(eval_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (synth->parsed()) {
        const RunConfig cfg = cli.resolve();
        const DatasetManifest manifest = synth_dataset(out_dir, cfg.synth);
        save_manifest(manifest, std::filesystem::path(out_dir) / "manifest.json");
        save_config(cfg, std::filesystem::path(out_dir) / "run-config.json");
        std::printf("synthesized %d subjects under %s\n", cfg.synth.subjects, out_dir.c_str());
        return 0;
    }

    if (prep->parsed()) {
        const RunConfig cfg = cli.resolve();
        const SignatureViews views = preprocess(read_pgm(input_path), cfg.preprocess);
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        write_pgm(views.gray, dir / "gray.pgm");
        write_pgm(views.binary, dir / "binary.pgm");
        write_pgm(views.thinned, dir / "thinned.pgm");
        write_pgm(views.hpr, dir / "hpr.pgm");
        save_config(cfg, dir / "run-config.json");
        std::printf("wrote views to %s\n", out_dir.c_str());
        return 0;
    }

    if (extract_cmd->parsed()) {
        const RunConfig cfg = cli.resolve();
        std::vector<std::pair<std::string, FeatureVector>> rows;
        if (!manifest_path.empty()) {
            const DatasetManifest manifest = load_manifest(manifest_path);
            for (const auto& subject : manifest.subjects) {
                for (const auto* list : {&subject.genuine, &subject.forgery}) {
                    for (const auto& rel : *list)
                        rows.emplace_back(subject.id,
                                          features_from_file(manifest.resolve(rel),
                                                             cfg.preprocess, cfg.features));
                }
            }
        } else if (!input_path.empty()) {
            const std::string id = subject_label.empty()
                                       ? std::filesystem::path(input_path).stem().string()
                                       : subject_label;
            rows.emplace_back(id,
                              features_from_file(input_path, cfg.preprocess, cfg.features));
        } else {
            std::cerr << "error: extract needs --manifest or --input\n";
            return 2;
        }
        write_features_csv(rows, output_path);
        std::printf("wrote %zu feature rows to %s\n", rows.size(), output_path.c_str());
        return 0;
    }

    if (enroll_cmd->parsed()) {
        const RunConfig cfg = cli.resolve();
        const DatasetManifest manifest = load_manifest(manifest_path);
        const FeatureTable features =
            extract_dataset_features(manifest, cfg.preprocess, cfg.features);
        const Gallery gallery = enroll_gallery(features, cfg.matcher);
        save_gallery(gallery, output_path);
        save_config(cfg, std::filesystem::path(output_path).replace_extension(
                             ".run-config.json"));
        std::printf("enrolled %zu subjects into %s\n", gallery.size(), output_path.c_str());
        return 0;
    }

    if (train_cmd->parsed()) {
        const RunConfig cfg = cli.resolve();
        const DatasetManifest manifest = load_manifest(manifest_path);
        const Gallery gallery = load_gallery(gallery_path);
        const FeatureTable features =
            extract_dataset_features(manifest, cfg.preprocess, cfg.features);
        const auto samples = build_training_samples(features, gallery, gallery.cfg,
                                                    cfg.training.neg_ratio, cfg.svm.seed);
        const SvmModel model = train(samples, cfg.svm);
        save_model(model, output_path);
        save_config(cfg, std::filesystem::path(output_path).replace_extension(
                             ".run-config.json"));
        std::printf("trained on %zu samples, %zu support vectors, %s\n", samples.size(),
                    model.sv_count(), model.converged ? "converged" : "NOT converged");
        return 0;
    }

    if (identify_cmd->parsed()) {
        const RunConfig cfg = cli.resolve();
        const Gallery gallery = load_gallery(gallery_path);
        const SvmModel model = load_model(model_path);
        const FeatureVector query =
            features_from_file(input_path, cfg.preprocess, cfg.features);
        const RankedList ranked = identify(gallery, model, query);
        const std::size_t limit =
            top_n > 0 ? std::min<std::size_t>(top_n, ranked.size()) : ranked.size();
        for (std::size_t i = 0; i < limit; ++i)
            std::printf("%4zu  %-12s  %.6f\n", i + 1, ranked[i].subject.c_str(),
                        ranked[i].score);
        return 0;
    }

    if (eval_cmd->parsed()) {
        const RunConfig cfg = cli.resolve();
        const DatasetManifest manifest = load_manifest(manifest_path);
        const Gallery gallery = load_gallery(gallery_path);
        const SvmModel model = load_model(model_path);
        const FeatureTable features =
            extract_dataset_features(manifest, cfg.preprocess, cfg.features);
        const Report report = evaluate_dataset(gallery, model, features);
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        save_report(report, cfg, dir / "report.json");
        write_cmc_csv(report, dir / "cmc.csv");
        write_cmc_svg(report, dir / "cmc.svg");
        std::printf("rank-1: fused %.4f, euclidean %.4f, mahalanobis %.4f, empirical %.4f\n",
                    report.rank1_fused, report.rank1_ed, report.rank1_md, report.rank1_ge);
        if (report.forgery_present)
            std::printf("forgery targeted-rank-1 rate: %.4f over %d queries\n",
                        report.forgery_rank1_hit_rate, report.n_forgery);
        std::printf("wrote report.json, cmc.csv, cmc.svg to %s\n", out_dir.c_str());
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const sigid::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == sigid::Errc::io_failure ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
