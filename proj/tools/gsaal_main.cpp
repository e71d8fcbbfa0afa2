// Command-line front end: dataset generation, training, scoring, evaluation,
// benchmarking and grid export, wired for reproducible seeded runs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gsaal/baselines.hpp"
#include "gsaal/csv.hpp"
#include "gsaal/datagen.hpp"
#include "gsaal/errors.hpp"
#include "gsaal/eval.hpp"
#include "gsaal/gsaal.hpp"
#include "gsaal/subspace.hpp"

namespace {

using namespace gsaal;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitTraining = 4;

struct FitArgs {
    std::string data_path;
    std::string model_path;
    std::string trace_path;
    std::size_t k = 0;  // 0 -> default_k(d)
    TrainConfig cfg;
};

Matrix load_features(const std::string& path) {
    return read_csv(path).values;
}

TrainConfig* add_train_flags(CLI::App* cmd, TrainConfig& cfg) {
    cmd->add_option("--epochs", cfg.epochs, "training epochs")->capture_default_str();
    cmd->add_option("--stop-epoch", cfg.stop_epoch,
                    "epochs with generator updates (-1: 80% of epochs)")
        ->capture_default_str();
    cmd->add_option("--detector-lr", cfg.detector_lr, "detector learning rate")
        ->capture_default_str();
    cmd->add_option("--generator-lr", cfg.generator_lr, "generator learning rate")
        ->capture_default_str();
    cmd->add_option("--batch-size", cfg.batch_size, "minibatch size (capped at n)")
        ->capture_default_str();
    cmd->add_option("--tol", cfg.early_stop_tol, "early-stop band around ln 2")
        ->capture_default_str();
    cmd->add_option("--patience", cfg.early_stop_patience, "early-stop patience in epochs")
        ->capture_default_str();
    return &cfg;
}

void write_trace_csv(const std::string& path, const TrainTrace& trace) {
    if (trace.epochs.empty()) return;
    const std::size_t k = trace.epochs.front().detector_losses.size();
    std::vector<std::string> columns = {"epoch", "phase", "generator_loss"};
    for (std::size_t j = 0; j < k; ++j) columns.push_back("det" + std::to_string(j) + "_loss");
    for (std::size_t j = 0; j < k; ++j) columns.push_back("det" + std::to_string(j) + "_frozen");
    Matrix table(trace.epochs.size(), columns.size());
    for (std::size_t e = 0; e < trace.epochs.size(); ++e) {
        const EpochRecord& rec = trace.epochs[e];
        table(e, 0) = static_cast<double>(e);
        table(e, 1) = rec.phase == TrainPhase::Joint ? 0.0 : 1.0;
        table(e, 2) = rec.generator_loss;
        for (std::size_t j = 0; j < k; ++j) table(e, 3 + j) = rec.detector_losses[j];
        for (std::size_t j = 0; j < k; ++j) {
            table(e, 3 + k + j) = rec.detectors_frozen[j] ? 1.0 : 0.0;
        }
    }
    write_csv(path, columns, table);
}

int run_fit(const FitArgs& args) {
    const Matrix data = load_features(args.data_path);
    const std::size_t k = args.k == 0 ? default_k(data.cols) : args.k;
    const MaskSet masks = draw_masks(data.cols, k, args.cfg.seed);
    auto [model, trace] = fit(data, masks, args.cfg);
    save_model(model, args.model_path);
    if (!args.trace_path.empty()) write_trace_csv(args.trace_path, trace);
    std::printf("fitted %zu detectors on %zu rows x %zu features, %zu epochs run\n", k,
                data.rows, data.cols, trace.epochs.size());
    std::printf("model written to %s\n", args.model_path.c_str());
    return 0;
}

std::string shape_column_summary(const LabeledDataset& ds, const std::string& path) {
    return std::to_string(ds.points.rows) + " rows, " + std::to_string(ds.points.cols) +
           " feature columns -> " + path;
}

int run_eval(const std::string& data_path, std::size_t k, const TrainConfig& cfg,
             double train_fraction, const std::vector<std::string>& baselines,
             const std::string& report_path) {
    const CsvTable table = read_csv(data_path);
    if (!table.has_labels) {
        throw ParseError("eval: " + data_path + " has no trailing 'label' column");
    }
    LabeledDataset data;
    data.points = table.values;
    data.labels = table.labels;
    data.feature_names = table.columns;

    const OccSplit split = occ_split(data, train_fraction, cfg.seed);
    std::vector<std::pair<std::string, double>> rows;

    const std::size_t k_used = k == 0 ? default_k(split.train.cols) : k;
    const MaskSet masks = draw_masks(split.train.cols, k_used, cfg.seed);
    auto [model, trace] = fit(split.train, masks, cfg);
    rows.emplace_back("gsaal", roc_auc(score(model, split.test_points), split.test_labels));

    for (const std::string& name : baselines) {
        if (name == "knn") {
            const KnnModel knn = fit_knn(split.train);
            rows.emplace_back("knn", roc_auc(knn_score(knn, split.test_points), split.test_labels));
        } else if (name == "lof") {
            const LofModel lof = fit_lof(split.train);
            rows.emplace_back("lof", roc_auc(lof_score(lof, split.test_points), split.test_labels));
        } else {
            throw ConfigError("eval: unknown baseline '" + name + "' (use knn,lof)");
        }
    }

    std::printf("method,auc\n");
    for (const auto& [name, auc] : rows) std::printf("%s,%s\n", name.c_str(), format_double(auc).c_str());

    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) throw IoError("eval: cannot open " + report_path);
        const std::string dataset = std::filesystem::path(data_path).stem().string();
        out << "dataset,method,auc,seed\n";
        for (const auto& [name, auc] : rows) {
            out << dataset << ',' << name << ',' << format_double(auc) << ',' << cfg.seed << '\n';
        }
    }
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"GSAAL: generative subspace adversarial active learning for outlier detection"};
    app.require_subcommand(1);
    app.fallthrough();  // global options remain valid after the subcommand name
    app.set_config("--config");

    std::uint64_t seed = 42;
    app.add_option("--seed", seed, "global random seed")->envname("GSAAL_SEED")
        ->capture_default_str();

    // generate
    auto* generate = app.add_subcommand("generate", "write a synthetic shape dataset CSV");
    std::string shape_name;
    ShapeSpec shape_spec;
    std::string out_path;
    const std::map<std::string, Shape> shape_names{{"banana", Shape::Banana},
                                                   {"spiral", Shape::Spiral},
                                                   {"star", Shape::Star},
                                                   {"circle", Shape::Circle},
                                                   {"l", Shape::L}};
    generate->add_option("--shape", shape_name, "banana|spiral|star|circle|l")
        ->required()
        ->check(CLI::IsMember(shape_names, CLI::ignore_case));
    generate->add_option("--n", shape_spec.n_points, "number of points")->capture_default_str();
    generate->add_option("--noise-features", shape_spec.noise_features,
                         "independent Gaussian features appended")
        ->capture_default_str();
    generate->add_option("--noise-amplitude", shape_spec.noise_amplitude,
                         "amplitude of the on-curve uniform noise")
        ->capture_default_str();
    generate->add_option("--out", out_path, "output CSV path")->required();

    // generate-ia
    auto* genia = app.add_subcommand("generate-ia",
                                     "write train/test CSVs with assumption-driven outliers");
    IaSpec ia_spec;
    std::string ia_dir;
    std::string family_name = "gaussian";
    std::string outlier_name = "cluster";
    const std::map<std::string, InlierFamily> family_names{
        {"gaussian", InlierFamily::Gaussian},
        {"mixture", InlierFamily::GaussianMixture},
        {"uniform", InlierFamily::UniformBox},
        {"ring", InlierFamily::Ring}};
    const std::map<std::string, OutlierType> outlier_names{{"local", OutlierType::Local},
                                                           {"cluster", OutlierType::Cluster}};
    genia->add_option("--inliers", family_name, "gaussian|mixture|uniform|ring")
        ->check(CLI::IsMember(family_names, CLI::ignore_case))
        ->capture_default_str();
    genia->add_option("--outlier-type", outlier_name, "local|cluster")
        ->check(CLI::IsMember(outlier_names, CLI::ignore_case))
        ->capture_default_str();
    genia->add_option("--n-inliers", ia_spec.n_inliers)->capture_default_str();
    genia->add_option("--n-outliers", ia_spec.n_outliers)->capture_default_str();
    genia->add_option("--d", ia_spec.d)->capture_default_str();
    genia->add_option("--shift", ia_spec.cluster_shift, "cluster mean offset")
        ->capture_default_str();
    genia->add_option("--points-per-cluster", ia_spec.points_per_cluster)->capture_default_str();
    genia->add_option("--lof-threshold", ia_spec.lof_threshold)->capture_default_str();
    genia->add_option("--out-dir", ia_dir, "directory for train.csv and test_XX.csv")->required();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "train a model on a feature CSV");
    FitArgs fit_args;
    fit_cmd->add_option("--data", fit_args.data_path, "training CSV")->required();
    fit_cmd->add_option("--model", fit_args.model_path, "output model JSON")->required();
    fit_cmd->add_option("--trace", fit_args.trace_path, "optional per-epoch loss CSV");
    auto* k_opt = fit_cmd->add_option("--k", fit_args.k, "number of detectors");
    fit_cmd->add_flag("--k-default", "use ceil(2*sqrt(d)) detectors")->excludes(k_opt);
    add_train_flags(fit_cmd, fit_args.cfg);

    // score
    auto* score_cmd = app.add_subcommand("score", "score a feature CSV with a trained model");
    std::string score_model, score_data, score_out;
    score_cmd->add_option("--model", score_model, "model JSON")->required();
    score_cmd->add_option("--data", score_data, "feature CSV")->required();
    score_cmd->add_option("--out", score_out, "output CSV with a score column")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "one-class train/test evaluation with AUC");
    std::string eval_data, eval_report;
    std::size_t eval_k = 0;
    double train_fraction = 0.8;
    std::vector<std::string> eval_baselines;
    TrainConfig eval_cfg;
    eval_cmd->add_option("--data", eval_data, "labeled CSV (trailing 'label' column)")->required();
    eval_cmd->add_option("--k", eval_k, "detectors (0: ceil(2*sqrt(d)))")->capture_default_str();
    eval_cmd->add_option("--train-fraction", train_fraction)->capture_default_str();
    eval_cmd->add_option("--baselines", eval_baselines, "comma list from knn,lof")->delimiter(',');
    eval_cmd->add_option("--report", eval_report, "optional report CSV");
    add_train_flags(eval_cmd, eval_cfg);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "inference-time scalability sweeps");
    std::vector<std::size_t> n_sweep, d_sweep;
    std::size_t bench_k = 30;
    std::size_t n_test = 10000;
    std::string bench_out;
    TrainConfig bench_cfg;
    bench_cfg.epochs = 10;
    bench_cmd->add_option("--n-sweep", n_sweep, "training sizes (d fixed at 100)")->delimiter(',');
    bench_cmd->add_option("--d-sweep", d_sweep, "dimensions (n fixed at 500)")->delimiter(',');
    bench_cmd->add_option("--k", bench_k, "detectors")->capture_default_str();
    bench_cmd->add_option("--n-test", n_test, "points scored per cell")->capture_default_str();
    bench_cmd->add_option("--epochs", bench_cfg.epochs, "epochs per cell fit")
        ->capture_default_str();
    bench_cmd->add_option("--out", bench_out, "timing CSV")->required();

    // grid
    auto* grid_cmd = app.add_subcommand("grid", "export x1-x2 level-curve scores");
    std::string grid_model, grid_out;
    GridBounds bounds;
    std::size_t resolution = 100;
    grid_cmd->add_option("--model", grid_model, "model JSON")->required();
    grid_cmd->add_option("--x1-min", bounds.x1_min)->capture_default_str();
    grid_cmd->add_option("--x1-max", bounds.x1_max)->capture_default_str();
    grid_cmd->add_option("--x2-min", bounds.x2_min)->capture_default_str();
    grid_cmd->add_option("--x2-max", bounds.x2_max)->capture_default_str();
    grid_cmd->add_option("--resolution", resolution, "grid cells per axis")
        ->capture_default_str();
    grid_cmd->add_option("--out", grid_out, "output CSV")->required();

    // mmd
    auto* mmd_cmd = app.add_subcommand("mmd", "linear-kernel MMD^2 between two samples");
    std::string mmd_a, mmd_b;
    bool mmd_example = false;
    std::size_t mmd_n = 2000;
    auto* a_opt = mmd_cmd->add_option("--a", mmd_a, "first feature CSV");
    auto* b_opt = mmd_cmd->add_option("--b", mmd_b, "second feature CSV");
    mmd_cmd->add_flag("--example", mmd_example,
                      "run the built-in myopicity comparison instead of reading files")
        ->excludes(a_opt)
        ->excludes(b_opt);
    mmd_cmd->add_option("--n", mmd_n, "sample size for --example")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : kExitUsage;
    }

    if (generate->parsed()) {
        shape_spec.shape = shape_names.at(CLI::detail::to_lower(shape_name));
        shape_spec.seed = seed;
        const LabeledDataset ds = generate_shape(shape_spec);
        write_csv(out_path, ds.feature_names, ds.points, &ds.labels);
        std::printf("%s\n", shape_column_summary(ds, out_path).c_str());
        return 0;
    }
    if (genia->parsed()) {
        ia_spec.inlier_distribution = family_names.at(CLI::detail::to_lower(family_name));
        ia_spec.outlier_type = outlier_names.at(CLI::detail::to_lower(outlier_name));
        ia_spec.seed = seed;
        const IaReference ref = ia_spec.outlier_type == OutlierType::Local
                                    ? IaReference::Lof
                                    : IaReference::ClusterShift;
        const IaDataset ds = generate_ia_dataset(ia_spec, ref);
        for (const std::string& w : ds.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
        std::filesystem::create_directories(ia_dir);
        std::vector<std::string> names;
        for (std::size_t j = 0; j < ds.train.cols; ++j) names.push_back("x" + std::to_string(j + 1));
        write_csv(ia_dir + "/train.csv", names, ds.train);
        for (std::size_t t = 0; t < ds.tests.size(); ++t) {
            char file[32];
            std::snprintf(file, sizeof(file), "/test_%02zu.csv", t + 1);
            write_csv(ia_dir + file, ds.tests[t].feature_names, ds.tests[t].points,
                      &ds.tests[t].labels);
        }
        std::printf("%zu train rows, %zu test splits -> %s\n", ds.train.rows, ds.tests.size(),
                    ia_dir.c_str());
        return 0;
    }
    if (fit_cmd->parsed()) {
        fit_args.cfg.seed = seed;
        return run_fit(fit_args);
    }
    if (score_cmd->parsed()) {
        const GsaalModel model = load_model(score_model);
        const Matrix data = load_features(score_data);
        const std::vector<double> s = score(model, data);
        Matrix column(s.size(), 1);
        column.data = s;
        write_csv(score_out, {"score"}, column);
        std::printf("%zu scores -> %s\n", s.size(), score_out.c_str());
        return 0;
    }
    if (eval_cmd->parsed()) {
        eval_cfg.seed = seed;
        return run_eval(eval_data, eval_k, eval_cfg, train_fraction, eval_baselines, eval_report);
    }
    if (bench_cmd->parsed()) {
        bench_cfg.seed = seed;
        const std::vector<TimingRow> rows =
            scalability_run(n_sweep, d_sweep, bench_k, n_test, bench_cfg);
        Matrix table(rows.size(), 6);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            table(i, 0) = static_cast<double>(rows[i].n);
            table(i, 1) = static_cast<double>(rows[i].d);
            table(i, 2) = static_cast<double>(rows[i].k);
            table(i, 3) = rows[i].fit_seconds;
            table(i, 4) = rows[i].score_seconds;
            table(i, 5) = rows[i].per_point_seconds;
        }
        write_csv(bench_out, {"n", "d", "k", "fit_s", "score_s", "per_point_s"}, table);
        std::printf("%zu timing rows -> %s\n", rows.size(), bench_out.c_str());
        return 0;
    }
    if (grid_cmd->parsed()) {
        const GsaalModel model = load_model(grid_model);
        export_grid_csv(model, bounds, resolution, grid_out);
        std::printf("%zu grid rows -> %s\n", resolution * resolution, grid_out.c_str());
        return 0;
    }
    if (mmd_cmd->parsed()) {
        if (mmd_example) {
            const Matrix myopic = myopic_population(mmd_n, false, seed);
            const Matrix control = myopic_population(mmd_n, true, seed + 1);
            const SubspaceMask view = SubspaceMask::from_string("110");
            const double mmd_myopic = mmd_linear(myopic, zero_pad_view(myopic, view));
            const double mmd_control = mmd_linear(control, zero_pad_view(control, view));
            std::printf("mmd2_myopic,%s\n", format_double(mmd_myopic).c_str());
            std::printf("mmd2_control,%s\n", format_double(mmd_control).c_str());
        } else {
            if (mmd_a.empty() || mmd_b.empty()) {
                throw ConfigError("mmd: provide --a and --b, or --example");
            }
            const double v = mmd_linear(load_features(mmd_a), load_features(mmd_b));
            std::printf("mmd2,%s\n", format_double(v).c_str());
        }
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const CapacityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const ShapeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const TrainingError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitTraining;
    } catch (const GenerationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitTraining;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
