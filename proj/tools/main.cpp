// Command-line front end: dataset generation, training, comparison,
// gradient checking and evaluation, with reproducible file outputs.
//
// Exit codes: 0 success, 2 configuration/usage error (including refusing to
// overwrite without --force), 3 non-finite loss during training, 4 compare
// on mismatched reports, 5 gradient check over tolerance, 6 file I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "icosim/report_io.hpp"
#include "icosim/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace icosim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNonFinite = 3;
constexpr int kExitCompareMismatch = 4;
constexpr int kExitGradcheck = 5;
constexpr int kExitIo = 6;

struct AppConfig {
    TrainConfig train;
    DatasetConfig data;
    double compare_threshold = 0.1;
    bool cumulative_curves = false;
};

AppConfig load_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    AppConfig c;
    try {
        if (j.contains("pipeline")) c.train.pipeline = pipeline_from_name(j["pipeline"]);
        if (j.contains("n_layers")) c.train.n_layers = j["n_layers"].get<int>();
        if (j.contains("n_qubits")) c.train.n_qubits = j["n_qubits"].get<int>();
        if (j.contains("epochs")) c.train.epochs = j["epochs"].get<int>();
        if (j.contains("learning_rate")) c.train.learning_rate = j["learning_rate"].get<double>();
        if (j.contains("batch_size")) c.train.batch_size = j["batch_size"].get<int>();
        if (j.contains("n_trials")) c.train.n_trials = j["n_trials"].get<int>();
        if (j.contains("loss_kind")) c.train.loss_kind = loss_kind_from_name(j["loss_kind"]);
        if (j.contains("seed")) {
            c.train.seed = j["seed"].get<std::uint64_t>();
            c.data.seed = c.train.seed;
        }
        if (j.contains("dataset_seed")) c.data.seed = j["dataset_seed"].get<std::uint64_t>();
        if (j.contains("k_train")) c.data.k_train = j["k_train"].get<int>();
        if (j.contains("k_test")) c.data.k_test = j["k_test"].get<int>();
        if (j.contains("bounds_nT")) {
            const json& b = j["bounds_nT"];
            auto axis = [&b](const char* key, AxisBounds fallback) {
                if (!b.contains(key)) return fallback;
                return AxisBounds{b[key][0].get<double>(), b[key][1].get<double>()};
            };
            c.data.bounds.bx = axis("bx", c.data.bounds.bx);
            c.data.bounds.by = axis("by", c.data.bounds.by);
            c.data.bounds.bz = axis("bz", c.data.bounds.bz);
        }
        if (j.contains("heading_convention")) {
            c.data.convention = heading_convention_from_name(j["heading_convention"]);
        }
        if (j.contains("compare_threshold")) c.compare_threshold = j["compare_threshold"];
        if (j.contains("cumulative_curves")) c.cumulative_curves = j["cumulative_curves"];
    } catch (const json::exception& e) {
        throw ConfigError("bad value in config file " + path.string() + ": " + e.what());
    }
    return c;
}

fs::path default_out_dir() {
    if (const char* env = std::getenv("ICOSIM_OUT")) {
        return env;
    }
    return "out";
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

void refuse_overwrite(const fs::path& path, bool force) {
    if (!force && fs::exists(path)) {
        throw ConfigError("refusing to overwrite " + path.string() + " (pass --force)");
    }
}

void write_dataset_files(const fs::path& dir, const Dataset& data, bool force) {
    ensure_dir(dir);
    for (const char* name : {"train.csv", "test.csv", "dataset_meta.json"}) {
        refuse_overwrite(dir / name, force);
    }
    write_dataset_csv(dir / "train.csv", data.train);
    write_dataset_csv(dir / "test.csv", data.test);
    write_dataset_meta(dir / "dataset_meta.json", data.config);
}

int cmd_gen_data(const AppConfig& config, const fs::path& out_dir, bool force) {
    const Dataset data = make_dataset(config.data);
    write_dataset_files(out_dir, data, force);
    json summary;
    summary["command"] = "gen-data";
    summary["out"] = out_dir.string();
    summary["seed"] = data.config.seed;
    summary["k_train"] = data.config.k_train;
    summary["k_test"] = data.config.k_test;
    std::cout << summary.dump() << '\n';
    return kExitOk;
}

int cmd_train(const AppConfig& config, const fs::path& out_dir, bool force,
              const std::optional<fs::path>& data_dir, bool generate) {
    Dataset data;
    if (data_dir) {
        data = load_dataset_dir(*data_dir);
    } else if (generate) {
        data = make_dataset(config.data);
        write_dataset_files(out_dir, data, force);
    } else {
        throw ConfigError("no dataset: pass --data <dir> or --generate");
    }

    const std::string tag = pipeline_name(config.train.pipeline);
    ensure_dir(out_dir);
    const fs::path report_path = out_dir / ("report_" + tag + ".json");
    const fs::path curves_path = out_dir / ("curves_" + tag + ".csv");
    refuse_overwrite(report_path, force);
    refuse_overwrite(curves_path, force);

    const TrainReport report =
        train(config.train, data, [&tag, &config](int trial, int epoch, double tr, double te) {
            std::cerr << "[" << tag << "] trial " << (trial + 1) << "/"
                      << config.train.n_trials << " epoch " << (epoch + 1) << "/"
                      << config.train.epochs << " train=" << format_full(tr)
                      << " test=" << format_full(te) << '\n';
        });

    write_report_json(report_path, report);
    write_curves_csv(curves_path, report);
    if (config.cumulative_curves) {
        const fs::path cpath = out_dir / ("curves_" + tag + "_cumulative.csv");
        refuse_overwrite(cpath, force);
        write_curves_csv(cpath, report, /*cumulative=*/true);
    }
    for (std::size_t t = 0; t < report.trials.size(); ++t) {
        const fs::path ppath =
            out_dir / ("params_" + tag + "_trial" + std::to_string(t) + ".txt");
        refuse_overwrite(ppath, force);
        write_params_txt(ppath, report.trials[t].final_params);
    }

    json summary;
    summary["command"] = "train";
    summary["pipeline"] = tag;
    summary["epochs"] = config.train.epochs;
    summary["trials"] = config.train.n_trials;
    summary["aborted_trials"] = 0;
    for (const TrialResult& t : report.trials) {
        if (t.aborted) {
            summary["aborted_trials"] = summary["aborted_trials"].get<int>() + 1;
        }
    }
    if (!report.mean_train_curve.empty()) {
        summary["mean_final_train"] = report.mean_train_curve.back();
        summary["mean_final_test"] = report.mean_test_curve.back();
    }
    summary["wall_clock_seconds"] = report.wall_clock_seconds;
    summary["report"] = report_path.string();
    summary["curves"] = curves_path.string();
    std::cout << summary.dump() << '\n';

    if (report.any_aborted()) {
        std::cerr << "error: non-finite loss aborted at least one trial\n";
        return kExitNonFinite;
    }
    return kExitOk;
}

int cmd_compare(const AppConfig& config, const fs::path& out_dir, bool force,
                fs::path report_a, fs::path report_b) {
    if (report_a.empty()) {
        report_a = out_dir / "report_ico.json";
    }
    if (report_b.empty()) {
        report_b = out_dir / "report_definite.json";
    }
    const TrainReport a = read_report_json(report_a);
    const TrainReport b = read_report_json(report_b);

    CompareResult cmp;
    try {
        cmp = compare_reports(a, b, config.compare_threshold);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCompareMismatch;
    }

    ensure_dir(out_dir);
    const fs::path csv_path = out_dir / "compare.csv";
    refuse_overwrite(csv_path, force);
    write_compare_csv(csv_path, cmp);

    auto threshold_text = [](int epochs) {
        return epochs < 0 ? json("not reached") : json(epochs);
    };
    json summary;
    summary["command"] = "compare";
    summary["threshold"] = cmp.threshold;
    summary[cmp.a_label + "_epochs_to_threshold"] = threshold_text(cmp.a_epochs_to_threshold);
    summary[cmp.b_label + "_epochs_to_threshold"] = threshold_text(cmp.b_epochs_to_threshold);
    summary[cmp.a_label + "_final_train"] = cmp.a_train.back();
    summary[cmp.b_label + "_final_train"] = cmp.b_train.back();
    summary["curves"] = csv_path.string();
    std::cout << summary.dump() << '\n';
    return kExitOk;
}

int cmd_gradcheck(const AppConfig& config, int instances, double step, double tolerance,
                  std::uint64_t seed) {
    const ModelSpec model = config.train.model();
    const GradCheckReport report =
        run_gradcheck(model, instances, step, tolerance, seed, config.train.loss_kind);
    json summary;
    summary["command"] = "gradcheck";
    summary["instances_per_pipeline"] = report.instances_per_pipeline;
    summary["step"] = report.step;
    summary["tolerance"] = report.tolerance;
    summary["max_abs_dev"] = report.max_abs_dev;
    summary["pass"] = report.pass();
    if (!report.pass()) {
        summary["worst_param"] = report.worst_param;
        summary["worst_instance"] = report.worst_instance;
        summary["worst_pipeline"] = pipeline_name(report.worst_pipeline);
    }
    std::cout << summary.dump() << '\n';
    if (!report.pass()) {
        std::cerr << "error: gradient check failed on " << pipeline_name(report.worst_pipeline)
                  << " instance " << report.worst_instance << " parameter "
                  << report.worst_param << " (|analytic - fd| = "
                  << format_full(report.max_abs_dev) << " > " << format_full(report.tolerance)
                  << ")\n";
        return kExitGradcheck;
    }
    return kExitOk;
}

int cmd_eval(const AppConfig& config, const fs::path& params_path, const fs::path& data_dir,
             const std::string& split) {
    const std::vector<double> params = read_params_txt(params_path);
    const Dataset data = load_dataset_dir(data_dir);
    const std::vector<Sample>& samples = split == "test" ? data.test : data.train;
    const ModelSpec model = config.train.model();
    if (params.size() != static_cast<std::size_t>(model.n_params())) {
        throw ConfigError("parameter file has " + std::to_string(params.size()) +
                          " values but the model needs " + std::to_string(model.n_params()) +
                          " (check --layers)");
    }
    const double value =
        evaluate(config.train.pipeline, model, params, samples, config.train.loss_kind);
    json summary;
    summary["command"] = "eval";
    summary["pipeline"] = pipeline_name(config.train.pipeline);
    summary["split"] = split;
    summary["n_samples"] = samples.size();
    summary["loss_kind"] = loss_kind_name(config.train.loss_kind);
    summary["loss"] = value;
    std::cout << summary.dump() << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"statevector simulator and trainer for quantum sensing-plus-computation "
                 "pipelines under definite and indefinite causal order"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag;
    std::string pipeline_flag;
    std::string loss_flag;
    std::optional<std::uint64_t> seed_flag;
    std::optional<int> epochs_flag, batch_flag, trials_flag, layers_flag;
    std::optional<double> lr_flag;
    bool force = false;

    app.add_option("--config", config_path, "JSON config file; flags override its values")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_flag, "output directory (default: $ICOSIM_OUT or ./out)");
    app.add_option("--seed", seed_flag, "seed for dataset generation and training trials");
    app.add_option("--pipeline", pipeline_flag, "definite|ico")
        ->check(CLI::IsMember({"definite", "ico"}));
    app.add_option("--epochs", epochs_flag, "training epochs");
    app.add_option("--lr", lr_flag, "learning rate");
    app.add_option("--batch-size", batch_flag, "mini-batch size");
    app.add_option("--trials", trials_flag, "independent trials");
    app.add_option("--layers", layers_flag, "ansatz layers");
    app.add_option("--loss", loss_flag, "mse|absolute")
        ->check(CLI::IsMember({"mse", "absolute"}));
    app.add_flag("--force", force, "allow overwriting existing output files");

    CLI::App* gen = app.add_subcommand("gen-data", "synthesize and write a dataset");
    gen->fallthrough();

    CLI::App* tr = app.add_subcommand("train", "train one pipeline and write report files");
    tr->fallthrough();
    std::string data_flag;
    bool generate = false;
    bool cumulative_flag = false;
    tr->add_option("--data", data_flag, "directory holding train.csv/test.csv/dataset_meta.json")
        ->check(CLI::ExistingDirectory);
    tr->add_flag("--generate", generate, "synthesize the dataset in-run (and write it)");
    tr->add_flag("--cumulative", cumulative_flag, "also emit cumulative loss curves");

    CLI::App* cmp = app.add_subcommand("compare", "merge two reports into aligned curves");
    cmp->fallthrough();
    std::string report_a_flag, report_b_flag, reports_dir_flag;
    std::optional<double> threshold_flag;
    cmp->add_option("--reports", reports_dir_flag,
                    "directory holding report_ico.json and report_definite.json");
    cmp->add_option("--report-a", report_a_flag, "explicit first report (ico column slot)");
    cmp->add_option("--report-b", report_b_flag, "explicit second report (definite column slot)");
    cmp->add_option("--threshold", threshold_flag, "train-loss threshold for epochs-to-threshold");

    CLI::App* gc = app.add_subcommand("gradcheck", "analytic-vs-finite-difference agreement");
    gc->fallthrough();
    int gc_instances = 5;
    double gc_step = kDefaultFdStep;
    std::optional<double> gc_tol;
    gc->add_option("--instances", gc_instances, "random instances per pipeline");
    gc->add_option("--step", gc_step, "central-difference step");
    gc->add_option("--tol", gc_tol, "tolerance (default: max(1e-5, step))");

    CLI::App* ev = app.add_subcommand("eval", "evaluate saved parameters on a dataset");
    ev->fallthrough();
    std::string params_flag, eval_data_flag, split_flag = "test";
    ev->add_option("--params", params_flag, "parameter file (one value per line)")
        ->required()
        ->check(CLI::ExistingFile);
    ev->add_option("--data", eval_data_flag, "dataset directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    ev->add_option("--split", split_flag, "train|test")
        ->check(CLI::IsMember({"train", "test"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        AppConfig config;
        if (!config_path.empty()) {
            config = load_config_file(config_path);
        }
        if (seed_flag) {
            config.train.seed = *seed_flag;
            config.data.seed = *seed_flag;
        }
        if (!pipeline_flag.empty()) config.train.pipeline = pipeline_from_name(pipeline_flag);
        if (!loss_flag.empty()) config.train.loss_kind = loss_kind_from_name(loss_flag);
        if (epochs_flag) config.train.epochs = *epochs_flag;
        if (lr_flag) config.train.learning_rate = *lr_flag;
        if (batch_flag) config.train.batch_size = *batch_flag;
        if (trials_flag) config.train.n_trials = *trials_flag;
        if (layers_flag) config.train.n_layers = *layers_flag;
        if (cumulative_flag) config.cumulative_curves = true;
        if (threshold_flag) config.compare_threshold = *threshold_flag;
        config.data.validate();

        const fs::path out_dir = out_flag.empty() ? default_out_dir() : fs::path(out_flag);

        if (gen->parsed()) {
            return cmd_gen_data(config, out_dir, force);
        }
        if (tr->parsed()) {
            std::optional<fs::path> data_dir;
            if (!data_flag.empty()) {
                data_dir = data_flag;
            }
            return cmd_train(config, out_dir, force, data_dir, generate);
        }
        if (cmp->parsed()) {
            fs::path base = reports_dir_flag.empty() ? out_dir : fs::path(reports_dir_flag);
            fs::path a = report_a_flag.empty() ? fs::path() : fs::path(report_a_flag);
            fs::path b = report_b_flag.empty() ? fs::path() : fs::path(report_b_flag);
            if (a.empty()) a = base / "report_ico.json";
            if (b.empty()) b = base / "report_definite.json";
            return cmd_compare(config, out_dir, force, a, b);
        }
        if (gc->parsed()) {
            const double tol = gc_tol ? *gc_tol : std::max(kDefaultFdStep, gc_step);
            return cmd_gradcheck(config, gc_instances, gc_step, tol, config.train.seed);
        }
        if (ev->parsed()) {
            return cmd_eval(config, params_flag, eval_data_flag, split_flag);
        }
        std::cerr << "error: no command\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
