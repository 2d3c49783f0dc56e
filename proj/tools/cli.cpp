#include "cli.hpp"

#include "qrobust/qrobust.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

namespace qrobust::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Flags shared by the subcommands. Empty / unset means "keep the config value".
struct Overrides {
    std::string config_path;
    std::string out_dir = "run";
    std::string scale = "desk";
    std::string seeds;
    std::string lambda;
    std::string epsilon_grid;
    std::string gradient_method;
    std::string checkpoint;
    std::int64_t seed = -1;
    std::int64_t epochs = -1;
    std::int64_t threads = -1;
    bool fixed_encoding = false;
};

std::vector<double> parse_double_list(const std::string &text, const char *flag) {
    std::vector<double> values;
    for (const auto &field : split_csv_line(text)) {
        values.push_back(parse_double(field, std::string("--") + flag));
    }
    return values;
}

std::vector<std::uint64_t> parse_seed_list(const std::string &text) {
    std::vector<std::uint64_t> seeds;
    for (const auto &field : split_csv_line(text)) {
        std::size_t used = 0;
        unsigned long long value = 0;
        try {
            value = std::stoull(field, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != field.size()) {
            throw ConfigError("cannot parse '" + field + "' as a seed in --seeds");
        }
        seeds.push_back(value);
    }
    return seeds;
}

/// Loads the base preset, the config file and the flag overrides, in that order.
ExperimentConfig resolve_config(const std::string &command, const Overrides &o) {
    ExperimentConfig base;
    if (o.scale == "desk") {
        base = ExperimentConfig::desk_scale();
    } else if (o.scale == "full") {
        base = ExperimentConfig::full_scale();
    } else {
        throw ConfigError("--scale must be desk or full, got '" + o.scale + "'");
    }
    ExperimentConfig config = o.config_path.empty() ? base : load_config(o.config_path, base);

    if (o.epochs >= 0) {
        config.training.epochs = static_cast<std::size_t>(o.epochs);
    }
    if (o.threads >= 0) {
        config.threads = static_cast<std::size_t>(o.threads);
    }
    if (!o.gradient_method.empty()) {
        config.training.gradient_method = gradient_method_from_string(o.gradient_method);
    }
    if (o.seed >= 0) {
        config.training.seed = static_cast<std::uint64_t>(o.seed);
    }
    if (!o.seeds.empty()) {
        const auto seeds = parse_seed_list(o.seeds);
        config.robustness.seeds = seeds;
        config.sweep.seeds = seeds;
    }
    if (!o.lambda.empty()) {
        const auto lambdas = parse_double_list(o.lambda, "lambda");
        if (command == "train" || command == "predict-export") {
            if (lambdas.size() != 1) {
                throw ConfigError("--lambda takes a single value for " + command);
            }
            config.training.lambda = lambdas.front();
        } else if (command == "robustness") {
            config.robustness.lambda_values = lambdas;
        } else {
            config.sweep.lambda_grid = lambdas;
        }
    }
    if (!o.epsilon_grid.empty()) {
        config.robustness.epsilon_grid = parse_double_list(o.epsilon_grid, "epsilon-grid");
    }
    if (o.fixed_encoding) {
        if (command == "robustness") {
            config.robustness.include_fixed_encoding = true;
        } else {
            config.training.encoding_trainable = false;
        }
    }
    config.validate();
    return config;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

/// run_manifest.json is deterministic; the wall-clock time goes to
/// run_metadata.json so that re-runs produce identical manifests.
void write_manifest(const fs::path &dir, const std::string &command,
                    const ExperimentConfig &config, const std::vector<std::uint64_t> &seeds,
                    const std::vector<std::string> &outputs) {
    Json manifest;
    manifest["command"] = command;
    manifest["code_version"] = std::string(kVersion);
    manifest["seeds"] = seeds;
    manifest["outputs"] = outputs;
    manifest["config"] = Json::parse(config_to_json(config));
    write_text_file(dir / "run_manifest.json", manifest.dump(2) + "\n");

    Json metadata;
    metadata["created_utc"] = utc_timestamp();
    write_text_file(dir / "run_metadata.json", metadata.dump(2) + "\n");
}

fs::path prepare_out_dir(const std::string &dir) {
    fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    }
    return path;
}

int cmd_generate_data(const ExperimentConfig &config, const fs::path &dir, std::ostream &out) {
    const auto &d = config.data;
    const auto dataset = generate_dataset(d.count, d.r_min, d.r_max, d.x1, d.sequence_length);
    const auto [train_set, test_set] = split(dataset, d.train_count, d.split_seed);
    save_dataset_csv(dir / "dataset.csv", dataset);
    save_dataset_csv(dir / "train.csv", train_set);
    save_dataset_csv(dir / "test.csv", test_set);
    write_manifest(dir, "generate-data", config, {d.split_seed},
                   {"dataset.csv", "train.csv", "test.csv"});
    out << "generate-data: " << dataset.size() << " samples (" << train_set.size() << " train, "
        << test_set.size() << " test) -> " << dir.string() << '\n';
    return 0;
}

int cmd_train(const ExperimentConfig &config, const fs::path &dir, std::ostream &out) {
    const auto context = make_context(config);
    const auto record =
        train(context.layout, context.train, context.test, context.scaling, config.training);
    write_text_file(dir / "run_record.json",
                    run_record_to_json(context.layout, context.scaling, record) + "\n");
    write_text_file(dir / "trace.csv", trace_to_csv(record));
    save_checkpoint(dir / "model.json", context.layout, record.final_params);
    write_manifest(dir, "train", config, {config.training.seed},
                   {"run_record.json", "trace.csv", "model.json"});
    const auto &m = record.metrics;
    out << "train: lambda=" << format_double(config.training.lambda)
        << " seed=" << config.training.seed << " train_mse=" << format_double(m.train_mse)
        << " test_mse=" << format_double(m.test_mse) << " gap=" << format_double(m.gap.gap)
        << " L=" << format_double(m.lipschitz.bound_raw) << " -> " << dir.string() << '\n';
    return 0;
}

int cmd_robustness(const ExperimentConfig &config, const fs::path &dir, std::ostream &out) {
    const auto context = make_context(config);
    const auto result = run_robustness_study(config.robustness, context);
    write_text_file(dir / "robustness.csv", robustness_csv(result));
    write_text_file(dir / "robustness_per_seed.csv", robustness_seed_csv(result));
    write_manifest(dir, "robustness", config, config.robustness.seeds,
                   {"robustness.csv", "robustness_per_seed.csv"});
    out << "robustness: " << result.models.size() << " models, "
        << config.robustness.epsilon_grid.size() << " noise levels, " << result.rows.size()
        << " rows -> " << dir.string() << '\n';
    return 0;
}

int cmd_sweep(const ExperimentConfig &config, const fs::path &dir, std::ostream &out) {
    const auto context = make_context(config);
    const auto result = run_generalization_sweep(config.sweep, context);
    write_text_file(dir / "sweep.csv", sweep_csv(result));
    write_text_file(dir / "sweep_per_seed.csv", sweep_seed_csv(result));
    write_manifest(dir, "sweep", config, config.sweep.seeds, {"sweep.csv", "sweep_per_seed.csv"});
    out << "sweep: " << result.rows.size() << " lambda values x " << config.sweep.seeds.size()
        << " seeds -> " << dir.string() << '\n';
    return 0;
}

int cmd_predict_export(const ExperimentConfig &config, const Overrides &o, const fs::path &dir,
                       std::ostream &out) {
    const auto context = make_context(config);
    std::vector<std::uint64_t> seeds{config.training.seed};
    std::string source;
    ModelParams params;
    if (!o.checkpoint.empty()) {
        const auto checkpoint = load_checkpoint(o.checkpoint);
        if (!(checkpoint.layout == context.layout)) {
            throw ConfigError("checkpoint layout does not match the configured circuit");
        }
        params = checkpoint.params;
        source = "checkpoint " + o.checkpoint;
    } else {
        // Several seeds: export the model with the median test MSE.
        if (!o.seeds.empty()) {
            seeds = config.sweep.seeds;
        }
        const Variant variant{config.training.encoding_trainable
                                  ? trainable_variant(config.training.lambda).name
                                  : fixed_encoding_variant().name,
                              config.training.encoding_trainable ? config.training.lambda : 0.0,
                              config.training.encoding_trainable};
        const std::vector<Variant> variants{variant};
        const auto models = train_models(context, variants, seeds);
        const auto &chosen = models[median_test_mse_index(models)];
        params = chosen.record.final_params;
        source = variant.name + " seed " + std::to_string(chosen.seed);
        save_checkpoint(dir / "model.json", context.layout, params);
    }
    const auto rows =
        export_predictions(context.layout, params, context.scaling, context.train, context.test);
    write_text_file(dir / "predictions.csv", predictions_csv(rows));
    write_manifest(dir, "predict-export", config, seeds, {"predictions.csv"});
    out << "predict-export: " << rows.size() << " rows from " << source << " -> "
        << dir.string() << '\n';
    return 0;
}

int cmd_bifurcation(const ExperimentConfig &config, const fs::path &dir, std::ostream &out) {
    const auto &b = config.bifurcation;
    const auto r_values = linspace(b.r_min, b.r_max, b.r_count);
    const auto rows = bifurcation_table(r_values, b.iterations, b.x1);
    std::ostringstream csv;
    write_bifurcation_csv(csv, rows);
    write_text_file(dir / "bifurcation.csv", csv.str());
    write_manifest(dir, "bifurcation", config, {}, {"bifurcation.csv"});
    out << "bifurcation: " << r_values.size() << " r values x " << b.iterations
        << " iterations -> " << dir.string() << '\n';
    return 0;
}

void add_common(CLI::App *cmd, Overrides &o) {
    cmd->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--scale", o.scale, "base preset before the config file: desk or full")
        ->capture_default_str();
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

void add_training(CLI::App *cmd, Overrides &o) {
    cmd->add_option("--epochs", o.epochs, "training epochs");
    cmd->add_option("--gradient-method", o.gradient_method, "adjoint or parameter-shift");
}

} // namespace

int cli_main(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Lipschitz-regularized variational quantum models on logistic-map data",
                 "qrobust"};
    app.require_subcommand(1);
    Overrides o;

    auto *gen = app.add_subcommand("generate-data", "write the logistic-map dataset and split");
    add_common(gen, o);

    auto *train_cmd = app.add_subcommand("train", "train one model and write its RunRecord");
    add_common(train_cmd, o);
    add_training(train_cmd, o);
    train_cmd->add_option("--seed", o.seed, "initialization seed");
    train_cmd->add_option("--lambda", o.lambda, "regularization strength");
    train_cmd->add_flag("--fixed-encoding", o.fixed_encoding, "freeze the encoding weights");

    auto *robust = app.add_subcommand("robustness", "worst-case MSE under input noise");
    add_common(robust, o);
    add_training(robust, o);
    robust->add_option("--seeds", o.seeds, "comma-separated initialization seeds");
    robust->add_option("--lambda", o.lambda, "comma-separated lambda values");
    robust->add_option("--epsilon-grid", o.epsilon_grid, "comma-separated noise levels");
    robust->add_flag("--fixed-encoding", o.fixed_encoding, "include the fixed-encoding variant");

    auto *sweep = app.add_subcommand("sweep", "train/test MSE, gap and L over a lambda grid");
    add_common(sweep, o);
    add_training(sweep, o);
    sweep->add_option("--seeds", o.seeds, "comma-separated initialization seeds");
    sweep->add_option("--lambda", o.lambda, "comma-separated lambda grid");
    sweep->add_flag("--fixed-encoding", o.fixed_encoding, "freeze the encoding weights");

    auto *pred = app.add_subcommand("predict-export", "predicted vs. true r for train and test");
    add_common(pred, o);
    add_training(pred, o);
    pred->add_option("--checkpoint", o.checkpoint, "model.json or run_record.json to evaluate")
        ->check(CLI::ExistingFile);
    pred->add_option("--seed", o.seed, "initialization seed");
    pred->add_option("--seeds", o.seeds, "train these seeds and export the median-test-MSE model");
    pred->add_option("--lambda", o.lambda, "regularization strength");
    pred->add_flag("--fixed-encoding", o.fixed_encoding, "freeze the encoding weights");

    auto *bif = app.add_subcommand("bifurcation", "logistic-map iterates over a grid of r");
    add_common(bif, o);

    std::vector<const char *> argv{"qrobust"};
    for (const auto &arg : args) {
        argv.push_back(arg.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    CLI::App *chosen = app.get_subcommands().front();
    const std::string command = chosen->get_name();
    try {
        const auto config = resolve_config(command, o);
        const auto dir = prepare_out_dir(o.out_dir);
        if (command == "generate-data") {
            return cmd_generate_data(config, dir, out);
        }
        if (command == "train") {
            return cmd_train(config, dir, out);
        }
        if (command == "robustness") {
            return cmd_robustness(config, dir, out);
        }
        if (command == "sweep") {
            return cmd_sweep(config, dir, out);
        }
        if (command == "predict-export") {
            return cmd_predict_export(config, o, dir, out);
        }
        return cmd_bifurcation(config, dir, out);
    } catch (const ConfigError &e) {
        err << "qrobust " << command << ": config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError &e) {
        err << "qrobust " << command << ": I/O error: " << e.what() << '\n';
        return 3;
    } catch (const Error &e) {
        err << "qrobust " << command << ": " << e.what() << '\n';
        return 1;
    }
}

} // namespace qrobust::cli
