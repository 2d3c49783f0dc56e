#include "qrobust/config.hpp"

#include "json_detail.hpp"
#include "qrobust/csv.hpp"
#include "qrobust/errors.hpp"

#include <algorithm>
#include <set>
#include <type_traits>

namespace qrobust {

using detail::Json;

namespace {

std::vector<std::uint64_t> seed_range(std::uint64_t count) {
    std::vector<std::uint64_t> seeds(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        seeds[i] = i;
    }
    return seeds;
}

/// Reads known keys from one JSON object and rejects anything else.
class Section {
  public:
    Section(const Json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw ConfigError("config section '" + display() + "' must be an object");
        }
    }

    template <typename T> void read(const char *key, T &target) {
        known_.insert(key);
        if (!obj_.contains(key)) {
            return;
        }
        const Json &value = obj_.at(key);
        if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
            // nlohmann would silently wrap -3 or truncate 2.5.
            if (!value.is_number_unsigned()) {
                throw ConfigError("config field '" + prefix() + key +
                                  "' must be a non-negative integer");
            }
        } else if constexpr (std::is_same_v<T, std::vector<std::uint64_t>>) {
            if (!value.is_array() ||
                !std::all_of(value.begin(), value.end(),
                             [](const Json &v) { return v.is_number_unsigned(); })) {
                throw ConfigError("config field '" + prefix() + key +
                                  "' must be an array of non-negative integers");
            }
        }
        try {
            target = value.get<T>();
        } catch (const nlohmann::json::exception &) {
            throw ConfigError("config field '" + prefix() + key + "' has the wrong type");
        }
    }

    void read_method(const char *key, GradientMethod &target) {
        std::string text(to_string(target));
        read(key, text);
        try {
            target = gradient_method_from_string(text);
        } catch (const ConfigError &) {
            throw ConfigError("config field '" + prefix() + key + "' must be adjoint or "
                              "parameter-shift, got '" + text + "'");
        }
    }

    [[nodiscard]] bool has(const char *key) const { return obj_.contains(key); }
    const Json &child(const char *key) {
        known_.insert(key);
        return obj_.at(key);
    }
    [[nodiscard]] std::string child_path(const char *key) const { return prefix() + key; }

    void finish() const {
        for (const auto &[key, value] : obj_.items()) {
            if (!known_.contains(key)) {
                throw ConfigError("unknown config field '" + prefix() + key + "'");
            }
        }
    }

  private:
    [[nodiscard]] std::string prefix() const { return path_.empty() ? "" : path_ + "."; }
    [[nodiscard]] std::string display() const { return path_.empty() ? "<root>" : path_; }

    const Json &obj_;
    std::string path_;
    std::set<std::string, std::less<>> known_;
};

void check(bool ok, const std::string &field, const std::string &rule) {
    if (!ok) {
        throw ConfigError("config field '" + field + "' " + rule);
    }
}

} // namespace

ExperimentConfig ExperimentConfig::desk_scale() {
    ExperimentConfig config;
    config.data.count = 500;
    config.data.train_count = 100;
    config.training.epochs = 500;
    config.robustness.seeds = seed_range(5);
    config.sweep.seeds = seed_range(5);
    return config;
}

ExperimentConfig ExperimentConfig::full_scale() {
    ExperimentConfig config;
    config.data.count = 1000;
    config.data.train_count = 200;
    config.training.epochs = 2000;
    config.robustness.seeds = seed_range(50);
    config.sweep.seeds = seed_range(50);
    return config;
}

void ExperimentConfig::validate() const {
    check(data.count >= 2, "data.count", "must be >= 2");
    check(data.train_count > 0 && data.train_count < data.count, "data.train_count",
          "must lie strictly between 0 and data.count");
    check(data.sequence_length >= 1, "data.sequence_length", "must be >= 1");
    check(model.num_qubits >= 2 && model.num_qubits <= StateVector::kMaxQubits,
          "model.num_qubits", "must lie in [2, 24]");
    check(model.scaling.slope > 0.0, "model.output_slope", "must be > 0");
    check(bifurcation.iterations >= 1, "bifurcation.iterations", "must be >= 1");
    check(bifurcation.r_count >= 1, "bifurcation.r_count", "must be >= 1");
    try {
        training.validate();
    } catch (const DomainError &e) {
        throw ConfigError(std::string("config section 'training': ") + e.what());
    }
    try {
        robustness.validate();
    } catch (const DomainError &e) {
        throw ConfigError(std::string("config section 'robustness': ") + e.what());
    }
    try {
        sweep.validate();
    } catch (const DomainError &e) {
        throw ConfigError(std::string("config section 'sweep': ") + e.what());
    }
}

ExperimentConfig config_from_json(std::string_view text, const ExperimentConfig &base) {
    const Json doc = detail::parse_json(text, "config");
    ExperimentConfig config = base;
    Section root(doc, "");
    root.read("threads", config.threads);

    if (root.has("data")) {
        Section s(root.child("data"), "data");
        s.read("count", config.data.count);
        s.read("r_min", config.data.r_min);
        s.read("r_max", config.data.r_max);
        s.read("x1", config.data.x1);
        s.read("sequence_length", config.data.sequence_length);
        s.read("train_count", config.data.train_count);
        s.read("split_seed", config.data.split_seed);
        s.finish();
    }
    if (root.has("model")) {
        Section s(root.child("model"), "model");
        s.read("num_qubits", config.model.num_qubits);
        s.read("output_offset", config.model.scaling.offset);
        s.read("output_slope", config.model.scaling.slope);
        s.finish();
    }
    if (root.has("training")) {
        auto &t = config.training;
        Section s(root.child("training"), "training");
        s.read("learning_rate", t.learning_rate);
        s.read("epochs", t.epochs);
        s.read("lambda", t.lambda);
        s.read("adam_beta1", t.adam_beta1);
        s.read("adam_beta2", t.adam_beta2);
        s.read("adam_epsilon", t.adam_epsilon);
        s.read("batch_size", t.batch_size);
        s.read("seed", t.seed);
        s.read("encoding_trainable", t.encoding_trainable);
        s.read_method("gradient_method", t.gradient_method);
        s.read("report_probe_count", t.report_probe_count);
        s.read("report_probe_radius", t.report_probe_radius);
        s.finish();
    }
    if (root.has("robustness")) {
        auto &r = config.robustness;
        Section s(root.child("robustness"), "robustness");
        s.read("epsilon_grid", r.epsilon_grid);
        s.read("perturbation_rounds", r.perturbation_rounds);
        s.read("seeds", r.seeds);
        s.read("lambda_values", r.lambda_values);
        s.read("include_fixed_encoding", r.include_fixed_encoding);
        s.read("noise_seed", r.noise_seed);
        s.finish();
    }
    if (root.has("sweep")) {
        Section s(root.child("sweep"), "sweep");
        s.read("lambda_grid", config.sweep.lambda_grid);
        s.read("seeds", config.sweep.seeds);
        s.finish();
    }
    if (root.has("bifurcation")) {
        auto &b = config.bifurcation;
        Section s(root.child("bifurcation"), "bifurcation");
        s.read("r_min", b.r_min);
        s.read("r_max", b.r_max);
        s.read("r_count", b.r_count);
        s.read("iterations", b.iterations);
        s.read("x1", b.x1);
        s.finish();
    }
    root.finish();
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path &path, const ExperimentConfig &base) {
    return config_from_json(read_text_file(path), base);
}

std::string config_to_json(const ExperimentConfig &config) {
    const auto &d = config.data;
    const auto &t = config.training;
    const auto &r = config.robustness;
    const auto &b = config.bifurcation;
    Json doc;
    doc["threads"] = config.threads;
    doc["data"] = {{"count", d.count},
                   {"r_min", d.r_min},
                   {"r_max", d.r_max},
                   {"x1", d.x1},
                   {"sequence_length", d.sequence_length},
                   {"train_count", d.train_count},
                   {"split_seed", d.split_seed}};
    doc["model"] = {{"num_qubits", config.model.num_qubits},
                    {"output_offset", config.model.scaling.offset},
                    {"output_slope", config.model.scaling.slope}};
    doc["training"] = {{"learning_rate", t.learning_rate},
                       {"epochs", t.epochs},
                       {"lambda", t.lambda},
                       {"adam_beta1", t.adam_beta1},
                       {"adam_beta2", t.adam_beta2},
                       {"adam_epsilon", t.adam_epsilon},
                       {"batch_size", t.batch_size},
                       {"seed", t.seed},
                       {"encoding_trainable", t.encoding_trainable},
                       {"gradient_method", std::string(to_string(t.gradient_method))},
                       {"report_probe_count", t.report_probe_count},
                       {"report_probe_radius", t.report_probe_radius}};
    doc["robustness"] = {{"epsilon_grid", r.epsilon_grid},
                         {"perturbation_rounds", r.perturbation_rounds},
                         {"seeds", r.seeds},
                         {"lambda_values", r.lambda_values},
                         {"include_fixed_encoding", r.include_fixed_encoding},
                         {"noise_seed", r.noise_seed}};
    doc["sweep"] = {{"lambda_grid", config.sweep.lambda_grid}, {"seeds", config.sweep.seeds}};
    doc["bifurcation"] = {{"r_min", b.r_min},
                          {"r_max", b.r_max},
                          {"r_count", b.r_count},
                          {"iterations", b.iterations},
                          {"x1", b.x1}};
    return doc.dump(2);
}

ExperimentContext make_context(const ExperimentConfig &config) {
    config.validate();
    const auto &d = config.data;
    const auto dataset = generate_dataset(d.count, d.r_min, d.r_max, d.x1, d.sequence_length);
    auto [train_set, test_set] = split(dataset, d.train_count, d.split_seed);
    return ExperimentContext{build_logistic_circuit(config.model.num_qubits, d.sequence_length),
                             config.model.scaling,
                             std::move(train_set),
                             std::move(test_set),
                             config.training,
                             config.threads};
}

} // namespace qrobust
