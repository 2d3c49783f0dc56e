#include "qrobust/harness.hpp"

#include "qrobust/csv.hpp"
#include "qrobust/errors.hpp"
#include "qrobust/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace qrobust {

Variant trainable_variant(double lambda) {
    return Variant{"lambda=" + format_double(lambda), lambda, true};
}

Variant fixed_encoding_variant() { return Variant{"fixed", 0.0, false}; }

std::vector<double> default_epsilon_grid() {
    constexpr std::size_t count = 10;
    const double lo = std::log(0.001);
    const double hi = std::log(0.5);
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    }
    grid.front() = 0.001;
    grid.back() = 0.5;
    return grid;
}

void RobustnessConfig::validate() const {
    if (epsilon_grid.empty()) {
        throw DomainError("robustness epsilon_grid is empty");
    }
    for (const double eps : epsilon_grid) {
        if (!(eps >= 0.0)) {
            throw DomainError("robustness epsilon values must be >= 0");
        }
    }
    if (perturbation_rounds < 1) {
        throw DomainError("robustness perturbation_rounds must be >= 1");
    }
    if (seeds.empty()) {
        throw DomainError("robustness study needs at least one seed");
    }
    for (const double lambda : lambda_values) {
        if (!(lambda >= 0.0)) {
            throw DomainError("robustness lambda values must be >= 0");
        }
    }
    if (lambda_values.empty() && !include_fixed_encoding) {
        throw DomainError("robustness study needs a lambda value or the fixed-encoding variant");
    }
}

std::vector<Variant> RobustnessConfig::variants() const {
    std::vector<Variant> out;
    for (const double lambda : lambda_values) {
        out.push_back(trainable_variant(lambda));
    }
    if (include_fixed_encoding) {
        out.push_back(fixed_encoding_variant());
    }
    return out;
}

void SweepConfig::validate() const {
    if (lambda_grid.size() < 2) {
        throw DomainError("sweep lambda_grid needs at least 2 values");
    }
    for (const double lambda : lambda_grid) {
        if (!(lambda >= 0.0)) {
            throw DomainError("sweep lambda values must be >= 0");
        }
    }
    if (seeds.empty()) {
        throw DomainError("sweep needs at least one seed");
    }
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)> &job) {
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        job(i);
                    } catch (...) {
                        const std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

double worst_case_mse(const CircuitLayout &layout, const ModelParams &params,
                      const OutputScaling &scaling, std::span<const Sample> test_set,
                      double epsilon, std::size_t rounds, std::uint64_t seed) {
    if (rounds < 1) {
        throw DomainError("worst_case_mse needs rounds >= 1");
    }
    if (epsilon == 0.0) {
        return evaluate_mse(layout, params, scaling, test_set);
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < rounds; ++k) {
        const auto noisy = perturb(test_set, epsilon, derive_seed(seed, k));
        worst = std::max(worst, evaluate_mse(layout, params, scaling, noisy));
    }
    return worst;
}

std::vector<TrainedModel> train_models(const ExperimentContext &context,
                                       std::span<const Variant> variants,
                                       std::span<const std::uint64_t> seeds) {
    std::vector<TrainedModel> models;
    models.reserve(variants.size() * seeds.size());
    for (const auto &variant : variants) {
        for (const auto seed : seeds) {
            models.push_back(TrainedModel{variant, seed, {}});
        }
    }
    parallel_for(models.size(), context.threads, [&](std::size_t i) {
        auto &model = models[i];
        TrainingConfig config = context.training;
        config.lambda = model.variant.lambda;
        config.encoding_trainable = model.variant.encoding_trainable;
        config.seed = model.seed;
        model.record = train(context.layout, context.train, context.test, context.scaling, config);
    });
    return models;
}

MeanStd mean_std(std::span<const double> values) {
    if (values.empty()) {
        return {};
    }
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (const double v : values) {
        sum += v;
    }
    const double mean = sum / n;
    double sq = 0.0;
    for (const double v : values) {
        sq += (v - mean) * (v - mean);
    }
    return MeanStd{mean, std::sqrt(sq / n)};
}

RobustnessResult run_robustness_study(const RobustnessConfig &config,
                                      const ExperimentContext &context) {
    config.validate();
    const auto variants = config.variants();
    RobustnessResult result;
    result.models = train_models(context, variants, config.seeds);

    const std::size_t num_eps = config.epsilon_grid.size();
    const std::size_t num_seeds = config.seeds.size();
    std::vector<double> worst(result.models.size() * num_eps);
    parallel_for(worst.size(), context.threads, [&](std::size_t job) {
        const std::size_t m = job / num_eps;
        const std::size_t e = job % num_eps;
        worst[job] = worst_case_mse(context.layout, result.models[m].record.final_params,
                                    context.scaling, context.test.samples,
                                    config.epsilon_grid[e], config.perturbation_rounds,
                                    derive_seed(config.noise_seed, e));
    });

    for (std::size_t v = 0; v < variants.size(); ++v) {
        std::vector<double> bounds(num_seeds);
        for (std::size_t s = 0; s < num_seeds; ++s) {
            bounds[s] = result.models[v * num_seeds + s].record.metrics.lipschitz.bound_raw;
        }
        const auto bound_stats = mean_std(bounds);
        for (std::size_t e = 0; e < num_eps; ++e) {
            std::vector<double> values(num_seeds);
            for (std::size_t s = 0; s < num_seeds; ++s) {
                values[s] = worst[(v * num_seeds + s) * num_eps + e];
            }
            const auto stats = mean_std(values);
            result.rows.push_back(RobustnessRow{variants[v].name, variants[v].lambda,
                                                variants[v].encoding_trainable,
                                                config.epsilon_grid[e], stats.mean, stats.std,
                                                bound_stats.mean, bound_stats.std, num_seeds});
        }
        for (std::size_t s = 0; s < num_seeds; ++s) {
            for (std::size_t e = 0; e < num_eps; ++e) {
                result.per_seed.push_back(RobustnessSeedRow{
                    variants[v].name, variants[v].lambda, variants[v].encoding_trainable,
                    config.seeds[s], config.epsilon_grid[e],
                    worst[(v * num_seeds + s) * num_eps + e], bounds[s]});
            }
        }
    }
    return result;
}

SweepResult run_generalization_sweep(const SweepConfig &config,
                                     const ExperimentContext &context) {
    config.validate();
    std::vector<Variant> variants;
    for (const double lambda : config.lambda_grid) {
        variants.push_back(trainable_variant(lambda));
    }
    SweepResult result;
    result.models = train_models(context, variants, config.seeds);

    const std::size_t num_seeds = config.seeds.size();
    for (std::size_t v = 0; v < variants.size(); ++v) {
        std::vector<double> train_mse, test_mse, gap, bound;
        for (std::size_t s = 0; s < num_seeds; ++s) {
            const auto &metrics = result.models[v * num_seeds + s].record.metrics;
            train_mse.push_back(metrics.train_mse);
            test_mse.push_back(metrics.test_mse);
            gap.push_back(metrics.gap.gap);
            bound.push_back(metrics.lipschitz.bound_raw);
            result.per_seed.push_back(SweepSeedRow{variants[v].lambda, config.seeds[s],
                                                   metrics.train_mse, metrics.test_mse,
                                                   metrics.gap.gap,
                                                   metrics.lipschitz.bound_raw});
        }
        const auto tr = mean_std(train_mse);
        const auto te = mean_std(test_mse);
        const auto ga = mean_std(gap);
        const auto lb = mean_std(bound);
        result.rows.push_back(SweepRow{variants[v].lambda, num_seeds, tr.mean, tr.std, te.mean,
                                       te.std, ga.mean, ga.std, lb.mean, lb.std});
    }
    return result;
}

std::vector<PredictionRow> export_predictions(const CircuitLayout &layout,
                                              const ModelParams &params,
                                              const OutputScaling &scaling,
                                              const Dataset &train_set, const Dataset &test_set) {
    std::vector<PredictionRow> rows;
    rows.reserve(train_set.size() + test_set.size());
    for (const auto &sample : train_set.samples) {
        rows.push_back({"train", sample.target, predict(layout, params, scaling, sample.sequence)});
    }
    for (const auto &sample : test_set.samples) {
        rows.push_back({"test", sample.target, predict(layout, params, scaling, sample.sequence)});
    }
    return rows;
}

std::size_t median_test_mse_index(std::span<const TrainedModel> models) {
    if (models.empty()) {
        throw DomainError("median of an empty model list");
    }
    std::vector<std::size_t> order(models.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return models[a].record.metrics.test_mse < models[b].record.metrics.test_mse;
    });
    return order[(models.size() - 1) / 2];
}

std::string robustness_csv(const RobustnessResult &result) {
    std::ostringstream out;
    out << "variant,lambda,encoding_trainable,epsilon,mean_worst_case_mse,std_worst_case_mse,"
           "mean_lipschitz_bound,std_lipschitz_bound,num_seeds\n";
    for (const auto &r : result.rows) {
        out << r.variant << ',' << format_double(r.lambda) << ',' << (r.encoding_trainable ? 1 : 0)
            << ',' << format_double(r.epsilon) << ',' << format_double(r.mean_worst_case_mse)
            << ',' << format_double(r.std_worst_case_mse) << ','
            << format_double(r.mean_lipschitz_bound) << ','
            << format_double(r.std_lipschitz_bound) << ',' << r.num_seeds << '\n';
    }
    return out.str();
}

std::string robustness_seed_csv(const RobustnessResult &result) {
    std::ostringstream out;
    out << "variant,lambda,encoding_trainable,seed,epsilon,worst_case_mse,lipschitz_bound\n";
    for (const auto &r : result.per_seed) {
        out << r.variant << ',' << format_double(r.lambda) << ',' << (r.encoding_trainable ? 1 : 0)
            << ',' << r.seed << ',' << format_double(r.epsilon) << ','
            << format_double(r.worst_case_mse) << ',' << format_double(r.lipschitz_bound) << '\n';
    }
    return out.str();
}

std::string sweep_csv(const SweepResult &result) {
    std::ostringstream out;
    out << "lambda,num_seeds,mean_train_mse,std_train_mse,mean_test_mse,std_test_mse,"
           "mean_gap,std_gap,mean_lipschitz_bound,std_lipschitz_bound\n";
    for (const auto &r : result.rows) {
        out << format_double(r.lambda) << ',' << r.num_seeds << ','
            << format_double(r.mean_train_mse) << ',' << format_double(r.std_train_mse) << ','
            << format_double(r.mean_test_mse) << ',' << format_double(r.std_test_mse) << ','
            << format_double(r.mean_gap) << ',' << format_double(r.std_gap) << ','
            << format_double(r.mean_lipschitz_bound) << ','
            << format_double(r.std_lipschitz_bound) << '\n';
    }
    return out.str();
}

std::string sweep_seed_csv(const SweepResult &result) {
    std::ostringstream out;
    out << "lambda,seed,train_mse,test_mse,gap,lipschitz_bound\n";
    for (const auto &r : result.per_seed) {
        out << format_double(r.lambda) << ',' << r.seed << ',' << format_double(r.train_mse)
            << ',' << format_double(r.test_mse) << ',' << format_double(r.gap) << ','
            << format_double(r.lipschitz_bound) << '\n';
    }
    return out.str();
}

std::string predictions_csv(std::span<const PredictionRow> rows) {
    std::ostringstream out;
    out << "split,r_true,r_predicted\n";
    for (const auto &r : rows) {
        out << r.split << ',' << format_double(r.r_true) << ',' << format_double(r.r_predicted)
            << '\n';
    }
    return out.str();
}

} // namespace qrobust
