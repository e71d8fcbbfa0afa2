#include "gsaal/gsaal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "gsaal/errors.hpp"

namespace gsaal {

namespace {

using nlohmann::json;

const double kLn2 = std::log(2.0);

double clamp_prob(double p) {
    return std::clamp(p, kSigmoidClamp, 1.0 - kSigmoidClamp);
}

// Runs fn(0..count-1) on up to hardware_concurrency threads. Tasks must not
// share mutable state; results are independent of the schedule.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            std::size_t i;
            while ((i = next.fetch_add(1)) < count) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

Matrix normalize(const Matrix& points, const std::vector<double>& mean,
                 const std::vector<double>& stddev) {
    Matrix out(points.rows, points.cols);
    for (std::size_t i = 0; i < points.rows; ++i) {
        const double* src = points.data.data() + i * points.cols;
        double* dst = out.data.data() + i * points.cols;
        for (std::size_t j = 0; j < points.cols; ++j) dst[j] = (src[j] - mean[j]) / stddev[j];
    }
    return out;
}

Matrix gather_rows(const Matrix& data, std::span<const std::size_t> rows) {
    Matrix out(rows.size(), data.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy_n(data.row(rows[i]).data(), data.cols, out.row(i).data());
    }
    return out;
}

void validate_masks(const MaskSet& masks, std::size_t d) {
    if (masks.masks.empty()) throw ConfigError("fit: mask set is empty");
    if (masks.dimension != d) {
        throw ShapeError("fit: mask dimension " + std::to_string(masks.dimension) +
                         " does not match data dimension " + std::to_string(d));
    }
    std::set<std::string> seen;
    for (const SubspaceMask& mask : masks.masks) {
        if (mask.dimension() != d) throw ShapeError("fit: mask of wrong length");
        const std::size_t pc = mask.popcount();
        if (pc == 0 || pc == d) throw ConfigError("fit: mask must select a proper subset");
        if (!seen.insert(mask.to_string()).second) throw ConfigError("fit: duplicate mask");
    }
}

json net_to_json(const Mlp& net) {
    json j;
    j["input_dim"] = net.input_dim;
    j["layer_width"] = net.layer_width;
    j["output_dim"] = net.output_dim;
    j["output_activation"] =
        net.output_activation == OutputActivation::Sigmoid ? "sigmoid" : "linear";
    j["layers"] = json::array();
    for (const Matrix& w : net.layer_weights) {
        json layer;
        layer["rows"] = w.rows;
        layer["cols"] = w.cols;
        layer["weights"] = w.data;
        j["layers"].push_back(std::move(layer));
    }
    return j;
}

Mlp net_from_json(const json& j) {
    Mlp net;
    net.input_dim = j.at("input_dim").get<int>();
    net.layer_width = j.at("layer_width").get<int>();
    net.output_dim = j.at("output_dim").get<int>();
    const std::string act = j.at("output_activation").get<std::string>();
    if (act == "sigmoid") {
        net.output_activation = OutputActivation::Sigmoid;
    } else if (act == "linear") {
        net.output_activation = OutputActivation::Linear;
    } else {
        throw ParseError("model: unknown output_activation '" + act + "'");
    }
    for (const json& layer : j.at("layers")) {
        Matrix w(layer.at("rows").get<std::size_t>(), layer.at("cols").get<std::size_t>());
        const auto& weights = layer.at("weights");
        if (weights.size() != w.data.size()) throw ParseError("model: layer size mismatch");
        for (std::size_t i = 0; i < w.data.size(); ++i) w.data[i] = weights[i].get<double>();
        net.layer_weights.push_back(std::move(w));
    }
    if (net.layer_weights.size() != kHiddenLayers + 1) {
        throw ParseError("model: expected " + std::to_string(kHiddenLayers + 1) + " layers");
    }
    std::size_t expect_in = static_cast<std::size_t>(net.input_dim);
    for (const Matrix& w : net.layer_weights) {
        if (w.rows != expect_in + 1) throw ParseError("model: layer shapes do not compose");
        expect_in = w.cols;
        if (!all_finite(w)) throw ParseError("model: non-finite weight");
    }
    if (expect_in != static_cast<std::size_t>(net.output_dim)) {
        throw ParseError("model: output dimension mismatch");
    }
    return net;
}

}  // namespace

Matrix sample_noise(std::size_t count, std::size_t d, Rng& rng) {
    if (count < 1) throw DomainError("sample_noise: count must be positive");
    Matrix z(count, d);
    for (double& v : z.data) v = rng.uniform01();
    return z;
}

std::pair<GsaalModel, TrainTrace> fit(const Matrix& data, const MaskSet& masks,
                                      const TrainConfig& cfg) {
    const std::size_t n = data.rows;
    const std::size_t d = data.cols;
    if (n < 2) throw DomainError("fit: need at least 2 training points");
    if (d < 2) throw DomainError("fit: need at least 2 features");
    if (!all_finite(data)) throw DomainError("fit: training data contains non-finite values");
    validate_masks(masks, d);
    if (cfg.epochs < 1) throw ConfigError("fit: epochs must be positive");
    const int stop_epoch = cfg.stop_epoch < 0 ? cfg.epochs * 4 / 5 : cfg.stop_epoch;
    if (stop_epoch > cfg.epochs) throw ConfigError("fit: stop_epoch exceeds epochs");
    if (cfg.detector_lr <= 0.0 || cfg.generator_lr <= 0.0) {
        throw ConfigError("fit: learning rates must be positive");
    }
    if (cfg.batch_size < 1) throw ConfigError("fit: batch_size must be positive");
    if (cfg.early_stop_tol <= 0.0 || cfg.early_stop_patience < 1) {
        throw ConfigError("fit: early stop parameters must be positive");
    }

    const std::size_t k = masks.masks.size();
    const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), n);
    const int width = std::max(4, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))));

    GsaalModel model;
    model.d = d;
    model.n_train = n;
    model.masks = masks.masks;
    column_stats(data, model.norm_mean, model.norm_std);
    for (double& s : model.norm_std) {
        if (s < 1e-9) s = 1.0;  // constant feature
    }
    const Matrix x = normalize(data, model.norm_mean, model.norm_std);

    Rng rng(cfg.seed);
    // The generator starts as the identity on the noise cube with an affine
    // output mapping [0,1] to zero mean and unit variance, so the fake
    // distribution sits on the normalized data from the first step. A cold
    // random start leaves the detectors an easy win the generator never
    // recovers from at these learning rates.
    model.generator = init_weights(static_cast<int>(d), static_cast<int>(d),
                                   static_cast<int>(d), OutputActivation::Linear, rng.fork_seed());
    for (std::size_t l = 0; l < model.generator.layer_weights.size(); ++l) {
        Matrix& w = model.generator.layer_weights[l];
        std::fill(w.data.begin(), w.data.end(), 0.0);
        const bool output_layer = l + 1 == model.generator.layer_weights.size();
        const double gain = output_layer ? std::sqrt(12.0) : 1.0;  // Var(U(0,1)) = 1/12
        for (std::size_t i = 0; i < d; ++i) w(i, i) = gain;
        if (output_layer) {
            for (std::size_t j = 0; j < d; ++j) w(d, j) = -std::sqrt(3.0);
        }
    }
    model.detectors.reserve(k);
    for (const SubspaceMask& mask : masks.masks) {
        model.detectors.push_back(init_weights(static_cast<int>(mask.popcount()), width, 1,
                                               OutputActivation::Sigmoid, rng.fork_seed()));
    }

    SgdConfig detector_sgd{cfg.detector_lr, static_cast<int>(batch), cfg.seed};
    SgdConfig generator_sgd{cfg.generator_lr, static_cast<int>(batch), cfg.seed};

    TrainTrace trace;
    trace.stop_epoch = stop_epoch;
    std::vector<std::uint8_t> frozen(k, 0);
    std::vector<int> in_band_streak(k, 0);
    // freezing arms only once a detector's loss has left the optimum band;
    // fresh nets start near ln 2 without having learned anything
    std::vector<std::uint8_t> armed(k, 0);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const TrainPhase phase =
            epoch < stop_epoch ? TrainPhase::Joint : TrainPhase::ActiveLearning;
        if (phase == TrainPhase::ActiveLearning &&
            std::all_of(frozen.begin(), frozen.end(), [](std::uint8_t f) { return f != 0; })) {
            break;  // nothing left to train
        }

        rng.shuffle(order);
        std::vector<double> loss_sum(k, 0.0);
        std::vector<double> loss_count(k, 0.0);
        double gen_loss_sum = 0.0;
        double gen_loss_count = 0.0;

        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t m_b = std::min(batch, n - start);
            const Matrix xb = gather_rows(x, {order.data() + start, m_b});
            const Matrix z = sample_noise(m_b, d, rng);
            const ForwardCache gcache = forward_cached(model.generator, z);
            const Matrix& fakes = gcache.output;

            // each detector ascends its value-function gradient on real vs generated rows
            std::vector<double> batch_fake_logsum(k, 0.0);
            parallel_for(k, [&](std::size_t j) {
                Mlp& det = model.detectors[j];
                const Matrix input = vstack(project(model.masks[j], xb),
                                            project(model.masks[j], fakes));
                ForwardCache cache = forward_cached(det, input);

                double log_loss = 0.0;
                double fake_logsum = 0.0;
                Matrix grad_out(input.rows, 1);
                for (std::size_t i = 0; i < input.rows; ++i) {
                    const double p = clamp_prob(cache.output.data[i]);
                    if (i < m_b) {
                        log_loss -= std::log(p);
                        grad_out.data[i] = 1.0 / (static_cast<double>(m_b) * p);
                    } else {
                        log_loss -= std::log(1.0 - p);
                        fake_logsum += std::log(1.0 - p);
                        grad_out.data[i] = -1.0 / (static_cast<double>(m_b) * (1.0 - p));
                    }
                }
                loss_sum[j] += log_loss;
                loss_count[j] += static_cast<double>(input.rows);
                batch_fake_logsum[j] = fake_logsum;

                if (!frozen[j]) {
                    Gradients grads = backward(det, cache, grad_out);
                    sgd_step(det, grads, detector_sgd, StepDirection::Ascend);
                }
            });
            for (std::size_t j = 0; j < k; ++j) gen_loss_sum -= batch_fake_logsum[j];
            gen_loss_count += static_cast<double>(k * m_b);

            // the generator descends the mean saturating loss through every detector
            if (phase == TrainPhase::Joint) {
                std::vector<Matrix> input_grads(k);
                parallel_for(k, [&](std::size_t j) {
                    const Mlp& det = model.detectors[j];
                    ForwardCache dcache =
                        forward_cached(det, project(model.masks[j], gcache.output));
                    Matrix grad_out(m_b, 1);
                    const double scale = static_cast<double>(k) * static_cast<double>(m_b);
                    for (std::size_t i = 0; i < m_b; ++i) {
                        const double p = clamp_prob(dcache.output.data[i]);
                        grad_out.data[i] = -1.0 / (scale * (1.0 - p));
                    }
                    input_grads[j] = backward(det, dcache, grad_out).input_grad;
                });
                Matrix dfakes(m_b, d);
                for (std::size_t j = 0; j < k; ++j) {
                    const Matrix& g = input_grads[j];
                    std::size_t col = 0;
                    for (std::size_t f = 0; f < d; ++f) {
                        if (!model.masks[j].selected[f]) continue;
                        for (std::size_t i = 0; i < m_b; ++i) dfakes(i, f) += g(i, col);
                        ++col;
                    }
                }
                Gradients ggrads = backward(model.generator, gcache, dfakes);
                sgd_step(model.generator, ggrads, generator_sgd, StepDirection::Descend);
            }
        }

        EpochRecord record;
        record.phase = phase;
        record.detectors_frozen = frozen;
        record.generator_loss = gen_loss_sum / gen_loss_count;
        record.detector_losses.resize(k);
        for (std::size_t j = 0; j < k; ++j) {
            record.detector_losses[j] = loss_sum[j] / loss_count[j];
            if (!std::isfinite(record.detector_losses[j])) {
                throw TrainingError("fit: non-finite loss for detector " + std::to_string(j) +
                                    " at epoch " + std::to_string(epoch));
            }
        }
        if (!std::isfinite(record.generator_loss)) {
            throw TrainingError("fit: non-finite generator loss at epoch " +
                                std::to_string(epoch));
        }
        trace.epochs.push_back(record);

        for (std::size_t j = 0; j < k; ++j) {
            if (frozen[j]) continue;
            const bool in_band = std::abs(record.detector_losses[j] - kLn2) < cfg.early_stop_tol;
            if (!in_band) armed[j] = 1;
            if (armed[j] && in_band) {
                if (++in_band_streak[j] >= cfg.early_stop_patience) frozen[j] = 1;
            } else {
                in_band_streak[j] = 0;
            }
        }
    }
    return {std::move(model), std::move(trace)};
}

std::vector<double> score(const GsaalModel& model, const Matrix& points) {
    if (points.cols != model.d) {
        throw ShapeError("score: points have " + std::to_string(points.cols) +
                         " columns, model expects " + std::to_string(model.d));
    }
    std::vector<double> scores(points.rows, 0.0);
    if (points.rows == 0) return scores;
    const Matrix x = normalize(points, model.norm_mean, model.norm_std);
    for (std::size_t j = 0; j < model.detectors.size(); ++j) {
        const Matrix out = forward(model.detectors[j], project(model.masks[j], x));
        for (std::size_t i = 0; i < points.rows; ++i) scores[i] += out.data[i];
    }
    const double k = static_cast<double>(model.detectors.size());
    for (double& s : scores) s = 1.0 - s / k;
    return scores;
}

Matrix score_grid(const GsaalModel& model, const std::vector<double>& grid_x1,
                  const std::vector<double>& grid_x2) {
    if (model.d < 2) throw DomainError("score_grid: model dimension must be at least 2");
    Matrix points(grid_x1.size() * grid_x2.size(), model.d);
    std::size_t row = 0;
    for (double x1 : grid_x1) {
        for (double x2 : grid_x2) {
            points(row, 0) = x1;
            points(row, 1) = x2;
            ++row;
        }
    }
    const std::vector<double> s = score(model, points);
    Matrix grid(grid_x1.size(), grid_x2.size());
    grid.data.assign(s.begin(), s.end());
    return grid;
}

std::string model_to_json(const GsaalModel& model) {
    json j;
    j["format_version"] = 1;
    j["d"] = model.d;
    j["n_train"] = model.n_train;
    j["norm_mean"] = model.norm_mean;
    j["norm_std"] = model.norm_std;
    j["masks"] = json::array();
    for (const SubspaceMask& mask : model.masks) j["masks"].push_back(mask.to_string());
    j["generator"] = net_to_json(model.generator);
    j["detectors"] = json::array();
    for (const Mlp& det : model.detectors) j["detectors"].push_back(net_to_json(det));
    return j.dump();
}

GsaalModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("model: invalid JSON: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != 1) {
            throw ParseError("model: unsupported format_version");
        }
        GsaalModel model;
        model.d = j.at("d").get<std::size_t>();
        model.n_train = j.at("n_train").get<std::size_t>();
        model.norm_mean = j.at("norm_mean").get<std::vector<double>>();
        model.norm_std = j.at("norm_std").get<std::vector<double>>();
        for (const json& m : j.at("masks")) {
            model.masks.push_back(SubspaceMask::from_string(m.get<std::string>()));
        }
        model.generator = net_from_json(j.at("generator"));
        for (const json& dj : j.at("detectors")) model.detectors.push_back(net_from_json(dj));

        if (model.masks.empty() || model.masks.size() != model.detectors.size()) {
            throw ParseError("model: masks and detectors do not pair up");
        }
        if (model.norm_mean.size() != model.d || model.norm_std.size() != model.d) {
            throw ParseError("model: normalization stats do not match dimension");
        }
        for (double s : model.norm_std) {
            if (!(s > 0.0)) throw ParseError("model: norm_std entries must be positive");
        }
        for (std::size_t i = 0; i < model.masks.size(); ++i) {
            if (model.masks[i].dimension() != model.d) throw ParseError("model: mask length");
            if (static_cast<std::size_t>(model.detectors[i].input_dim) !=
                model.masks[i].popcount()) {
                throw ParseError("model: detector input does not match mask popcount");
            }
        }
        return model;
    } catch (const json::exception& e) {
        throw ParseError(std::string("model: missing or mistyped field: ") + e.what());
    }
}

void save_model(const GsaalModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_model: cannot open " + path);
    out << model_to_json(model) << '\n';
    if (!out) throw IoError("save_model: failed writing " + path);
}

GsaalModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_model: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

}  // namespace gsaal
