#include "gsaal/nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsaal/errors.hpp"
#include "gsaal/rng.hpp"

namespace gsaal {

namespace {

// Multiplies the batch by the weight block and adds the bias row.
Matrix affine(const Matrix& batch, const Matrix& weights) {
    const std::size_t fan_in = weights.rows - 1;
    const std::size_t fan_out = weights.cols;
    if (batch.cols != fan_in) {
        throw ShapeError("forward: batch has " + std::to_string(batch.cols) +
                         " columns, layer expects " + std::to_string(fan_in));
    }
    Matrix out(batch.rows, fan_out);
    const double* bias = weights.data.data() + fan_in * fan_out;
    for (std::size_t i = 0; i < batch.rows; ++i) {
        double* orow = out.data.data() + i * fan_out;
        for (std::size_t j = 0; j < fan_out; ++j) orow[j] = bias[j];
        const double* brow = batch.data.data() + i * fan_in;
        for (std::size_t k = 0; k < fan_in; ++k) {
            const double bv = brow[k];
            const double* wrow = weights.data.data() + k * fan_out;
            for (std::size_t j = 0; j < fan_out; ++j) orow[j] += bv * wrow[j];
        }
    }
    return out;
}

Matrix apply_relu(const Matrix& z) {
    Matrix a = z;
    for (double& v : a.data) v = v > 0.0 ? v : 0.0;
    return a;
}

Matrix apply_output(const Matrix& z, OutputActivation act) {
    if (act == OutputActivation::Linear) return z;
    Matrix a = z;
    for (double& v : a.data) v = sigmoid(v);
    return a;
}

}  // namespace

double sigmoid(double x) {
    // Split on sign to avoid overflow in exp.
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Mlp init_weights(int input_dim, int layer_width, int output_dim,
                 OutputActivation output_activation, std::uint64_t seed) {
    if (input_dim < 1 || layer_width < 1 || output_dim < 1) {
        throw DomainError("init_weights: dimensions must be positive");
    }
    Mlp net;
    net.input_dim = input_dim;
    net.layer_width = layer_width;
    net.output_dim = output_dim;
    net.output_activation = output_activation;

    Rng rng(seed);
    auto make_layer = [&rng](int fan_in, int fan_out) {
        Matrix w(static_cast<std::size_t>(fan_in) + 1, static_cast<std::size_t>(fan_out));
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        for (int i = 0; i < fan_in; ++i) {
            for (int j = 0; j < fan_out; ++j) {
                w(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                    rng.uniform(-bound, bound);
            }
        }
        return w;  // bias row stays zero
    };

    net.layer_weights.reserve(kHiddenLayers + 1);
    net.layer_weights.push_back(make_layer(input_dim, layer_width));
    for (int l = 1; l < kHiddenLayers; ++l) {
        net.layer_weights.push_back(make_layer(layer_width, layer_width));
    }
    net.layer_weights.push_back(make_layer(layer_width, output_dim));
    return net;
}

Matrix forward(const Mlp& net, const Matrix& batch) {
    Matrix a = batch;
    for (std::size_t l = 0; l + 1 < net.layer_weights.size(); ++l) {
        a = apply_relu(affine(a, net.layer_weights[l]));
    }
    return apply_output(affine(a, net.layer_weights.back()), net.output_activation);
}

ForwardCache forward_cached(const Mlp& net, const Matrix& batch) {
    ForwardCache cache;
    cache.inputs.reserve(net.layer_weights.size());
    cache.pre.reserve(net.layer_weights.size());
    Matrix a = batch;
    for (std::size_t l = 0; l + 1 < net.layer_weights.size(); ++l) {
        cache.inputs.push_back(a);
        Matrix z = affine(a, net.layer_weights[l]);
        a = apply_relu(z);
        cache.pre.push_back(std::move(z));
    }
    cache.inputs.push_back(a);
    Matrix z = affine(a, net.layer_weights.back());
    cache.output = apply_output(z, net.output_activation);
    cache.pre.push_back(std::move(z));
    return cache;
}

Gradients backward(const Mlp& net, const ForwardCache& cache, const Matrix& grad_out) {
    const std::size_t layers = net.layer_weights.size();
    if (cache.inputs.size() != layers || cache.pre.size() != layers) {
        throw ShapeError("backward: cache does not match network depth");
    }
    if (grad_out.rows != cache.output.rows || grad_out.cols != cache.output.cols) {
        throw ShapeError("backward: grad_out shape does not match cached output");
    }

    Gradients grads;
    grads.layer_grads.resize(layers);

    // delta at the output layer
    Matrix delta = grad_out;
    if (net.output_activation == OutputActivation::Sigmoid) {
        for (std::size_t i = 0; i < delta.data.size(); ++i) {
            const double p = cache.output.data[i];
            delta.data[i] *= p * (1.0 - p);
        }
    }

    for (std::size_t l = layers; l-- > 0;) {
        const Matrix& in = cache.inputs[l];
        const Matrix& w = net.layer_weights[l];
        const std::size_t fan_in = w.rows - 1;
        const std::size_t fan_out = w.cols;

        // dL/dW = [in; 1]^T * delta; last row collects the bias gradient.
        Matrix g(w.rows, w.cols);
        for (std::size_t i = 0; i < in.rows; ++i) {
            const double* irow = in.data.data() + i * fan_in;
            const double* drow = delta.data.data() + i * fan_out;
            for (std::size_t k = 0; k < fan_in; ++k) {
                const double iv = irow[k];
                double* grow = g.data.data() + k * fan_out;
                for (std::size_t j = 0; j < fan_out; ++j) grow[j] += iv * drow[j];
            }
            double* brow = g.data.data() + fan_in * fan_out;
            for (std::size_t j = 0; j < fan_out; ++j) brow[j] += drow[j];
        }
        grads.layer_grads[l] = std::move(g);

        // delta for the layer below: (delta * W[:fan_in]^T) masked by ReLU'.
        Matrix prev(delta.rows, fan_in);
        for (std::size_t i = 0; i < delta.rows; ++i) {
            const double* drow = delta.data.data() + i * fan_out;
            double* prow = prev.data.data() + i * fan_in;
            for (std::size_t k = 0; k < fan_in; ++k) {
                const double* wrow = w.data.data() + k * fan_out;
                double acc = 0.0;
                for (std::size_t j = 0; j < fan_out; ++j) acc += drow[j] * wrow[j];
                prow[k] = acc;
            }
        }
        if (l > 0) {
            const Matrix& z = cache.pre[l - 1];
            for (std::size_t i = 0; i < prev.data.size(); ++i) {
                if (z.data[i] <= 0.0) prev.data[i] = 0.0;
            }
        }
        delta = std::move(prev);
    }
    grads.input_grad = std::move(delta);
    return grads;
}

void sgd_step(Mlp& net, const Gradients& grads, const SgdConfig& cfg, StepDirection direction) {
    if (cfg.learning_rate <= 0.0) throw ConfigError("sgd_step: learning_rate must be positive");
    if (cfg.batch_size < 1) throw ConfigError("sgd_step: batch_size must be at least 1");
    sgd_step(net, grads, cfg.learning_rate, direction);
}

void sgd_step(Mlp& net, const Gradients& grads, double learning_rate, StepDirection direction) {
    if (grads.layer_grads.size() != net.layer_weights.size()) {
        throw ShapeError("sgd_step: gradient layer count does not match network");
    }
    const double step = direction == StepDirection::Ascend ? learning_rate : -learning_rate;
    for (std::size_t l = 0; l < net.layer_weights.size(); ++l) {
        Matrix& w = net.layer_weights[l];
        const Matrix& g = grads.layer_grads[l];
        if (g.rows != w.rows || g.cols != w.cols) {
            throw ShapeError("sgd_step: gradient shape mismatch at layer " + std::to_string(l));
        }
        for (std::size_t i = 0; i < w.data.size(); ++i) {
            if (!std::isfinite(g.data[i])) {
                throw TrainingError("sgd_step: non-finite gradient at layer " + std::to_string(l));
            }
            w.data[i] += step * g.data[i];
        }
    }
}

double bce_loss(const std::vector<double>& predictions, const std::vector<double>& labels) {
    if (predictions.empty()) throw DomainError("bce_loss: empty input");
    if (predictions.size() != labels.size()) {
        throw ShapeError("bce_loss: predictions and labels differ in length");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double p = std::clamp(predictions[i], kSigmoidClamp, 1.0 - kSigmoidClamp);
        acc += labels[i] * std::log(p) + (1.0 - labels[i]) * std::log(1.0 - p);
    }
    return -acc / static_cast<double>(predictions.size());
}

}  // namespace gsaal
