#pragma once

#include <cstdint>
#include <vector>

#include "gsaal/matrix.hpp"

namespace gsaal {

enum class OutputActivation { Sigmoid, Linear };
enum class StepDirection { Ascend, Descend };

constexpr int kHiddenLayers = 4;
constexpr double kSigmoidClamp = 1e-7;

/// Fully connected network with four ReLU hidden layers of equal width and a
/// single output layer. Each weight matrix is (fan_in + 1) x fan_out with the
/// bias in the last row.
struct Mlp {
    std::vector<Matrix> layer_weights;  // size kHiddenLayers + 1
    OutputActivation output_activation = OutputActivation::Sigmoid;
    int input_dim = 0;
    int layer_width = 0;
    int output_dim = 0;
};

struct SgdConfig {
    double learning_rate = 0.01;
    int batch_size = 500;
    std::uint64_t seed = 42;
};

/// Per-layer activations kept by forward_cached for the backward pass.
struct ForwardCache {
    std::vector<Matrix> inputs;  // inputs[l] feeds layer l; inputs[0] is the batch
    std::vector<Matrix> pre;     // pre-activation of each layer
    Matrix output;               // post-activation of the last layer
};

/// Gradients produced by backward: one matrix per layer (bias row included)
/// plus the gradient with respect to the batch itself, used to chain nets.
struct Gradients {
    std::vector<Matrix> layer_grads;
    Matrix input_grad;
};

/// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases.
/// Deterministic for a fixed seed.
Mlp init_weights(int input_dim, int layer_width, int output_dim,
                 OutputActivation output_activation, std::uint64_t seed);

Matrix forward(const Mlp& net, const Matrix& batch);
ForwardCache forward_cached(const Mlp& net, const Matrix& batch);

/// Backpropagates grad_out (d loss / d output, n x output_dim) through the
/// cached forward pass.
Gradients backward(const Mlp& net, const ForwardCache& cache, const Matrix& grad_out);

/// W <- W + lr * grad (Ascend) or W <- W - lr * grad (Descend).
/// Throws TrainingError naming the layer if a gradient entry is not finite.
void sgd_step(Mlp& net, const Gradients& grads, double learning_rate, StepDirection direction);
void sgd_step(Mlp& net, const Gradients& grads, const SgdConfig& cfg, StepDirection direction);

/// Mean binary cross entropy with predictions clamped to
/// [kSigmoidClamp, 1 - kSigmoidClamp]. Labels are 0/1.
double bce_loss(const std::vector<double>& predictions, const std::vector<double>& labels);

double sigmoid(double x);

}  // namespace gsaal
