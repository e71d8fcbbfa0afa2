#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gsaal/matrix.hpp"
#include "gsaal/nn.hpp"
#include "gsaal/rng.hpp"
#include "gsaal/subspace.hpp"

namespace gsaal {

/// Trained artifact: one full-space generator, k subspace detectors with
/// their masks, and the z-score statistics of the training data.
struct GsaalModel {
    Mlp generator;  // d -> d, linear output, operates on normalized data
    std::vector<SubspaceMask> masks;
    std::vector<Mlp> detectors;  // detector i: popcount(mask_i) -> 1, sigmoid
    std::vector<double> norm_mean;
    std::vector<double> norm_std;
    std::size_t d = 0;
    std::size_t n_train = 0;
};

struct TrainConfig {
    int epochs = 100;
    int stop_epoch = -1;  // epochs with generator updates; -1 means 80% of epochs
    double detector_lr = 0.01;
    double generator_lr = 0.001;
    int batch_size = 500;  // capped at n
    double early_stop_tol = 0.02;
    int early_stop_patience = 5;
    std::uint64_t seed = 42;
};

enum class TrainPhase { Joint, ActiveLearning };

struct EpochRecord {
    double generator_loss = 0.0;  // -mean log(1 - D_j(u_j G(z))); ln 2 at equilibrium
    std::vector<double> detector_losses;  // stable BCE over the real+fake batch
    TrainPhase phase = TrainPhase::Joint;
    std::vector<std::uint8_t> detectors_frozen;  // state while the epoch ran
};

struct TrainTrace {
    std::vector<EpochRecord> epochs;
    int stop_epoch = 0;
};

/// i.i.d. uniform [0,1) noise, count x d.
Matrix sample_noise(std::size_t count, std::size_t d, Rng& rng);

/// Two-phase adversarial training: epochs below stop_epoch jointly train the
/// generator and all detectors; from stop_epoch on the generator is frozen
/// and the detectors keep refining against it. A detector freezes once its
/// epoch loss stays within early_stop_tol of ln 2 for early_stop_patience
/// consecutive epochs after having been away from that band.
std::pair<GsaalModel, TrainTrace> fit(const Matrix& data, const MaskSet& masks,
                                      const TrainConfig& cfg);

/// Outlier scores in [0,1]: 1 - (1/k) sum_i D_i(u_i x) on normalized inputs.
/// Higher means more outlying.
std::vector<double> score(const GsaalModel& model, const Matrix& points);

/// Scores on the grid (x1, x2, 0, ..., 0) in raw coordinates; entry (i, j)
/// corresponds to (grid_x1[i], grid_x2[j]).
Matrix score_grid(const GsaalModel& model, const std::vector<double>& grid_x1,
                  const std::vector<double>& grid_x2);

std::string model_to_json(const GsaalModel& model);
GsaalModel model_from_json(const std::string& text);
void save_model(const GsaalModel& model, const std::string& path);
GsaalModel load_model(const std::string& path);

}  // namespace gsaal
