/******************************************************************************
 * Copyright 2026 The Autocalib Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

/**
 * @file mlp.h
 * @brief Small fully connected regression network trained with Adam on MSE.
 *
 * Inputs (cmd, v) and the target are standardized with statistics of the
 * training set; hidden units use the logistic sigmoid and the output is
 * linear. The default {2, 16, 1} is the classic input/hidden/output network.
 */

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autocalib/offline/regression.h"

namespace autocalib {
namespace offline {

struct MlpHyper {
  std::vector<std::size_t> hidden = {16};
  std::size_t epochs = 500;
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  std::uint64_t seed = 1;
};

class MlpModel : public RegressionModel {
 public:
  struct Layer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights;  // out x in, row-major
    std::vector<double> bias;     // out
    bool operator==(const Layer&) const = default;
  };

  MlpModel() = default;
  MlpModel(std::vector<Layer> layers, std::array<double, 2> input_mean,
           std::array<double, 2> input_std, double output_mean,
           double output_std);

  double Predict(double cmd, double v) const override;

  std::vector<std::size_t> LayerSizes() const;
  const std::vector<Layer>& layers() const { return layers_; }

  /// Text form, lossless (17 significant digits).
  std::string Save() const;
  static MlpModel Load(std::string_view text);

  bool operator==(const MlpModel& other) const {
    return layers_ == other.layers_ && input_mean_ == other.input_mean_ &&
           input_std_ == other.input_std_ &&
           output_mean_ == other.output_mean_ &&
           output_std_ == other.output_std_;
  }

 private:
  std::vector<Layer> layers_;
  std::array<double, 2> input_mean_ = {0.0, 0.0};
  std::array<double, 2> input_std_ = {1.0, 1.0};
  double output_mean_ = 0.0;
  double output_std_ = 1.0;
};

/// Trains a network on `samples` (at least 50). Deterministic for a given
/// seed. When every target is identical a constant model is returned and a
/// warning logged. If `epoch_mse` is non-null it receives the raw-unit
/// training MSE after every epoch.
MlpModel TrainMlp(std::span<const RegressionSample> samples,
                  const MlpHyper& hyper,
                  std::vector<double>* epoch_mse = nullptr);

}  // namespace offline
}  // namespace autocalib
