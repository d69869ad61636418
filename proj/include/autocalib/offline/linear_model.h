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

#pragma once

#include <array>
#include <span>

#include "autocalib/offline/regression.h"

namespace autocalib {
namespace offline {

/// acc = w0 + w1 * cmd + w2 * v
class LinearModel : public RegressionModel {
 public:
  explicit LinearModel(std::array<double, 3> coefficients)
      : w_(coefficients) {}

  double Predict(double cmd, double v) const override {
    return w_[0] + w_[1] * cmd + w_[2] * v;
  }
  const std::array<double, 3>& coefficients() const { return w_; }

 private:
  std::array<double, 3> w_;
};

/// Ordinary least squares. Throws TooFewSamples below 3 samples and Singular
/// when the design matrix [1, cmd, v] is rank deficient.
LinearModel TrainLinear(std::span<const RegressionSample> samples);

}  // namespace offline
}  // namespace autocalib
