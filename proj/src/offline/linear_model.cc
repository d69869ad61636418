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

#include "autocalib/offline/linear_model.h"

#include <Eigen/Dense>

#include "autocalib/common/errors.h"

namespace autocalib {
namespace offline {

LinearModel TrainLinear(std::span<const RegressionSample> samples) {
  if (samples.size() < 3) {
    throw TooFewSamples("linear regression needs at least 3 samples");
  }
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = s.cmd;
    design(i, 2) = s.v;
    target(i) = s.acc;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) {
    throw Singular("design matrix has rank " + std::to_string(qr.rank()) +
                   " < 3");
  }
  const Eigen::Vector3d w = qr.solve(target);
  return LinearModel({w(0), w(1), w(2)});
}

}  // namespace offline
}  // namespace autocalib
