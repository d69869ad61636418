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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "autocalib/offline/mlp.h"
#include "autocalib/offline/regression.h"

namespace autocalib {
namespace offline {

struct FoldMetrics {
  std::size_t fold = 0;
  std::size_t test_size = 0;
  double mae = 0.0;
  double rmse = 0.0;
};

struct CvReport {
  std::string model;
  std::vector<FoldMetrics> folds;
  double mae = 0.0;   // mean over folds
  double rmse = 0.0;  // mean over folds
};

using Fitter = std::function<std::unique_ptr<RegressionModel>(
    std::span<const RegressionSample> train)>;

/// Fold index per sample: a seeded shuffle dealt round-robin into `folds`.
std::vector<std::size_t> AssignFolds(std::size_t n, std::size_t folds,
                                     std::uint64_t seed);

/// k-fold cross-validation. `fit` only ever sees the training part of each
/// split; errors are measured on the held-out fold. Folds run on up to
/// `threads` workers (0 = one per hardware thread), so `fit` must be safe to
/// call concurrently; results do not depend on the thread count. Throws
/// TooFewSamples when there are fewer samples than folds.
CvReport CrossValidate(std::span<const RegressionSample> samples,
                       std::size_t folds, std::uint64_t seed,
                       const std::string& model_name, const Fitter& fit,
                       std::size_t threads = 0);

Fitter MlpFitter(const MlpHyper& hyper);
Fitter LinearFitter();

/// CSV with header `model,fold,mae,rmse`; the aggregate row uses fold `mean`.
std::string CvReportCsv(std::span<const CvReport> reports);

}  // namespace offline
}  // namespace autocalib
