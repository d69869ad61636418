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

#include "autocalib/offline/cross_validation.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "autocalib/common/errors.h"
#include "autocalib/offline/linear_model.h"
#include "autocalib/table/table_io.h"

namespace autocalib {
namespace offline {

std::vector<std::size_t> AssignFolds(std::size_t n, std::size_t folds,
                                     std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> fold(n);
  for (std::size_t k = 0; k < n; ++k) {
    fold[order[k]] = k % folds;
  }
  return fold;
}

CvReport CrossValidate(std::span<const RegressionSample> samples,
                       std::size_t folds, std::uint64_t seed,
                       const std::string& model_name, const Fitter& fit,
                       std::size_t threads) {
  if (folds < 2 || samples.size() < folds) {
    throw TooFewSamples("cross-validation needs at least " +
                        std::to_string(std::max<std::size_t>(folds, 2)) +
                        " samples and 2 folds");
  }
  const std::vector<std::size_t> assignment =
      AssignFolds(samples.size(), folds, seed);
  CvReport report;
  report.model = model_name;
  report.folds.resize(folds);

  const auto run_fold = [&](std::size_t f) {
    std::vector<RegressionSample> train;
    std::vector<RegressionSample> test;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      (assignment[i] == f ? test : train).push_back(samples[i]);
    }
    const std::unique_ptr<RegressionModel> model = fit(train);
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    for (const auto& s : test) {
      const double e = model->Predict(s.cmd, s.v) - s.acc;
      abs_sum += std::abs(e);
      sq_sum += e * e;
    }
    const double m = static_cast<double>(test.size());
    report.folds[f] = {f, test.size(), abs_sum / m, std::sqrt(sq_sum / m)};
  };

  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min(threads, folds);
  if (threads == 1) {
    for (std::size_t f = 0; f < folds; ++f) run_fold(f);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(folds);
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t f = next++; f < folds; f = next++) {
          try {
            run_fold(f);
          } catch (...) {
            errors[f] = std::current_exception();
          }
        }
      });
    }
    for (std::thread& w : workers) w.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (const FoldMetrics& fm : report.folds) {
    report.mae += fm.mae;
    report.rmse += fm.rmse;
  }
  report.mae /= static_cast<double>(folds);
  report.rmse /= static_cast<double>(folds);
  return report;
}

Fitter MlpFitter(const MlpHyper& hyper) {
  return [hyper](std::span<const RegressionSample> train) {
    return std::make_unique<MlpModel>(TrainMlp(train, hyper));
  };
}

Fitter LinearFitter() {
  return [](std::span<const RegressionSample> train) {
    return std::make_unique<LinearModel>(TrainLinear(train));
  };
}

std::string CvReportCsv(std::span<const CvReport> reports) {
  using table::FormatNumber;
  std::string out = "model,fold,mae,rmse\n";
  for (const CvReport& r : reports) {
    for (const FoldMetrics& f : r.folds) {
      out += r.model + ',' + std::to_string(f.fold) + ',' +
             FormatNumber(f.mae) + ',' + FormatNumber(f.rmse) + '\n';
    }
    out += r.model + ",mean," + FormatNumber(r.mae) + ',' +
           FormatNumber(r.rmse) + '\n';
  }
  return out;
}

}  // namespace offline
}  // namespace autocalib
