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

#include <span>
#include <vector>

namespace autocalib {
namespace preprocess {

/**
 * @brief Causal Butterworth low-pass filter, discretized with the bilinear
 * transform (cutoff pre-warped so the -3 dB point lands exactly on it).
 *
 * Odd orders use one first-order section followed by biquads. One instance
 * filters one stream; it keeps per-stream state.
 */
class ButterworthFilter {
 public:
  /// Throws InvalidRate unless sample_rate > 2 * cutoff_hz.
  ButterworthFilter(int order, double cutoff_hz, double sample_rate);

  double Filter(double x);

  /// Clears the state so that a constant input `value` is already settled.
  void Reset(double value = 0.0);

  int order() const { return order_; }

 private:
  // Transposed direct form II section. First-order sections have b2 = a2 = 0.
  struct Section {
    double b0, b1, b2, a1, a2;
    double s1 = 0.0;
    double s2 = 0.0;
  };

  int order_;
  std::vector<Section> sections_;
};

/// Order-3, 2 Hz low-pass applied causally to a whole series.
std::vector<double> ButterworthLowpass(std::span<const double> series,
                                       double sample_rate,
                                       double cutoff_hz = 2.0, int order = 3);

}  // namespace preprocess
}  // namespace autocalib
