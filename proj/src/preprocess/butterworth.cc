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

#include "autocalib/preprocess/butterworth.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "autocalib/common/errors.h"

namespace autocalib {
namespace preprocess {

ButterworthFilter::ButterworthFilter(int order, double cutoff_hz,
                                     double sample_rate)
    : order_(order) {
  if (order < 1) {
    throw std::invalid_argument("Butterworth order must be positive");
  }
  if (!(cutoff_hz > 0.0) || !(sample_rate > 2.0 * cutoff_hz)) {
    throw InvalidRate("sample rate " + std::to_string(sample_rate) +
                      " Hz must exceed twice the cutoff " +
                      std::to_string(cutoff_hz) + " Hz");
  }
  const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate);
  const double k2 = k * k;
  if (order % 2 == 1) {
    // s + 1 -> K (1 + z^-1) / ((1 + K) + (K - 1) z^-1)
    const double norm = 1.0 + k;
    sections_.push_back({k / norm, k / norm, 0.0, (k - 1.0) / norm, 0.0});
  }
  // Conjugate pole pairs: s^2 + 2 sin(phi) s + 1 with phi = pi (2i + 1) / 2n.
  for (int i = 0; i < order / 2; ++i) {
    const double r = std::sin(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * order));
    const double c = 2.0 * r;
    const double norm = k2 + c * k + 1.0;
    const double b0 = k2 / norm;
    sections_.push_back({b0, 2.0 * b0, b0, 2.0 * (k2 - 1.0) / norm,
                         (k2 - c * k + 1.0) / norm});
  }
}

double ButterworthFilter::Filter(double x) {
  for (Section& s : sections_) {
    const double y = s.b0 * x + s.s1;
    s.s1 = s.b1 * x - s.a1 * y + s.s2;
    s.s2 = s.b2 * x - s.a2 * y;
    x = y;
  }
  return x;
}

void ButterworthFilter::Reset(double value) {
  // Every section has unity DC gain, so input and output both equal `value`.
  for (Section& s : sections_) {
    s.s2 = (s.b2 - s.a2) * value;
    s.s1 = (s.b1 - s.a1) * value + s.s2;
  }
}

std::vector<double> ButterworthLowpass(std::span<const double> series,
                                       double sample_rate, double cutoff_hz,
                                       int order) {
  ButterworthFilter filter(order, cutoff_hz, sample_rate);
  std::vector<double> out;
  out.reserve(series.size());
  for (double x : series) {
    out.push_back(filter.Filter(x));
  }
  return out;
}

}  // namespace preprocess
}  // namespace autocalib
