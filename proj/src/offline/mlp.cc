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

#include "autocalib/offline/mlp.h"

#include <Eigen/Dense>
#include <glog/logging.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "autocalib/common/errors.h"

namespace autocalib {
namespace offline {
namespace {

constexpr std::size_t kMinSamples = 50;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr float kAdamB1 = 0.9f;
constexpr float kAdamB2 = 0.999f;
constexpr float kAdamEps = 1e-8f;

// Training runs in single precision: the sigmoid's exp vectorizes in float,
// which halves training time with no measurable loss in fit quality.
using Mat = Eigen::MatrixXf;
using Vec = Eigen::VectorXf;
using RowVec = Eigen::RowVectorXf;

inline double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

MlpModel::MlpModel(std::vector<Layer> layers, std::array<double, 2> input_mean,
                   std::array<double, 2> input_std, double output_mean,
                   double output_std)
    : layers_(std::move(layers)),
      input_mean_(input_mean),
      input_std_(input_std),
      output_mean_(output_mean),
      output_std_(output_std) {}

double MlpModel::Predict(double cmd, double v) const {
  if (layers_.empty()) {
    return output_mean_;
  }
  std::vector<double> a = {(cmd - input_mean_[0]) / input_std_[0],
                           (v - input_mean_[1]) / input_std_[1]};
  std::vector<double> z;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    z.assign(layer.out, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      double s = layer.bias[o];
      for (std::size_t i = 0; i < layer.in; ++i) {
        s += layer.weights[o * layer.in + i] * a[i];
      }
      z[o] = (l + 1 < layers_.size()) ? Sigmoid(s) : s;
    }
    a.swap(z);
  }
  return output_mean_ + output_std_ * a[0];
}

std::vector<std::size_t> MlpModel::LayerSizes() const {
  std::vector<std::size_t> sizes;
  if (layers_.empty()) {
    return sizes;
  }
  sizes.push_back(layers_.front().in);
  for (const Layer& l : layers_) {
    sizes.push_back(l.out);
  }
  return sizes;
}

std::string MlpModel::Save() const {
  std::ostringstream out;
  char buf[64];
  const auto num = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  out << "mlp 1\nlayers:";
  for (std::size_t s : LayerSizes()) {
    out << ' ' << s;
  }
  out << "\ninput_mean: " << num(input_mean_[0]) << ' ' << num(input_mean_[1])
      << "\ninput_std: " << num(input_std_[0]) << ' ' << num(input_std_[1])
      << "\noutput_mean: " << num(output_mean_)
      << "\noutput_std: " << num(output_std_) << '\n';
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    out << "layer " << l << '\n';
    for (std::size_t o = 0; o < layer.out; ++o) {
      for (std::size_t i = 0; i < layer.in; ++i) {
        out << (i ? " " : "") << num(layer.weights[o * layer.in + i]);
      }
      out << '\n';
    }
    for (std::size_t o = 0; o < layer.out; ++o) {
      out << (o ? " " : "") << num(layer.bias[o]);
    }
    out << '\n';
  }
  return out.str();
}

MlpModel MlpModel::Load(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  const auto next = [&]() -> std::istringstream {
    if (!std::getline(in, line)) {
      throw ParseError(line_no + 1, "unexpected end of model file");
    }
    ++line_no;
    return std::istringstream(line);
  };
  const auto expect_key = [&](std::istringstream& ls, const char* key) {
    std::string k;
    ls >> k;
    if (k != key) {
      throw ParseError(line_no, std::string("expected '") + key + "'");
    }
  };
  const auto read = [&](std::istringstream& ls) {
    double x;
    if (!(ls >> x)) {
      throw ParseError(line_no, "expected a number");
    }
    return x;
  };
  {
    auto ls = next();
    std::string tag;
    int version = 0;
    ls >> tag >> version;
    if (tag != "mlp" || version != 1) {
      throw ParseError(line_no, "not an mlp v1 model");
    }
  }
  std::vector<std::size_t> sizes;
  {
    auto ls = next();
    expect_key(ls, "layers:");
    std::size_t s;
    while (ls >> s) {
      sizes.push_back(s);
    }
    if (sizes.size() < 2 || sizes.front() != 2 || sizes.back() != 1) {
      throw ParseError(line_no, "layer sizes must run from 2 inputs to 1 output");
    }
  }
  std::array<double, 2> in_mean{}, in_std{};
  double out_mean, out_std;
  {
    auto ls = next();
    expect_key(ls, "input_mean:");
    in_mean = {read(ls), read(ls)};
  }
  {
    auto ls = next();
    expect_key(ls, "input_std:");
    in_std = {read(ls), read(ls)};
  }
  {
    auto ls = next();
    expect_key(ls, "output_mean:");
    out_mean = read(ls);
  }
  {
    auto ls = next();
    expect_key(ls, "output_std:");
    out_std = read(ls);
  }
  std::vector<Layer> layers;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    {
      auto ls = next();
      std::string k;
      std::size_t idx;
      if (!(ls >> k >> idx) || k != "layer" || idx != l) {
        throw ParseError(line_no, "expected 'layer " + std::to_string(l) + "'");
      }
    }
    Layer layer{sizes[l], sizes[l + 1], {}, {}};
    for (std::size_t o = 0; o < layer.out; ++o) {
      auto ls = next();
      for (std::size_t i = 0; i < layer.in; ++i) {
        layer.weights.push_back(read(ls));
      }
    }
    auto ls = next();
    for (std::size_t o = 0; o < layer.out; ++o) {
      layer.bias.push_back(read(ls));
    }
    layers.push_back(std::move(layer));
  }
  return MlpModel(std::move(layers), in_mean, in_std, out_mean, out_std);
}

MlpModel TrainMlp(std::span<const RegressionSample> samples,
                  const MlpHyper& hyper, std::vector<double>* epoch_mse) {
  if (samples.size() < kMinSamples) {
    throw TooFewSamples("MLP training needs at least " +
                        std::to_string(kMinSamples) + " samples, got " +
                        std::to_string(samples.size()));
  }
  const double n = static_cast<double>(samples.size());
  std::array<double, 2> in_mean{0.0, 0.0}, in_std{0.0, 0.0};
  double out_mean = 0.0, out_var = 0.0;
  for (const auto& s : samples) {
    in_mean[0] += s.cmd;
    in_mean[1] += s.v;
    out_mean += s.acc;
  }
  in_mean[0] /= n;
  in_mean[1] /= n;
  out_mean /= n;
  for (const auto& s : samples) {
    in_std[0] += (s.cmd - in_mean[0]) * (s.cmd - in_mean[0]);
    in_std[1] += (s.v - in_mean[1]) * (s.v - in_mean[1]);
    out_var += (s.acc - out_mean) * (s.acc - out_mean);
  }
  for (double& sd : in_std) {
    sd = std::sqrt(sd / n);
    if (sd == 0.0) {
      sd = 1.0;
    }
  }
  const double out_std = std::sqrt(out_var / n);
  if (out_std == 0.0) {
    LOG(WARNING) << "all " << samples.size()
                 << " training targets equal " << out_mean
                 << "; returning a constant model";
    if (epoch_mse) {
      epoch_mse->assign(hyper.epochs, 0.0);
    }
    return MlpModel({}, in_mean, in_std, out_mean, 1.0);
  }

  std::vector<std::size_t> sizes = {2};
  sizes.insert(sizes.end(), hyper.hidden.begin(), hyper.hidden.end());
  sizes.push_back(1);
  const std::size_t nl = sizes.size() - 1;

  std::mt19937_64 rng(hyper.seed);
  std::vector<Mat> w(nl);
  std::vector<Vec> b(nl);
  for (std::size_t l = 0; l < nl; ++l) {
    const auto rows = static_cast<Eigen::Index>(sizes[l + 1]);
    const auto cols = static_cast<Eigen::Index>(sizes[l]);
    const double limit =
        std::sqrt(6.0 / static_cast<double>(sizes[l] + sizes[l + 1]));
    std::uniform_real_distribution<double> init(-limit, limit);
    w[l].resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        w[l](r, c) = static_cast<float>(init(rng));
      }
    }
    b[l] = Vec::Zero(rows);
  }

  // Standardized copies of the data, one column per sample.
  const auto ns = static_cast<Eigen::Index>(samples.size());
  Mat x(2, ns);
  RowVec y(ns);
  for (Eigen::Index i = 0; i < ns; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    x(0, i) = static_cast<float>((s.cmd - in_mean[0]) / in_std[0]);
    x(1, i) = static_cast<float>((s.v - in_mean[1]) / in_std[1]);
    y(i) = static_cast<float>((s.acc - out_mean) / out_std);
  }

  // acts[0] holds the input batch; the rest is overwritten layer by layer.
  const auto forward = [&](std::vector<Mat>* acts) {
    for (std::size_t l = 0; l < nl; ++l) {
      Mat& z = (*acts)[l + 1];
      z.noalias() = w[l].lazyProduct((*acts)[l]);
      z.colwise() += b[l];
      if (l + 1 < nl) {
        z = (1.0f + (-z.array()).exp()).inverse().matrix();
      }
    }
  };

  std::vector<Mat> gw(nl), mw(nl), vw(nl);
  std::vector<Vec> gb(nl), mb(nl), vb(nl);
  for (std::size_t l = 0; l < nl; ++l) {
    mw[l] = vw[l] = Mat::Zero(w[l].rows(), w[l].cols());
    mb[l] = vb[l] = Vec::Zero(b[l].size());
  }
  std::vector<Mat> acts(nl + 1);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::max<std::size_t>(1, hyper.batch_size);
  double beta1_t = 1.0;
  double beta2_t = 1.0;
  RowVec yb;
  Mat delta;
  Mat back;

  if (epoch_mse) {
    epoch_mse->clear();
  }
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const auto m = static_cast<Eigen::Index>(
          std::min(order.size(), start + batch) - start);
      acts[0].resize(2, m);
      yb.resize(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        const auto i = static_cast<Eigen::Index>(
            order[start + static_cast<std::size_t>(k)]);
        acts[0].col(k) = x.col(i);
        yb(k) = y(i);
      }
      forward(&acts);
      // d(MSE)/d(output) for the batch mean.
      delta = (2.0f / static_cast<float>(m)) * (acts[nl].row(0) - yb);
      for (std::size_t l = nl; l-- > 0;) {
        gw[l].noalias() = delta.lazyProduct(acts[l].transpose());
        gb[l] = delta.rowwise().sum();
        if (l > 0) {
          back.noalias() = w[l].transpose().lazyProduct(delta);
          delta = (back.array() * acts[l].array() * (1.0f - acts[l].array()))
                      .matrix();
        }
      }
      beta1_t *= kAdamBeta1;
      beta2_t *= kAdamBeta2;
      const auto step = static_cast<float>(
          hyper.learning_rate * std::sqrt(1.0 - beta2_t) / (1.0 - beta1_t));
      for (std::size_t l = 0; l < nl; ++l) {
        mw[l] = kAdamB1 * mw[l] + (1.0f - kAdamB1) * gw[l];
        vw[l] = kAdamB2 * vw[l] + (1.0f - kAdamB2) * gw[l].cwiseProduct(gw[l]);
        w[l].array() -= step * mw[l].array() / (vw[l].array().sqrt() + kAdamEps);
        mb[l] = kAdamB1 * mb[l] + (1.0f - kAdamB1) * gb[l];
        vb[l] = kAdamB2 * vb[l] + (1.0f - kAdamB2) * gb[l].cwiseProduct(gb[l]);
        b[l].array() -= step * mb[l].array() / (vb[l].array().sqrt() + kAdamEps);
      }
    }
    if (epoch_mse) {
      acts[0] = x;
      forward(&acts);
      const double mse = (acts[nl].row(0) - y).squaredNorm() / n;
      epoch_mse->push_back(mse * out_std * out_std);
    }
  }

  std::vector<MlpModel::Layer> layers;
  for (std::size_t l = 0; l < nl; ++l) {
    MlpModel::Layer layer{sizes[l], sizes[l + 1], {}, {}};
    for (Eigen::Index r = 0; r < w[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < w[l].cols(); ++c) {
        layer.weights.push_back(w[l](r, c));
      }
    }
    layer.bias.assign(b[l].data(), b[l].data() + b[l].size());
    layers.push_back(std::move(layer));
  }
  return MlpModel(std::move(layers), in_mean, in_std, out_mean, out_std);
}

}  // namespace offline
}  // namespace autocalib
