#include "moseg/losses.hpp"

#include <cmath>
#include <string>

namespace moseg {

namespace {

void check_probability(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ValidationError("probability " + std::to_string(p) +
                          " outside (0, 1]");
  }
}

}  // namespace

void FocalConfig::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw ValidationError("focal gamma must be finite and >= 0");
  }
}

LossValue cce(double p) {
  check_probability(p);
  return {-std::log(p), -1.0 / p};
}

LossValue bce(double p, int label) {
  if (label != 0 && label != 1) {
    throw ValidationError("bce label must be 0 or 1");
  }
  if (label == 1) return cce(p);
  if (!(p >= 0.0 && p < 1.0)) {
    throw ValidationError("probability " + std::to_string(p) +
                          " outside [0, 1) for label 0");
  }
  return {-std::log1p(-p), 1.0 / (1.0 - p)};
}

LossValue focal(double p, const FocalConfig& cfg) {
  cfg.validate();
  check_probability(p);
  if (cfg.gamma == 0.0) return cce(p);

  const double q = 1.0 - p;
  const double mod = std::pow(q, cfg.gamma);
  const double value = -mod * std::log(p);
  if (p == 1.0) {
    // Both the modulating factor and the log vanish; the derivative's
    // q^(gamma-1) * ln(p) term tends to 0 for every gamma > 0.
    return {0.0, 0.0};
  }
  const double grad =
      cfg.gamma * std::pow(q, cfg.gamma - 1.0) * std::log(p) - mod / p;
  return {value, grad};
}

LossValue smooth_l1(double x) {
  if (!std::isfinite(x)) {
    throw ValidationError("smooth_l1 argument must be finite");
  }
  if (std::abs(x) < 1.0) return {0.5 * x * x, x};
  return {std::abs(x) - 0.5, x > 0.0 ? 1.0 : -1.0};
}

RegressionLoss regressor_loss(const RegressionTarget& predicted,
                              const RegressionTarget& target) {
  const std::array<double, 4> residuals = {
      target.tx - predicted.tx, target.ty - predicted.ty,
      target.tw - predicted.tw, target.th - predicted.th};
  RegressionLoss out;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    const LossValue term = smooth_l1(residuals[i]);
    out.value += term.value;
    out.grad[i] = -term.grad;  // d residual / d predicted = -1
  }
  return out;
}

MaskLoss mask_loss(const FloatGrid& predicted, const BitMask& ground_truth,
                   const FocalConfig& cfg) {
  cfg.validate();
  if (predicted.dims != ground_truth.dims()) {
    throw ValidationError("mask_loss: prediction and ground truth dims differ");
  }
  const double n = static_cast<double>(predicted.dims.area());
  MaskLoss out{0.0, FloatGrid(predicted.dims)};
  for (int y = 0; y < predicted.height(); ++y) {
    for (int x = 0; x < predicted.width(); ++x) {
      const double p = predicted.at(x, y);
      const bool fg = ground_truth.test(x, y);
      const double pt = fg ? p : 1.0 - p;
      if (!(pt > 0.0 && pt <= 1.0)) {
        throw ValidationError("mask_loss: pixel (" + std::to_string(x) + ", " +
                              std::to_string(y) + ") has p_t = " +
                              std::to_string(pt) + " outside (0, 1]");
      }
      const LossValue term = focal(pt, cfg);
      out.value += term.value / n;
      out.grad.at(x, y) = (fg ? term.grad : -term.grad) / n;
    }
  }
  return out;
}

}  // namespace moseg
