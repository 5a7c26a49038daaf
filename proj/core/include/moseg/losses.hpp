#pragma once

#include <array>

#include "moseg/anchors.hpp"
#include "moseg/geometry.hpp"

namespace moseg {

/// A scalar loss together with its first derivative with respect to the
/// probability (or residual) argument.
struct LossValue {
  double value = 0.0;
  double grad = 0.0;
};

struct FocalConfig {
  double gamma = 2.0;

  void validate() const;
};

/// Cross entropy for the ground-truth class probability: -ln(p).
/// Domain: p in (0, 1]; p = 0 is rejected rather than clamped so the kernel
/// stays exact for gradient checks.
LossValue cce(double p);

/// Binary cross entropy: -ln(p) for label 1, -ln(1 - p) for label 0.
LossValue bce(double p, int label);

/// Focal loss -(1 - p)^gamma * ln(p); gamma = 0 reduces exactly to cce.
LossValue focal(double p, const FocalConfig& cfg = {});

/// 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise. C1 at the joints.
LossValue smooth_l1(double x);

struct RegressionLoss {
  double value = 0.0;
  std::array<double, 4> grad{};  // d/d(predicted t), component order x, y, w, h
};

/// Sum over the four components of smooth_l1(t*_i - t_i).
RegressionLoss regressor_loss(const RegressionTarget& predicted,
                              const RegressionTarget& target);

struct MaskLoss {
  double value = 0.0;
  FloatGrid grad;  // d/d(predicted probability), per pixel
};

/// Mean per-pixel focal loss over a mask. Each pixel contributes focal(p_t)
/// with p_t = p on foreground and 1 - p on background, so predictions must
/// leave room for the disfavored side: p in (0, 1] on foreground pixels and
/// [0, 1) on background pixels.
MaskLoss mask_loss(const FloatGrid& predicted, const BitMask& ground_truth,
                   const FocalConfig& cfg = {});

}  // namespace moseg
