#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "medfaith/mki.hpp"

namespace medfaith {

struct LossConfig {
  double tau = 1.0;         // contrastive temperature
  double lambda_cl = 1.0;   // contrastive weight
  double lambda_mki = 0.0;  // medical knowledge weight

  /// Throws ConfigError unless tau > 0, lambdas >= 0 and all finite.
  void validate() const;
};

using Vector = std::vector<double>;

/// Throws NumericError on dimension mismatch or a zero-norm input.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct ContrastiveLoss {
  double loss = 0.0;
  std::vector<Vector> positive_grads;
  std::vector<Vector> negative_grads;
};

/// Contrastive loss over the positive set P and negative set N:
///
///   L = -1/C(|P|,2) * sum_{i != j in P} log( exp(cos(h_i,h_j)/tau)
///                                   / sum_{k in P u N, k != i} exp(cos(h_i,h_k)/tau) )
///
/// The sum runs over ordered pairs. Gradients are exact partial derivatives
/// with respect to every representation.
ContrastiveLoss contrastive_loss(const std::vector<Vector>& positives,
                                 const std::vector<Vector>& negatives,
                                 const LossConfig& config);

struct MkiLoss {
  double loss = 0.0;
  Vector grad;  // d loss / d logits == -bm
};

/// L = -bm . p
MkiLoss mki_loss(std::span<const double> bm, std::span<const double> logits);
MkiLoss mki_loss(const MkiVector& bm, std::span<const double> logits);

/// lambda_cl * cl + lambda_mki * mki + ce
double combined_loss(double cl, double mki, double ce, const LossConfig& config);

/// Objective with analytic gradient: returns f(x) and, when `grad` is not
/// null, writes df/dx into it (resized to x.size()).
using Objective = std::function<double(std::span<const double> x, Vector* grad)>;

/// Central differences against the analytic gradient. Returns
/// max_i |fd_i - g_i| / max(1, |g_i|). Throws NumericError on non-finite values.
double finite_difference_check(const Objective& fn,
                               std::span<const double> point,
                               double step = 1e-5);

/// Flattens a bundle's representations into one vector (positives first) so
/// the contrastive loss can be passed to finite_difference_check.
Objective contrastive_objective(std::size_t positives, std::size_t negatives,
                                std::size_t dim, LossConfig config);

}  // namespace medfaith
