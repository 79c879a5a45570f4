#include "medfaith/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "medfaith/error.hpp"

namespace medfaith {

void LossConfig::validate() const {
  if (!std::isfinite(tau) || tau <= 0.0) {
    throw ConfigError("tau must be a positive finite number");
  }
  if (!std::isfinite(lambda_cl) || lambda_cl < 0.0 || !std::isfinite(lambda_mki) ||
      lambda_mki < 0.0) {
    throw ConfigError("loss weights must be finite and non-negative");
  }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double checked_norm(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericError("representation has a non-finite entry");
  }
  const double n = std::sqrt(dot(v, v));
  if (n == 0.0) throw NumericError("zero-norm representation");
  return n;
}

}  // namespace

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw NumericError("dimension mismatch");
  const double c = dot(a, b) / (checked_norm(a) * checked_norm(b));
  return std::clamp(c, -1.0, 1.0);
}

ContrastiveLoss contrastive_loss(const std::vector<Vector>& positives,
                                 const std::vector<Vector>& negatives,
                                 const LossConfig& config) {
  config.validate();
  const std::size_t np = positives.size();
  if (np < 2) throw NumericError("contrastive loss needs at least two positives");

  std::vector<const Vector*> reps;
  reps.reserve(np + negatives.size());
  for (const auto& v : positives) reps.push_back(&v);
  for (const auto& v : negatives) reps.push_back(&v);
  const std::size_t n = reps.size();
  const std::size_t dim = reps.front()->size();
  if (dim == 0) throw NumericError("empty representation");

  std::vector<double> norms(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (reps[k]->size() != dim) throw NumericError("dimension mismatch within bundle");
    norms[k] = checked_norm(*reps[k]);
  }

  const double tau = config.tau;
  const double scale = 2.0 / (static_cast<double>(np) * static_cast<double>(np - 1));
  const double others = static_cast<double>(np - 1);

  std::vector<Vector> grads(n, Vector(dim, 0.0));
  std::vector<double> cos_row(n), z(n), q(n);
  double loss = 0.0;

  for (std::size_t i = 0; i < np; ++i) {
    const auto& hi = *reps[i];
    double zmax = -INFINITY;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      cos_row[k] = dot(hi, *reps[k]) / (norms[i] * norms[k]);
      z[k] = cos_row[k] / tau;
      zmax = std::max(zmax, z[k]);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i) sum += std::exp(z[k] - zmax);
    }
    const double lse = zmax + std::log(sum);

    double anchored = -others * lse;
    for (std::size_t j = 0; j < np; ++j) {
      if (j != i) anchored += z[j];
    }
    loss -= scale * anchored;

    // d loss / d cos(h_i, h_k) = (scale / tau) * ((|P|-1) * softmax_k - [k in P])
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      q[k] = std::exp(z[k] - lse);
      const double g = scale / tau * (others * q[k] - (k < np ? 1.0 : 0.0));
      const auto& hk = *reps[k];
      const double inv = 1.0 / (norms[i] * norms[k]);
      const double ci = cos_row[k] / (norms[i] * norms[i]);
      const double ck = cos_row[k] / (norms[k] * norms[k]);
      for (std::size_t d = 0; d < dim; ++d) {
        grads[i][d] += g * (hk[d] * inv - ci * hi[d]);
        grads[k][d] += g * (hi[d] * inv - ck * hk[d]);
      }
    }
  }

  ContrastiveLoss out;
  out.loss = loss;
  out.positive_grads.assign(std::make_move_iterator(grads.begin()),
                            std::make_move_iterator(grads.begin() + static_cast<std::ptrdiff_t>(np)));
  out.negative_grads.assign(std::make_move_iterator(grads.begin() + static_cast<std::ptrdiff_t>(np)),
                            std::make_move_iterator(grads.end()));
  return out;
}

MkiLoss mki_loss(std::span<const double> bm, std::span<const double> logits) {
  if (bm.size() != logits.size()) {
    throw NumericError("MKI vector has length " + std::to_string(bm.size()) +
                       " but logits have length " + std::to_string(logits.size()));
  }
  MkiLoss out;
  out.grad.resize(bm.size());
  for (std::size_t i = 0; i < bm.size(); ++i) {
    out.loss -= bm[i] * logits[i];
    out.grad[i] = -bm[i];
  }
  return out;
}

MkiLoss mki_loss(const MkiVector& bm, std::span<const double> logits) {
  if (bm.counts.size() != logits.size()) {
    throw NumericError("MKI vector has length " + std::to_string(bm.counts.size()) +
                       " but logits have length " + std::to_string(logits.size()));
  }
  MkiLoss out;
  out.grad.assign(logits.size(), 0.0);
  for (const auto& [index, count] : bm.sparse()) {
    const auto c = static_cast<double>(count);
    out.loss -= c * logits[index];
    out.grad[index] = -c;
  }
  return out;
}

double combined_loss(double cl, double mki, double ce, const LossConfig& config) {
  if (!std::isfinite(cl) || !std::isfinite(mki) || !std::isfinite(ce)) {
    throw NumericError("combined loss inputs must be finite");
  }
  return config.lambda_cl * cl + config.lambda_mki * mki + ce;
}

double finite_difference_check(const Objective& fn, std::span<const double> point,
                               double step) {
  if (!(step > 0.0)) throw NumericError("finite-difference step must be positive");
  Vector analytic;
  const double f0 = fn(point, &analytic);
  if (!std::isfinite(f0)) throw NumericError("objective is not finite at the point");
  if (analytic.size() != point.size()) {
    throw NumericError("analytic gradient has the wrong length");
  }
  Vector x(point.begin(), point.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double up = fn(x, nullptr);
    x[i] = saved - step;
    const double down = fn(x, nullptr);
    x[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down) || !std::isfinite(analytic[i])) {
      throw NumericError("non-finite value during finite-difference check");
    }
    const double numeric = (up - down) / (2.0 * step);
    const double err = std::abs(numeric - analytic[i]) / std::max(1.0, std::abs(analytic[i]));
    worst = std::max(worst, err);
  }
  return worst;
}

Objective contrastive_objective(std::size_t positives, std::size_t negatives,
                                std::size_t dim, LossConfig config) {
  return [=](std::span<const double> x, Vector* grad) {
    if (x.size() != (positives + negatives) * dim) {
      throw NumericError("flattened bundle has the wrong length");
    }
    std::vector<Vector> pos(positives), neg(negatives);
    for (std::size_t k = 0; k < positives + negatives; ++k) {
      auto& dst = k < positives ? pos[k] : neg[k - positives];
      dst.assign(x.begin() + static_cast<std::ptrdiff_t>(k * dim),
                 x.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim));
    }
    auto result = contrastive_loss(pos, neg, config);
    if (grad != nullptr) {
      grad->clear();
      for (const auto& g : result.positive_grads) grad->insert(grad->end(), g.begin(), g.end());
      for (const auto& g : result.negative_grads) grad->insert(grad->end(), g.begin(), g.end());
    }
    return result.loss;
  };
}

}  // namespace medfaith
