// Copyright 2026 discogan contributors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

// Straight-line reference implementations shared by the unit and acceptance tests.

#include <torch/torch.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "discogan/discriminator.h"

namespace discogan::test {

using Matrix = std::vector<std::vector<double>>;  // [rows][cols]

// Power spectrogram [F][T] from a direct DFT of centred, zero-padded frames.
inline Matrix brute_power(const std::vector<double>& x, int window) {
  const int hop = window / 4, half = window / 2;
  const int n = static_cast<int>(x.size());
  const int frames = 1 + n / hop;
  Matrix p(half + 1, std::vector<double>(frames));
  for (int t = 0; t < frames; ++t) {
    for (int k = 0; k <= half; ++k) {
      std::complex<double> acc = 0;
      for (int m = 0; m < window; ++m) {
        const int idx = t * hop + m - half;
        const double sample = idx >= 0 && idx < n ? x[idx] : 0.0;
        const double w = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * m / window);
        acc += sample * w * std::polar(1.0, -2 * std::numbers::pi * k * m / window);
      }
      p[k][t] = std::norm(acc);
    }
  }
  return p;
}

// Slaney mel scale: linear below 1 kHz, logarithmic above.
inline double slaney_mel(double hz) {
  const double f_sp = 200.0 / 3.0;
  if (hz < 1000.0) return hz / f_sp;
  return 1000.0 / f_sp + 27.0 * std::log(hz / 1000.0) / std::log(6.4);
}

inline double slaney_hz(double mel) {
  const double f_sp = 200.0 / 3.0;
  const double brk = 1000.0 / f_sp;
  if (mel < brk) return mel * f_sp;
  return 1000.0 * std::pow(6.4, (mel - brk) / 27.0);
}

// Area-normalised triangles from ramps between consecutive mel points.
inline Matrix brute_mel_filters(int n_fft, int n_mels, double fmax) {
  std::vector<double> pts(n_mels + 2);
  for (int m = 0; m < n_mels + 2; ++m) {
    pts[m] = slaney_hz(slaney_mel(fmax) * m / (n_mels + 1));
  }
  Matrix fb(n_mels, std::vector<double>(n_fft / 2 + 1));
  for (int m = 0; m < n_mels; ++m) {
    for (int k = 0; k <= n_fft / 2; ++k) {
      const double f = 16000.0 * k / n_fft;
      double v = 0.0;
      if (f > pts[m] && f <= pts[m + 1]) v = (f - pts[m]) / (pts[m + 1] - pts[m]);
      if (f > pts[m + 1] && f < pts[m + 2]) v = (pts[m + 2] - f) / (pts[m + 2] - pts[m + 1]);
      fb[m][k] = v * 2.0 / (pts[m + 2] - pts[m]);
    }
  }
  return fb;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
  Matrix c(a.size(), std::vector<double>(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Matrix log_floor(Matrix m) {
  for (auto& row : m)
    for (auto& v : row) v = std::log(v + 1e-5);
  return m;
}

// Element-mean L1 plus target-normalised Frobenius distance.
inline std::pair<double, double> l1_and_rel_frob(const Matrix& a, const Matrix& b) {
  double l1 = 0, diff = 0, norm = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      l1 += std::abs(a[i][j] - b[i][j]);
      diff += (a[i][j] - b[i][j]) * (a[i][j] - b[i][j]);
      norm += a[i][j] * a[i][j];
      ++count;
    }
  return {l1 / static_cast<double>(count), std::sqrt(diff) / std::sqrt(norm)};
}

// Frequency loss over a batch of signals for one set of exponents.
inline double brute_loss_freq(const std::vector<std::vector<double>>& s,
                       const std::vector<std::vector<double>>& e, const std::vector<int>& q) {
  double total = 0;
  for (int i : q) {
    const int w = 1 << i;
    const auto fb = brute_mel_filters(w, std::max(5, w / 8), 8000.0);
    double l1_p = 0, fro_p = 0, l1_m = 0, fro_m = 0;
    for (std::size_t b = 0; b < s.size(); ++b) {
      const auto ps = brute_power(s[b], w), pe = brute_power(e[b], w);
      auto [a1, a2] = l1_and_rel_frob(log_floor(ps), log_floor(pe));
      auto [c1, c2] = l1_and_rel_frob(log_floor(mat_mul(fb, ps)), log_floor(mat_mul(fb, pe)));
      // Every item has the same element count, so the batch L1 mean is the
      // mean of the item means.
      l1_p += a1;
      fro_p += a2;
      l1_m += c1;
      fro_m += c2;
    }
    const auto nb = static_cast<double>(s.size());
    total += (l1_p + fro_p + l1_m + fro_m) / nb;
  }
  return total / static_cast<double>(q.size());
}

inline std::vector<std::vector<double>> rows_of(const torch::Tensor& x) {
  auto c = x.to(torch::kFloat64).contiguous();
  std::vector<std::vector<double>> out;
  for (int64_t b = 0; b < c.size(0); ++b) {
    auto row = c[b];
    out.emplace_back(row.data_ptr<double>(), row.data_ptr<double>() + row.numel());
  }
  return out;
}

inline DiscriminatorOutput logits_only(std::vector<torch::Tensor> logits) {
  DiscriminatorOutput out;
  out.logits = std::move(logits);
  return out;
}

inline torch::Tensor d64(std::vector<double> v) {
  return torch::tensor(v, torch::kFloat64).view({1, 1, -1, 1});
}

inline double brute_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - sx / n) * (x[i] - sx / n);
    syy += (y[i] - sy / n) * (y[i] - sy / n);
    sxy += (x[i] - sx / n) * (y[i] - sy / n);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Rank = 1 + #smaller + (#equal - 1) / 2, by counting.
inline std::vector<double> brute_ranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0, equal = 0;
    for (double v : x) {
      if (v < x[i]) less += 1;
      if (v == x[i]) equal += 1;
    }
    r[i] = 1 + less + (equal - 1) / 2;
  }
  return r;
}

}  // namespace discogan::test
