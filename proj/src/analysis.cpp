#include "ednr/analysis.hpp"

#include <cmath>

#include "ednr/minmin.hpp"

namespace ednr {

namespace {

std::uint64_t at_or_beyond(std::uint32_t n, std::uint32_t m, std::uint32_t k) {
  std::uint64_t sum = 0;
  for (std::uint32_t l = k; l <= n + m - 2; ++l) sum += level_size(n, m, l);
  return sum;
}

BigInt squares(const std::vector<std::uint64_t>& level) {
  BigInt sum = 0;
  for (const auto a : level) sum += BigInt{a} * a;
  return sum;
}

}  // namespace

Rational level_bound_sum(std::uint32_t n, std::uint32_t m, std::uint32_t first, std::uint32_t last) {
  Rational sum = 0;
  for (std::uint32_t k = first; k <= last; ++k) {
    const BigInt beyond = at_or_beyond(n, m, k);
    sum += Rational(beyond * beyond, BigInt{level_size(n, m, k)});
  }
  return sum;
}

BoundReport lower_bound(std::uint32_t n, std::uint32_t m) {
  if (n < 2 || n > m)
    throw Error(ErrorCode::InvalidShape,
                "lower bound needs 2 <= n <= m, got n=" + std::to_string(n) + ", m=" + std::to_string(m));
  BoundReport r;
  r.n = n;
  r.m = m;
  r.sum_bound = level_bound_sum(n, m, 1, m - 1);
  const double nm = static_cast<double>(n) * m;
  r.log_bound = (std::log(static_cast<double>(n)) - 2.0) * nm * nm;
  return r;
}

Rational bauer_bound(std::uint32_t t, const Rational& total) {
  if (t == 0) throw Error(ErrorCode::InvalidArgument, "t must be positive");
  return Rational(9) * total * total / Rational(8 * static_cast<std::int64_t>(t));
}

Rational bauer_curve(std::uint32_t t, const Rational& total, const Rational& k) {
  const Rational tt = t;
  const Rational denom = 2 * tt - k;
  return (4 * tt - 3 * k) * total * total / (denom * denom);
}

BauerResult bauer_bruteforce(std::uint32_t t, const Rational& total, std::uint32_t cap) {
  if (t == 0) throw Error(ErrorCode::InvalidArgument, "t must be positive");
  if (t > cap)
    throw Error(ErrorCode::CapExceeded, "t=" + std::to_string(t) + " exceeds cap " + std::to_string(cap));
  if (total < 0) throw Error(ErrorCode::InvalidArgument, "C must be non-negative");
  BauerResult r;
  r.t = t;
  r.total = total;
  r.closed_bound = bauer_bound(t, total);
  for (std::uint32_t k = 0; k <= t; ++k) {
    r.per_k.push_back(bauer_curve(t, total, Rational(k)));
    if (k == 0 || r.per_k.back() > r.brute_max) {
      r.brute_max = r.per_k.back();
      r.argmax = k;
    }
  }
  const Rational alpha = total / Rational(2 * static_cast<std::int64_t>(t) - r.argmax);
  for (std::uint32_t i = 0; i < t; ++i) r.maximiser.push_back(i < r.argmax ? alpha : 2 * alpha);
  return r;
}

TailBound right_part_bound(std::uint32_t n, std::uint32_t m, const SubtreeProfile& profile,
                           std::optional<std::uint32_t> beta_index) {
  if (!beta_index) throw Error(ErrorCode::BetaAbsent, "tail bound needs beta");
  TailBound r;
  for (std::uint32_t k = *beta_index + 1; k <= profile.depth(); ++k) r.tail_sum += squares(profile.level(k));
  r.intermediate = BigInt{4} * n * n * n * m;
  r.bound = BigInt{4} * n * n * m * m;
  r.holds = r.tail_sum <= r.intermediate && r.intermediate <= r.bound;
  return r;
}

HeadBound left_part_bound(std::uint32_t n, std::uint32_t m, const SubtreeProfile& profile,
                          std::optional<std::uint32_t> beta_index) {
  if (!beta_index) throw Error(ErrorCode::BetaAbsent, "head bound needs beta");
  HeadBound r;
  for (std::uint32_t k = 1; k <= *beta_index; ++k) r.head_sum += squares(profile.level(k));
  r.bound = Rational(9, 8) * level_bound_sum(n, m, 1, *beta_index);
  r.holds = Rational(r.head_sum) <= r.bound;
  return r;
}

RatioCertificate ratio_certificate(std::uint32_t n, std::uint32_t m) {
  if (n > m) std::swap(n, m);
  if (n < 2) throw Error(ErrorCode::InvalidShape, "certificate needs both grid sides >= 2");
  RatioCertificate c;
  c.n = n;
  c.m = m;
  const Instance grid = make_uniform_grid(n, m);
  const LossReport loss = evaluate(grid, minmin_tree(n, m));
  c.minmin_loss = loss.total;
  c.lower_bound = lower_bound(n, m).sum_bound;
  c.ratio_upper = Rational(c.minmin_loss) / c.lower_bound;
  c.beta = beta(minmin_profile(n, m));
  const std::uint32_t split = c.beta.value_or(0);
  for (std::uint32_t k = 1; k <= loss.per_level.size(); ++k) {
    if (k <= split) {
      c.head_loss += loss.per_level[k - 1];
    } else {
      c.tail_loss += loss.per_level[k - 1];
    }
  }
  return c;
}

}  // namespace ednr
