#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ednr/common.hpp"
#include "ednr/spanning_tree.hpp"

namespace ednr {

/// Lower bounds on the loss of any spanning tree of the uniform n x m grid.
struct BoundReport {
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  /// sum_{k=1}^{m-1} |V_{>=k}|^2 / |V_k|, exact.
  Rational sum_bound;
  /// (ln n - 2) n^2 m^2; reporting only, negative (vacuous) for small n.
  double log_bound = 0.0;
  /// Both bounds hold with strict inequality.
  bool strict = true;
};

/// Requires 2 <= n <= m (InvalidShape otherwise).
BoundReport lower_bound(std::uint32_t n, std::uint32_t m);

/// sum_{k=first}^{last} |V_{>=k}|^2 / |V_k| on the n x m grid.
Rational level_bound_sum(std::uint32_t n, std::uint32_t m, std::uint32_t first, std::uint32_t last);

/// 9 C^2 / (8 t).
Rational bauer_bound(std::uint32_t t, const Rational& total);

/// (4t - 3k) C^2 / (2t - k)^2, the objective restricted to points with k
/// coordinates at alpha and t-k at 2 alpha. Valid for rational k in [0, t].
Rational bauer_curve(std::uint32_t t, const Rational& total, const Rational& k);

struct BauerResult {
  std::uint32_t t = 0;
  Rational total;                    // C
  std::vector<Rational> per_k;       // curve value at k = 0..t
  std::uint32_t argmax = 0;          // smallest maximising k
  Rational brute_max;
  Rational closed_bound;
  /// A maximising point: argmax coordinates alpha, the rest 2 alpha.
  std::vector<Rational> maximiser;
};

inline constexpr std::uint32_t kDefaultBauerCap = 12;

/// Enumerates the extreme-point family x_i in {alpha, 2 alpha}. Throws
/// CapExceeded when t > cap, InvalidArgument for t == 0 or C < 0.
BauerResult bauer_bruteforce(std::uint32_t t, const Rational& total, std::uint32_t cap = kDefaultBauerCap);

/// Tail part: sum over k > beta of sum_l (a_k^l)^2 against 4 n^2 m^2.
struct TailBound {
  BigInt tail_sum;
  BigInt intermediate;  // 4 n^3 m
  BigInt bound;         // 4 n^2 m^2
  bool holds = false;   // tail_sum <= intermediate <= bound
};

/// Head part: sum over k <= beta of sum_l (a_k^l)^2 against
/// (9/8) sum_{k<=beta} |V_{>=k}|^2/|V_k|.
struct HeadBound {
  BigInt head_sum;
  Rational bound;
  bool holds = false;
};

/// Throws BetaAbsent when `beta_index` is empty.
TailBound right_part_bound(std::uint32_t n, std::uint32_t m, const SubtreeProfile& profile,
                           std::optional<std::uint32_t> beta_index);
HeadBound left_part_bound(std::uint32_t n, std::uint32_t m, const SubtreeProfile& profile,
                          std::optional<std::uint32_t> beta_index);

/// Finite-size approximation certificate for the Min-Min tree.
struct RatioCertificate {
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  BigInt minmin_loss;
  Rational lower_bound;
  /// minmin_loss / lower_bound; the optimum exceeds lower_bound, so the true
  /// ratio is below this.
  Rational ratio_upper;
  std::optional<std::uint32_t> beta;
  BigInt head_loss;  // sum_{k<=beta} L_k (0 when beta is absent)
  BigInt tail_loss;  // sum_{k>beta} L_k
};

/// Accepts n > m by transposition; requires min(n, m) >= 2.
RatioCertificate ratio_certificate(std::uint32_t n, std::uint32_t m);

}  // namespace ednr
