#pragma once

#include <compare>

namespace spreadsmith {

// A point-plane pair (P_{alpha u}, pi_{alpha v}) written as exponents:
// alpha = lambda[alpha_idx], u = omega^u_pow, v = omega^v_pow with
// omega = g^(q-1). It also labels the pencil p(P_{alpha u}, pi_{alpha v}).
struct Candidate {
  int alpha_idx = 0;
  int u_pow = 0;
  int v_pow = 0;

  friend constexpr bool operator==(const Candidate&, const Candidate&) = default;
  friend constexpr auto operator<=>(const Candidate&, const Candidate&) = default;
};

}  // namespace spreadsmith
