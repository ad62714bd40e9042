#pragma once
#include <vector>

#include "lklab/grid.hpp"

namespace lklab {

// Momentum ansatz paired with a strain profile on the xi grid,
//   P = -W + (eps/2) W' - (eps^2/8) W'' - (eps^2/2) g(W)
//       + (eps^3/48) W''' + (eps^3/4) (g(W))',
// the third-order closure that makes the lattice equations hold up to
// O(eps^{9/2}) residuals in the lattice l2 norm.
struct AnsatzPair {
  WaveProfile W;
  WaveProfile P;
  double epsilon = 0.0;
};

// throws if the spectral tail of the third derivative is not resolved
AnsatzPair build_ansatz(const WaveProfile& W, double epsilon);

// Residuals of the two lattice equations along w_n = W(eps(n-t)),
// p_n = P(eps(n-t)), with W transported by the background log-KdV flow
// (so d/dtau W is evaluated from the equation itself):
//   res1_n = P(xi+eps) - P(xi) + eps W' - eps^3 W_tau      at xi = eps(n-t)
//   res2_n = eps P' - eps^3 P_tau + W(xi) - W(xi-eps)
//            + eps^2 [g(W)(xi) - g(W)(xi-eps)]
// Unit lattice shifts are band-limited translates; the sequences cover one
// grid period, n = n_lo .. n_lo + count - 1.
struct ResidualSequences {
  std::vector<double> res1;
  std::vector<double> res2;
  int n_lo = 0;
  double l2_res1 = 0.0;
  double l2_res2 = 0.0;
};

ResidualSequences residuals(const AnsatzPair& pair, double t);

}  // namespace lklab
