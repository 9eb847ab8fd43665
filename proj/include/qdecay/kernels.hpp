#pragma once

#include "qdecay/states.hpp"

namespace qdecay {

// Per-pole constants of the exterior expansion, structure-of-arrays for
// the SIMD lanes: kappa_n and the weights W_n = C_n u_n(boundary).
// The -n family is derived inside the kernels via kappa_{-n} = -conj(kappa_n),
// W_{-n} = conj(W_n) (real initial states).
struct PoleTermTable {
    std::vector<double> k_re, k_im;
    std::vector<double> w_re, w_im;
    cplx s1;  // sum over +-n of W_n / kappa_n (exact tail-completion input)

    int size() const { return static_cast<int>(k_re.size()); }
};

PoleTermTable make_term_table(const Expansion& e, int label);

struct KernelResult {
    cplx psi;
    double last_term_mag = 0.0;  // |n = N| pair contribution
    bool overflow = false;
};

// psi(boundary + rho, t) = sum over +-n of W_n M(y_n), optionally plus the
// analytic completion of the truncated n > N tail (leading 1/y order).
using ExteriorSumFn = KernelResult (*)(const PoleTermTable&, double rho, double t,
                                       bool tail_completion);

KernelResult exterior_sum_scalar(const PoleTermTable& table, double rho, double t,
                                 bool tail_completion);
#if defined(__x86_64__) || defined(_M_X64)
KernelResult exterior_sum_avx2(const PoleTermTable& table, double rho, double t,
                               bool tail_completion);
#endif

enum class KernelKind { Auto, Scalar, Avx2 };

bool avx2_available();
// Resolves Auto via CPU detection; QDECAY_KERNEL=scalar|avx2 overrides.
ExteriorSumFn exterior_sum_fn(KernelKind kind = KernelKind::Auto);
const char* active_kernel_name(KernelKind kind = KernelKind::Auto);

} // namespace qdecay
