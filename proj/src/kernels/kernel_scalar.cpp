#include <cmath>
#include <cstdlib>
#include <cstring>

#include "kernel_common.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/moshinsky.hpp"

namespace qdecay {

PoleTermTable make_term_table(const Expansion& e, int label) {
    PoleTermTable t;
    const int N = e.truncation();
    t.k_re.reserve(N);
    t.k_im.reserve(N);
    t.w_re.reserve(N);
    t.w_im.reserve(N);
    cplx s1 = 0.0;
    const auto& C = e.coeff.at(label);
    for (int n = 0; n < N; ++n) {
        const cplx k = e.poles.poles[n].kappa;
        const cplx W = C[n] * e.states[n].u_boundary;
        t.k_re.push_back(k.real());
        t.k_im.push_back(k.imag());
        t.w_re.push_back(W.real());
        t.w_im.push_back(W.imag());
        s1 += W / k - std::conj(W / k);  // +n and -n families
    }
    t.s1 = s1;
    return t;
}

cplx tail_completion_term(const cplx& s1, double rho, double t) {
    // leading 1/y contribution of the missing n > N terms:
    // + e^{i rho^2/4t} e^{i pi/4} S1 / (2 sqrt(pi t))
    const cplx phase = std::exp(cplx(0.0, rho * rho / (4.0 * t)));
    const cplx eipi4(M_SQRT1_2, M_SQRT1_2);
    return phase * eipi4 * s1 / (2.0 * std::sqrt(M_PI * t));
}

KernelResult exterior_sum_scalar(const PoleTermTable& table, double rho, double t,
                                 bool tail_completion) {
    if (!(t > 0.0)) throw validation_error("exterior_sum: t must be > 0");
    KernelResult out;
    const double boundary_dummy = 0.0;  // moshinsky_m takes (r, a); use (rho, 0)
    cplx acc = 0.0;
    bool ovf = false;
    const int N = table.size();
    for (int n = 0; n < N; ++n) {
        const cplx k(table.k_re[n], table.k_im[n]);
        const cplx W(table.w_re[n], table.w_im[n]);
        bool o1 = false, o2 = false;
        const cplx term_p = W * moshinsky_m(rho, boundary_dummy, t, k, &o1);
        const cplx term_m = std::conj(W) * moshinsky_m(rho, boundary_dummy, t, -std::conj(k), &o2);
        acc += term_p + term_m;
        ovf = ovf || o1 || o2;
        if (n == N - 1) out.last_term_mag = std::abs(term_p) + std::abs(term_m);
    }
    if (tail_completion) acc += tail_completion_term(table.s1, rho, t);
    out.psi = acc;
    out.overflow = ovf;
    return out;
}

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

KernelKind resolve(KernelKind kind) {
    if (kind == KernelKind::Auto) {
        if (const char* env = std::getenv("QDECAY_KERNEL")) {
            if (std::strcmp(env, "scalar") == 0) return KernelKind::Scalar;
            if (std::strcmp(env, "avx2") == 0) return KernelKind::Avx2;
        }
        return avx2_available() ? KernelKind::Avx2 : KernelKind::Scalar;
    }
    return kind;
}

} // namespace

ExteriorSumFn exterior_sum_fn(KernelKind kind) {
    switch (resolve(kind)) {
        case KernelKind::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            if (avx2_available()) return &exterior_sum_avx2;
#endif
            throw validation_error("AVX2 kernel requested but not available on this CPU/build");
        default:
            return &exterior_sum_scalar;
    }
}

const char* active_kernel_name(KernelKind kind) {
    return resolve(kind) == KernelKind::Avx2 && avx2_available() ? "avx2" : "scalar";
}

} // namespace qdecay
