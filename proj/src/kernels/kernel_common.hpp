#pragma once

#include "qdecay/kernels.hpp"

namespace qdecay {

// leading 1/y contribution of the missing n > N tail terms
cplx tail_completion_term(const cplx& s1, double rho, double t);

} // namespace qdecay
