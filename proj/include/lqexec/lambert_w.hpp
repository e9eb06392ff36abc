#pragma once

namespace lqexec {

/// Principal branch W0 of the Lambert W function, z >= -1/e.
double lambert_w0(double z);

/// W0(exp(log_z)) without forming exp(log_z); usable when it would overflow.
double lambert_w0_of_exp(double log_z);

}  // namespace lqexec
