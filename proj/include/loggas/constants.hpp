#pragma once

// Fixed high-precision literals. Each was computed to 30 digits with mpmath
// (zeta(3..13) with mp.zeta, zeta'(-1) with mp.zeta(-1, derivative=1), the
// Dyson constant as exp(ln 2 / 12 + 3 zeta'(-1))) and rounded to double.

#include <numbers>

namespace loggas::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = 0.577215664901532860606512090082;
inline constexpr double zeta_prime_minus1 = -0.165421143700450929213919660243;

// ln c0 = ln(2)/12 + 3 zeta'(-1)
inline constexpr double log_dyson_c0 = -0.43850116605469067852365630394;
inline constexpr double dyson_c0 = 0.645002448509577084658961007722;

// zeta(3), zeta(5), ..., zeta(13)
inline constexpr double zeta_odd[] = {
    1.20205690315959428539973816151152, 1.03692775514336992633136548645694,
    1.00834927738192282683979754984986, 1.00200839282608221441785276923234,
    1.00049418860411946455870228252651, 1.00012271334757848914675183652634,
};

}  // namespace loggas::constants
