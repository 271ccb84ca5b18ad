/*
   Copyright 2026 The rfso Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <array>
#include <cmath>
#include <numbers>

#include "rfso/errors.hpp"
#include "rfso/specfun.hpp"

namespace rfso::specfun {

namespace {

// Lanczos approximation, g = 607/128, 15 terms (Godfrey).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5,
};

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Re z >= 0.5
cplx lanczos_log_gamma(cplx z)
{
    z -= 1.0;
    cplx series = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i)
        series += kLanczos[i] / (z + static_cast<double>(i));
    const cplx t = z + kLanczosG + 0.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(series);
}

// log sin(pi z) continued analytically through the upper half plane, Im z >= 0.
cplx log_sin_pi_upper(cplx z)
{
    using std::numbers::pi;
    const cplx i{0.0, 1.0};
    const cplx w = std::exp(2.0 * pi * i * z);
    return -std::numbers::ln2 + i * (pi / 2.0) - i * pi * z + std::log(1.0 - w);
}

cplx log_gamma_upper(cplx z)
{
    if (z.real() >= 0.5)
        return lanczos_log_gamma(z);
    return std::log(std::numbers::pi) - log_sin_pi_upper(z) - lanczos_log_gamma(1.0 - z);
}

}  // namespace

cplx log_gamma(cplx z)
{
    if (z.real() <= 0.5) {
        const double nearest = std::round(z.real());
        if (nearest <= 0.0 && std::abs(z - cplx(nearest, 0.0)) < 1e-12)
            throw Error(ErrorKind::pole_of_gamma,
                        "log_gamma evaluated at non-positive integer " + std::to_string(nearest));
    }
    if (z.imag() < 0.0)
        return std::conj(log_gamma_upper(std::conj(z)));
    return log_gamma_upper(z);
}

double log_abs_gamma(double x, int* sign)
{
    if (x <= 0.0 && x == std::floor(x))
        throw Error(ErrorKind::pole_of_gamma, "log_abs_gamma at " + std::to_string(x));
    if (sign != nullptr) {
        if (x > 0.0)
            *sign = 1;
        else
            *sign = (static_cast<long long>(std::floor(x)) % 2 == 0) ? 1 : -1;
    }
    return std::lgamma(x);
}

}  // namespace rfso::specfun
