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

#include "rfso/errors.hpp"

namespace rfso {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::domain: return "domain error";
    case ErrorKind::pole_of_gamma: return "pole of gamma";
    case ErrorKind::contour_failure: return "contour failure";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::quadrature: return "quadrature failure";
    case ErrorKind::degenerate_pole: return "degenerate pole";
    case ErrorKind::config: return "config error";
    }
    return "error";
}

}  // namespace rfso
