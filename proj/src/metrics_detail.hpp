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

#pragma once

#include "rfso/specfun.hpp"

namespace rfso::metrics::detail {

unsigned contour_flags(const specfun::ContourEstimate& e);

/// Policy whose negligibility floor accounts for a prefactor exp(log_scale).
specfun::ContourPolicy scaled(const specfun::ContourPolicy& policy, double log_scale);

/// Clamp round-off excursions of at most 1e-6 and flag them; throw beyond.
double clamp_probability(double v, unsigned& flags);

}  // namespace rfso::metrics::detail
