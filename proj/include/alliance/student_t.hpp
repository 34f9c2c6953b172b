// Copyright 2026 The Alliance Eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ALLIANCE_STUDENT_T_HPP_
#define ALLIANCE_STUDENT_T_HPP_

namespace alliance {

// I_x(a, b) by Lentz's continued fraction; relative accuracy about 1e-14.
// Requires a, b > 0 and 0 <= x <= 1 (ConfigError otherwise).
double regularized_incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with `dof` > 0 degrees of freedom.
double student_t_cdf(double t, double dof);

// P(|T| >= |t|).
double student_t_two_sided_p(double t, double dof);

}  // namespace alliance

#endif  // ALLIANCE_STUDENT_T_HPP_
