/*
   Copyright 2026 The polyembed Authors

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

#ifndef POLYEMBED_POLYEMBED_HPP
#define POLYEMBED_POLYEMBED_HPP

// Everything, for callers that do not care about compile time.

#include "embed.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "factor_q.hpp"
#include "field.hpp"
#include "graded.hpp"
#include "json_io.hpp"
#include "linalg.hpp"
#include "lnd.hpp"
#include "mpoly.hpp"
#include "normalize.hpp"
#include "poly.hpp"
#include "problem.hpp"
#include "rational.hpp"
#include "tower_ops.hpp"

#endif  // POLYEMBED_POLYEMBED_HPP
