// Copyright 2026 The hycqm Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.


#pragma once

#include <string_view>

#include "hycqm/bench.hpp"
#include "hycqm/compile.hpp"
#include "hycqm/exceptions.hpp"
#include "hycqm/exhaustive.hpp"
#include "hycqm/hybrid.hpp"
#include "hycqm/io.hpp"
#include "hycqm/landscape.hpp"
#include "hycqm/lp.hpp"
#include "hycqm/mixed.hpp"
#include "hycqm/model.hpp"
#include "hycqm/parallel.hpp"
#include "hycqm/penalty_landscape.hpp"
#include "hycqm/problems.hpp"
#include "hycqm/random.hpp"
#include "hycqm/solvers.hpp"
#include "hycqm/sqa.hpp"
#include "hycqm/topology.hpp"
#include "hycqm/unit_commitment.hpp"

namespace hycqm {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace hycqm
