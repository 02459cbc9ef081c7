// Copyright 2026 The ncpoly Authors
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

#pragma once

#include "ncpoly/errors.hpp"
#include "ncpoly/rational.hpp"
#include "ncpoly/matrix.hpp"
#include "ncpoly/linear.hpp"
#include "ncpoly/simplex.hpp"
#include "ncpoly/scenario.hpp"
#include "ncpoly/double_description.hpp"
#include "ncpoly/measurement_polytope.hpp"
#include "ncpoly/nc_system.hpp"
#include "ncpoly/projection.hpp"
#include "ncpoly/feasibility.hpp"
#include "ncpoly/symmetry.hpp"
#include "ncpoly/version.hpp"
