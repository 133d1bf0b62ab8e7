// Copyright 2026 The cotlag Authors.
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

#include "cotlag/complex.hpp"
#include "cotlag/elementary.hpp"
#include "cotlag/error.hpp"
#include "cotlag/groupoid.hpp"
#include "cotlag/operad.hpp"
#include "cotlag/oracle.hpp"
#include "cotlag/poisson.hpp"
#include "cotlag/random.hpp"
#include "cotlag/series_io.hpp"
#include "cotlag/solver.hpp"
#include "cotlag/symbols.hpp"
#include "cotlag/trees.hpp"
