/*
   Copyright 2026 The rittlab Authors

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

#include "ritt/error.hpp"
#include "ritt/numkernel.hpp"
#include "ritt/parallel.hpp"
#include "ritt/rng.hpp"
#include "ritt/io.hpp"
#include "ritt/stolz.hpp"
#include "ritt/quadrature.hpp"
#include "ritt/holo.hpp"
#include "ritt/diagnostics.hpp"
#include "ritt/funcalc.hpp"
#include "ritt/series.hpp"
#include "ritt/squarefn.hpp"
#include "ritt/basis.hpp"
#include "ritt/identities.hpp"
#include "ritt/zoo.hpp"
#include "ritt/experiments.hpp"
