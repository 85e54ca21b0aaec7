// Copyright 2026 The UDOG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "udog/bloch_path.hpp"
#include "udog/closure.hpp"
#include "udog/config.hpp"
#include "udog/error_geometry.hpp"
#include "udog/io.hpp"
#include "udog/least_squares.hpp"
#include "udog/parallel.hpp"
#include "udog/pulse.hpp"
#include "udog/quadrature.hpp"
#include "udog/robustness.hpp"
#include "udog/schemes.hpp"
#include "udog/su2.hpp"
