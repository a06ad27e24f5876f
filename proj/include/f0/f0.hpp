// Copyright 2026 The f0sketch Authors.
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

#include "f0/config.hpp"
#include "f0/coupled_levels.hpp"
#include "f0/errors.hpp"
#include "f0/estimate.hpp"
#include "f0/exact_counter.hpp"
#include "f0/no_fail_sketch.hpp"
#include "f0/random.hpp"
#include "f0/sketch.hpp"
#include "f0/snapshot.hpp"
#include "f0/stats.hpp"
#include "f0/stream_gen.hpp"
#include "f0/trials.hpp"
