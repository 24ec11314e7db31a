// Copyright 2026 The Oracle Gap Authors
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

#ifndef ORACLE_GAP_HPP_
#define ORACLE_GAP_HPP_

#include "oracle_gap/ablation.hpp"
#include "oracle_gap/config.hpp"
#include "oracle_gap/coverage.hpp"
#include "oracle_gap/error.hpp"
#include "oracle_gap/executor.hpp"
#include "oracle_gap/fixture.hpp"
#include "oracle_gap/metrics.hpp"
#include "oracle_gap/operators.hpp"
#include "oracle_gap/pipeline.hpp"
#include "oracle_gap/process.hpp"
#include "oracle_gap/report.hpp"
#include "oracle_gap/rng.hpp"
#include "oracle_gap/sampling.hpp"
#include "oracle_gap/stats.hpp"
#include "oracle_gap/text.hpp"

#endif  // ORACLE_GAP_HPP_
