// Copyright 2026 The fopf Authors
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

#include "fopf/clustering.hpp"
#include "fopf/cost_queue.hpp"
#include "fopf/dataset.hpp"
#include "fopf/distance.hpp"
#include "fopf/error.hpp"
#include "fopf/fuzzy.hpp"
#include "fopf/harness.hpp"
#include "fopf/log.hpp"
#include "fopf/metrics.hpp"
#include "fopf/model_io.hpp"
#include "fopf/mst.hpp"
#include "fopf/report.hpp"
#include "fopf/seed.hpp"
#include "fopf/supervised.hpp"
#include "fopf/wilcoxon.hpp"
