// ----------------------------------------------------------------------------
// Copyright 2026 The collabat Authors
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
// ----------------------------------------------------------------------------

#pragma once

#include "collabat/analysis.hpp"
#include "collabat/attacks.hpp"
#include "collabat/checkpoint.hpp"
#include "collabat/classifier.hpp"
#include "collabat/commands.hpp"
#include "collabat/config.hpp"
#include "collabat/configurations.hpp"
#include "collabat/datasets.hpp"
#include "collabat/losses.hpp"
#include "collabat/objectives.hpp"
#include "collabat/reports.hpp"
#include "collabat/rng.hpp"
#include "collabat/tensor.hpp"
#include "collabat/training.hpp"
