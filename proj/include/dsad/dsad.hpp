/*
 * Copyright (c) 2026, The dsad Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "dsad/bpa.hpp"
#include "dsad/classifiers.hpp"
#include "dsad/dataset.hpp"
#include "dsad/error.hpp"
#include "dsad/evaluation.hpp"
#include "dsad/folds.hpp"
#include "dsad/frame.hpp"
#include "dsad/mass_function.hpp"
#include "dsad/random.hpp"
#include "dsad/report.hpp"
#include "dsad/serialization.hpp"
