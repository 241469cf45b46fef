// Copyright 2026 The pmech Authors
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

// Umbrella header.

#include "pmech/audit.hpp"
#include "pmech/bounds.hpp"
#include "pmech/errors.hpp"
#include "pmech/extension.hpp"
#include "pmech/mechanism.hpp"
#include "pmech/oracle.hpp"
#include "pmech/perfect_privacy.hpp"
#include "pmech/probability.hpp"
#include "pmech/random.hpp"
#include "pmech/scenario.hpp"
#include "pmech/separation.hpp"
#include "pmech/simplex.hpp"
#include "pmech/synthesis.hpp"
