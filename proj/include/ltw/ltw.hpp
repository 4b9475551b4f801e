// Copyright 2026 The ltweq Authors.
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

#include "ltw/analysis.hpp"
#include "ltw/equivalence.hpp"
#include "ltw/error.hpp"
#include "ltw/format.hpp"
#include "ltw/modular.hpp"
#include "ltw/morphism.hpp"
#include "ltw/normalize.hpp"
#include "ltw/oracle.hpp"
#include "ltw/pairs.hpp"
#include "ltw/transducer.hpp"
#include "ltw/tree.hpp"
#include "ltw/word.hpp"
