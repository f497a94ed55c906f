// SPDX-License-Identifier: Apache-2.0
//
// losmimo - line-of-sight MIMO workbench for randomly oriented antenna arrays
// Copyright (C) 2026 The losmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef LOSMIMO_LOSMIMO_HPP
#define LOSMIMO_LOSMIMO_HPP

#include "channel.hpp"
#include "codes.hpp"
#include "design.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "matrix.hpp"
#include "metrics.hpp"
#include "montecarlo.hpp"
#include "orientation.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "vec3.hpp"

#endif
