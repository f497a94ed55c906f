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

#ifndef LOSMIMO_ERRORS_HPP
#define LOSMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace losmimo
{
    // Malformed or inconsistent user configuration
    struct config_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // No distance range satisfies the requested channel quality
    struct infeasible_design : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Geometry that cannot be simulated, e.g. coinciding antennas
    struct geometry_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };
}

#endif
