// SPDX-License-Identifier: Apache-2.0
//
// arraycov - array pattern synthesis and spherical coverage evaluation
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

// RAII owners for the C API handles plus status checking for the CLI.

#ifndef ARRAYCOV_TOOLS_HANDLES_HPP
#define ARRAYCOV_TOOLS_HANDLES_HPP

#include "arraycov/arraycov.h"

#include <memory>
#include <stdexcept>
#include <string>

namespace arraycov::cli
{
    // Failure carrying the library status (or a CLI-level one).
    class Failure : public std::runtime_error
    {
    public:
        Failure(ac_status status, const std::string &what) : std::runtime_error(what), status_(status) {}
        ac_status status() const noexcept { return status_; }

    private:
        ac_status status_;
    };

    inline void check(ac_status status)
    {
        if (status != AC_OK)
            throw Failure(status, std::string(ac_status_name(status)) + ": " + ac_last_error());
    }

    [[noreturn]] inline void config_error(const std::string &what)
    {
        throw Failure(AC_ERR_CONFIG, "configuration error: " + what);
    }

    template <class T, void (*Free)(T *)>
    struct Deleter
    {
        void operator()(T *p) const { Free(p); }
    };

    using Grid = std::unique_ptr<ac_grid, Deleter<ac_grid, ac_grid_free>>;
    using Patterns = std::unique_ptr<ac_patterns, Deleter<ac_patterns, ac_patterns_free>>;
    using LossTable = std::unique_ptr<ac_loss_table, Deleter<ac_loss_table, ac_loss_table_free>>;
    using Plan = std::unique_ptr<ac_plan, Deleter<ac_plan, ac_plan_free>>;
    using GainMap = std::unique_ptr<ac_gain_map, Deleter<ac_gain_map, ac_gain_map_free>>;
    using Coverage = std::unique_ptr<ac_coverage, Deleter<ac_coverage, ac_coverage_free>>;
    using Stack = std::unique_ptr<ac_stack, Deleter<ac_stack, ac_stack_free>>;

    // Runs a creating C call and wraps its output handle.
    template <class Owner, class Fn, class... Args>
    Owner make(Fn fn, Args... args)
    {
        typename Owner::pointer raw = nullptr;
        check(fn(args..., &raw));
        return Owner(raw);
    }
}

#endif
