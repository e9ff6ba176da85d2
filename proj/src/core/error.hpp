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

#ifndef ARRAYCOV_ERROR_HPP
#define ARRAYCOV_ERROR_HPP

#include <stdexcept>
#include <string>

namespace arraycov
{
    enum class ErrorKind
    {
        InvalidArgument,
        Parse,
        Lookup,
        Unsupported,
        Capacity,
        Range,
        Estimation,
        UndefinedDepth,
        Io,
        Config
    };

    const char *error_kind_name(ErrorKind kind);

    // All library failures are reported through this exception type. The C API
    // translates the kind into a status code.
    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string &what)
            : std::runtime_error(what), kind_(kind) {}

        ErrorKind kind() const noexcept { return kind_; }

    private:
        ErrorKind kind_;
    };

    [[noreturn]] inline void fail(ErrorKind kind, const std::string &what)
    {
        throw Error(kind, what);
    }
}

#endif
