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

// Fixture helpers shared by the test binaries.

#ifndef ARRAYCOV_TEST_SUPPORT_HPP
#define ARRAYCOV_TEST_SUPPORT_HPP

#include "error.hpp"
#include "pattern.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace testsupport
{
    namespace fs = std::filesystem;
    using arraycov::cplx;

    inline fs::path scratch(const std::string &name)
    {
        const fs::path p = fs::path(ARRAYCOV_TEST_TMP) / name;
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }

    inline std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    inline void spit(const fs::path &p, const std::string &s)
    {
        std::ofstream(p, std::ios::binary) << s;
    }

    inline cplx random_cplx(std::mt19937_64 &rng, double scale = 1.0)
    {
        std::normal_distribution<double> n(0.0, scale);
        return {n(rng), n(rng)};
    }

    inline std::vector<std::string> eight_feeds()
    {
        return {"1V", "2H", "3V", "4H", "5V", "6H", "7V", "8H"};
    }

    inline arraycov::ElementPatternSet random_set(const arraycov::SphericalGrid &grid,
                                                  const std::vector<std::string> &feeds, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        std::vector<arraycov::PolarimetricSample> s(grid.size() * feeds.size());
        for (auto &x : s)
            x = {random_cplx(rng), random_cplx(rng)};
        return {grid, feeds, std::move(s)};
    }

    inline arraycov::ElementPatternSet constant_set(const arraycov::SphericalGrid &grid,
                                                    const std::vector<std::string> &feeds, cplx gt, cplx gp)
    {
        std::vector<arraycov::PolarimetricSample> s(grid.size() * feeds.size(), {gt, gp});
        return {grid, feeds, std::move(s)};
    }

    // Kind of the arraycov::Error thrown by f, or nullopt when nothing is thrown.
    template <class F>
    std::optional<arraycov::ErrorKind> kind_of(F &&f)
    {
        try
        {
            f();
        }
        catch (const arraycov::Error &e)
        {
            return e.kind();
        }
        return std::nullopt;
    }

    // Runs a shell command and returns its exit status.
    inline int run(const std::string &cmd)
    {
        const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
        if (rc == -1 || !WIFEXITED(rc))
            return -1;
        return WEXITSTATUS(rc);
    }
}

#endif
