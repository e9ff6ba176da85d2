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

// Small CSV / number formatting helpers shared by the file readers and writers.

#ifndef ARRAYCOV_TEXT_HPP
#define ARRAYCOV_TEXT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arraycov::text
{
    // Shortest decimal text that parses back to the identical double.
    // Infinities are written as "inf" / "-inf".
    std::string format_double(double v);

    // Fixed number of significant digits, used for reports and SVG coordinates.
    std::string format_fixed(double v, int decimals);

    // Parses a full field as double; accepts "inf", "-inf" and "nan".
    std::optional<double> parse_double(std::string_view field);

    std::vector<std::string_view> split_csv_line(std::string_view line);

    std::string_view trim(std::string_view s);

    // One logical CSV table: header fields and data rows, comment lines ('#')
    // and blank lines skipped. Row numbers are 1-based data-row indices.
    struct CsvTable
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;
    };

    CsvTable read_csv(const std::filesystem::path &path);

    // Returns the column index of each requested name; throws a parse error
    // naming the first missing column.
    std::vector<std::size_t> require_columns(const CsvTable &table,
                                             const std::vector<std::string> &names,
                                             const std::string &what);

    // Writes the content to a file in one go (binary mode, '\n' line endings).
    void write_file(const std::filesystem::path &path, const std::string &content);

    std::string read_file(const std::filesystem::path &path);
}

#endif
