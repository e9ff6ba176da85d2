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

#include "text.hpp"
#include "error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace arraycov
{
    const char *error_kind_name(ErrorKind kind)
    {
        switch (kind)
        {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::Lookup: return "lookup error";
        case ErrorKind::Unsupported: return "unsupported-operation";
        case ErrorKind::Capacity: return "capacity error";
        case ErrorKind::Range: return "range error";
        case ErrorKind::Estimation: return "estimation error";
        case ErrorKind::UndefinedDepth: return "undefined-depth error";
        case ErrorKind::Io: return "i/o error";
        case ErrorKind::Config: return "configuration error";
        }
        return "error";
    }
}

namespace arraycov::text
{
    std::string format_double(double v)
    {
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        if (std::isnan(v))
            return "nan";
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        if (ec != std::errc())
            fail(ErrorKind::InvalidArgument, "cannot format number");
        return std::string(buf, end);
    }

    std::string format_fixed(double v, int decimals)
    {
        if (!std::isfinite(v))
            return format_double(v);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
        std::string s(buf);
        if (s == "-0" || (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos))
            s.erase(0, 1);
        return s;
    }

    std::string_view trim(std::string_view s)
    {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
            s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
            s.remove_suffix(1);
        return s;
    }

    std::optional<double> parse_double(std::string_view field)
    {
        field = trim(field);
        if (field.empty())
            return std::nullopt;
        if (field == "inf" || field == "+inf")
            return INFINITY;
        if (field == "-inf")
            return -INFINITY;
        if (field == "nan" || field == "NaN" || field == "-nan")
            return NAN;
        if (field.front() == '+')
            field.remove_prefix(1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc() || ptr != field.data() + field.size())
            return std::nullopt;
        return v;
    }

    std::vector<std::string_view> split_csv_line(std::string_view line)
    {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        for (;;)
        {
            auto pos = line.find(',', start);
            if (pos == std::string_view::npos)
            {
                out.push_back(trim(line.substr(start)));
                break;
            }
            out.push_back(trim(line.substr(start, pos - start)));
            start = pos + 1;
        }
        return out;
    }

    CsvTable read_csv(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            fail(ErrorKind::Io, "cannot open '" + path.string() + "'");

        CsvTable table;
        std::string line;
        bool have_header = false;
        while (std::getline(in, line))
        {
            auto view = trim(line);
            if (view.empty() || view.front() == '#')
                continue;
            auto fields = split_csv_line(view);
            if (!have_header)
            {
                for (auto f : fields)
                    table.header.emplace_back(f);
                have_header = true;
                continue;
            }
            std::vector<std::string> row;
            row.reserve(fields.size());
            for (auto f : fields)
                row.emplace_back(f);
            table.rows.push_back(std::move(row));
        }
        return table;
    }

    std::vector<std::size_t> require_columns(const CsvTable &table,
                                             const std::vector<std::string> &names,
                                             const std::string &what)
    {
        std::vector<std::size_t> idx;
        for (const auto &name : names)
        {
            std::size_t i = 0;
            while (i < table.header.size() && table.header[i] != name)
                ++i;
            if (i == table.header.size())
                fail(ErrorKind::Parse, what + ": missing column '" + name + "'");
            idx.push_back(i);
        }
        return idx;
    }

    void write_file(const std::filesystem::path &path, const std::string &content)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
        out << content;
        if (!out)
            fail(ErrorKind::Io, "write failed for '" + path.string() + "'");
    }

    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
}
