// Copyright 2026 The zenogate Authors
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

/// Tabular experiment output: one row per (grid point, observable), written
/// as CSV with a header and 17 significant digits so that it reads back
/// bit-exactly.

#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "zenogate/experiments/config.hpp"

namespace zenogate::experiments {

/// printf "%.17g": shortest fixed-width form that round-trips a double.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct SweepRow {
    std::vector<double> params;  // aligned with SweepResult::param_names
    std::string observable;
    double value = 0.0;
    double error = 0.0;
};

struct SweepResult {
    std::string experiment;
    std::vector<std::string> param_names;
    std::vector<SweepRow> rows;

    void add(std::vector<double> params, std::string observable, double value, double error) {
        if (params.size() != param_names.size()) {
            throw InputError("sweep row has " + std::to_string(params.size()) +
                             " parameters, expected " + std::to_string(param_names.size()));
        }
        rows.push_back({std::move(params), std::move(observable), value, error});
    }

    /// Orders rows by grid key, then observable name.
    void sort() {
        std::stable_sort(rows.begin(), rows.end(), [](const SweepRow &a, const SweepRow &b) {
            if (a.params != b.params) return a.params < b.params;
            return a.observable < b.observable;
        });
    }

    /// Rows of one observable, in the current order.
    [[nodiscard]] std::vector<SweepRow> select(const std::string &observable) const {
        std::vector<SweepRow> out;
        for (const auto &r : rows)
            if (r.observable == observable) out.push_back(r);
        return out;
    }

    [[nodiscard]] std::string to_csv() const {
        std::string out = "experiment";
        for (const auto &p : param_names) out += "," + p;
        out += ",observable,value,error\n";
        for (const auto &r : rows) {
            out += experiment;
            for (double p : r.params) out += "," + format_real(p);
            out += "," + r.observable + "," + format_real(r.value) + "," + format_real(r.error) + "\n";
        }
        return out;
    }

    static SweepResult from_csv(const std::string &text) {
        std::istringstream in(text);
        std::string line;
        const auto split = [](const std::string &s) {
            std::vector<std::string> cells;
            std::stringstream ss(s);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            return cells;
        };
        if (!std::getline(in, line)) throw ConfigError("csv: empty input");
        const auto header = split(line);
        if (header.size() < 4 || header.front() != "experiment" ||
            header[header.size() - 3] != "observable" || header[header.size() - 2] != "value" ||
            header.back() != "error") {
            throw ConfigError("csv: unexpected header '" + line + "'");
        }
        SweepResult result;
        result.param_names.assign(header.begin() + 1, header.end() - 3);
        int line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const auto cells = split(line);
            if (cells.size() != header.size()) {
                throw ConfigError("csv:" + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " cells");
            }
            if (result.experiment.empty()) result.experiment = cells.front();
            SweepRow row;
            const auto number = [&](const std::string &cell) {
                char *end = nullptr;
                const double v = std::strtod(cell.c_str(), &end);
                if (end != cell.c_str() + cell.size() || cell.empty()) {
                    throw ConfigError("csv:" + std::to_string(line_no) + ": bad number '" + cell + "'");
                }
                return v;
            };
            for (std::size_t k = 1; k + 3 < cells.size(); ++k) row.params.push_back(number(cells[k]));
            row.observable = cells[cells.size() - 3];
            row.value = number(cells[cells.size() - 2]);
            row.error = number(cells.back());
            result.rows.push_back(std::move(row));
        }
        return result;
    }
};

}  // namespace zenogate::experiments
