// Copyright 2026 The optonoise Authors
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

#include "optonoise/output.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "optonoise/errors.hpp"

namespace optonoise {

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string to_csv(const Table &table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out += (i ? "," : "") + table.columns[i].name;
    }
    out += '\n';
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            if (const auto *d = std::get_if<double>(&row[i])) {
                out += format_number(*d);
            } else {
                out += std::get<std::string>(row[i]);
            }
        }
        out += '\n';
    }
    return out;
}

std::string record_csv(const HomodyneRecord &record) {
    std::string out = "time_s";
    std::vector<std::span<const double>> cols;
    for (const auto &[name, samples] : record.channels) {
        out += "," + name;
        cols.push_back(record.analysis(name));
    }
    out += '\n';
    for (std::size_t k = 0; k < record.samples(); ++k) {
        out += format_number(static_cast<double>(k) * record.dt);
        for (const auto &c : cols) {
            out += ',';
            out += format_number(c[k]);
        }
        out += '\n';
    }
    return out;
}

void write_atomic(const std::string &path, const std::string &contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot replace " + path + ": " + ec.message());
    }
}

std::string generation_time() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char *sde = std::getenv("SOURCE_DATE_EPOCH"); sde && *sde) {
        char *end = nullptr;
        const long long v = std::strtoll(sde, &end, 10);
        if (end && *end == '\0') {
            t = static_cast<std::time_t>(v);
        }
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace optonoise
