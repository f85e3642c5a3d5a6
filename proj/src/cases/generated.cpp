/*
 * Copyright 2026 The qmv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qmv/cases/generated.hpp"

#include <filesystem>
#include <fstream>

namespace qmv::cases {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace

std::string write_case(const GeneratedCase& c, const std::string& dir)
{
    const std::filesystem::path base(dir.empty() ? "." : dir);
    std::filesystem::create_directories(base);
    const auto model = base / (c.name + ".gcm");
    write_file(model, c.model);
    write_file(base / (c.name + ".props"), c.properties);
    return model.string();
}

} // namespace qmv::cases
