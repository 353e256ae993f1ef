// Copyright 2026 The vqopt Authors
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


#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace vqopt::app {

// INI-style experiment configuration. Sections are `[name]` or
// `[optimizer LABEL]`; entries are `key = value`; `#` and `;` start comments.
// Every section and key is checked against a fixed schema on load.
class Config {
  public:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
        std::size_t line = 0; // 0 for command-line overrides
    };

    static Config parse(std::istream &in, const std::string &source);
    static Config load(const std::filesystem::path &path);

    // `section.key=value`; `optimizer.LABEL.key=value` addresses an
    // optimizer section, creating it when absent.
    void apply_override(const std::string &assignment);

    bool has(const std::string &section, const std::string &key) const;
    bool has_section(const std::string &section) const;

    std::string str(const std::string &section, const std::string &key) const;
    std::string str(const std::string &section, const std::string &key,
                    const std::string &fallback) const;
    double real(const std::string &section, const std::string &key) const;
    double real(const std::string &section, const std::string &key, double fallback) const;
    std::size_t count(const std::string &section, const std::string &key) const;
    std::size_t count(const std::string &section, const std::string &key,
                      std::size_t fallback) const;
    std::uint64_t seed(const std::string &section, const std::string &key,
                       std::uint64_t fallback) const;
    bool flag(const std::string &section, const std::string &key, bool fallback) const;
    std::vector<double> reals(const std::string &section, const std::string &key) const;

    // Optimizer labels in file order.
    std::vector<std::string> optimizer_labels() const;

    // Relative paths in the config resolve against this directory.
    const std::filesystem::path &base_dir() const { return base_dir_; }
    std::filesystem::path path(const std::string &section, const std::string &key) const;

    // Canonical text form; parsing it back yields the same entries.
    void write(std::ostream &out) const;

  private:
    const Entry *find(const std::string &section, const std::string &key) const;
    const Entry &need(const std::string &section, const std::string &key) const;
    void put(Entry e);

    std::string source_;
    std::filesystem::path base_dir_;
    std::vector<std::string> sections_;
    std::vector<Entry> entries_;
};

// "optimizer gd" -> "gd"; empty for other sections.
std::string optimizer_label(const std::string &section);

} // namespace vqopt::app
