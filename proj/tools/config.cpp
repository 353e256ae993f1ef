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


#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "vqopt/errors.hpp"
#include "vqopt/pauli.hpp"

namespace vqopt::app {

namespace {

const std::map<std::string, std::set<std::string>> &schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"experiment",
         {"name", "seed", "trials", "output", "grid_step", "record_every", "checkpoint_every",
          "diagnostics", "diagnostics_every", "diagnostics_h"}},
        {"system",
         {"n", "layers", "p", "j", "delta", "initial_state", "penalty", "weights",
          "offset", "offset_factor", "metric", "normalize", "eigenvalues", "coupling", "f0"}},
        {"noise", {"model", "sigma1", "sigma2", "shots"}},
        {"run", {"budget", "init", "init_scale", "init_fixed", "init_file", "init_row",
                 "target_metric"}},
        {"optimizer",
         {"method", "a", "c", "big_a", "alpha", "gamma", "calibrate", "calibration_steps",
          "target_magnitude"}},
        {"checkpoint", {"file", "row"}},
        {"histogram", {"samples", "bins", "directions", "compare_shots"}},
        {"stability", {"method", "delta_f", "max_iterations", "multipliers"}},
    };
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string schema_section(const std::string &section) {
    return optimizer_label(section).empty() ? section : "optimizer";
}

std::string where(const std::string &source, std::size_t line) {
    return line == 0 ? std::string("--set") : source + ":" + std::to_string(line);
}

void check_section(const std::string &section, const std::string &context) {
    if (section == "optimizer") {
        throw InputError(context + ": optimizer sections need a label, e.g. [optimizer rcd]");
    }
    if (!schema().contains(schema_section(section))) {
        throw InputError(context + ": unknown section [" + section + "]");
    }
}

void check_key(const std::string &section, const std::string &key, const std::string &context) {
    const auto &keys = schema().at(schema_section(section));
    if (!keys.contains(key)) {
        throw InputError(context + ": unknown key '" + key + "' in [" + section + "]");
    }
}

std::string field(const std::string &section, const std::string &key) {
    const std::string label = optimizer_label(section);
    return (label.empty() ? section : "optimizer." + label) + "." + key;
}

} // namespace

std::string optimizer_label(const std::string &section) {
    constexpr std::string_view prefix = "optimizer ";
    if (section.size() > prefix.size() && section.starts_with(prefix)) {
        return section.substr(prefix.size());
    }
    return {};
}

Config Config::parse(std::istream &in, const std::string &source) {
    Config c;
    c.source_ = source;
    std::string section;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find_first_of("#;");
        const std::string text = trim(std::string_view(raw).substr(0, hash));
        if (text.empty()) {
            continue;
        }
        const std::string ctx = where(source, line);
        if (text.front() == '[') {
            if (text.back() != ']') {
                throw InputError(ctx + ": malformed section header");
            }
            std::istringstream words(text.substr(1, text.size() - 2));
            std::string head;
            std::string label;
            std::string extra;
            words >> head >> label >> extra;
            if (!extra.empty() || (!label.empty() && head != "optimizer")) {
                throw InputError(ctx + ": malformed section header");
            }
            section = label.empty() ? head : head + " " + label;
            check_section(section, ctx);
            if (std::find(c.sections_.begin(), c.sections_.end(), section) != c.sections_.end()) {
                throw InputError(ctx + ": duplicate section [" + section + "]");
            }
            c.sections_.push_back(section);
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw InputError(ctx + ": expected key = value");
        }
        if (section.empty()) {
            throw InputError(ctx + ": entry before any section header");
        }
        Entry e{section, trim(std::string_view(text).substr(0, eq)),
                trim(std::string_view(text).substr(eq + 1)), line};
        check_key(section, e.key, ctx);
        if (c.find(section, e.key)) {
            throw InputError(ctx + ": duplicate key '" + e.key + "'");
        }
        c.entries_.push_back(std::move(e));
    }
    return c;
}

Config Config::load(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read config " + path.string());
    }
    Config c = parse(in, path.string());
    c.base_dir_ = path.parent_path();
    return c;
}

void Config::apply_override(const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw InputError("--set expects section.key=value, got '" + assignment + "'");
    }
    const std::string lhs = trim(std::string_view(assignment).substr(0, eq));
    const auto last = lhs.rfind('.');
    if (last == std::string::npos || last == 0) {
        throw InputError("--set expects section.key=value, got '" + assignment + "'");
    }
    std::string section = lhs.substr(0, last);
    if (section.starts_with("optimizer.")) {
        section = "optimizer " + section.substr(std::string("optimizer.").size());
    }
    const std::string ctx = "--set " + lhs;
    check_section(section, ctx);
    Entry e{section, lhs.substr(last + 1), trim(std::string_view(assignment).substr(eq + 1)), 0};
    check_key(section, e.key, ctx);
    put(std::move(e));
}

void Config::put(Entry e) {
    if (std::find(sections_.begin(), sections_.end(), e.section) == sections_.end()) {
        sections_.push_back(e.section);
    }
    for (auto &existing : entries_) {
        if (existing.section == e.section && existing.key == e.key) {
            existing = std::move(e);
            return;
        }
    }
    entries_.push_back(std::move(e));
}

const Config::Entry *Config::find(const std::string &section, const std::string &key) const {
    for (const auto &e : entries_) {
        if (e.section == section && e.key == key) {
            return &e;
        }
    }
    return nullptr;
}

const Config::Entry &Config::need(const std::string &section, const std::string &key) const {
    const Entry *e = find(section, key);
    if (!e) {
        throw InputError("missing required field " + field(section, key));
    }
    return *e;
}

bool Config::has(const std::string &section, const std::string &key) const {
    return find(section, key) != nullptr;
}

bool Config::has_section(const std::string &section) const {
    return std::find(sections_.begin(), sections_.end(), section) != sections_.end();
}

std::string Config::str(const std::string &section, const std::string &key) const {
    return need(section, key).value;
}

std::string Config::str(const std::string &section, const std::string &key,
                        const std::string &fallback) const {
    const Entry *e = find(section, key);
    return e ? e->value : fallback;
}

double Config::real(const std::string &section, const std::string &key) const {
    const Entry &e = need(section, key);
    try {
        return parse_real(e.value);
    } catch (const std::exception &) {
        throw InputError(where(source_, e.line) + ": " + field(section, key) +
                         " must be a number, got '" + e.value + "'");
    }
}

double Config::real(const std::string &section, const std::string &key, double fallback) const {
    return has(section, key) ? real(section, key) : fallback;
}

std::size_t Config::count(const std::string &section, const std::string &key) const {
    const Entry &e = need(section, key);
    std::uint64_t v = 0;
    const char *end = e.value.data() + e.value.size();
    const auto r = std::from_chars(e.value.data(), end, v);
    if (e.value.empty() || r.ec != std::errc() || r.ptr != end) {
        throw InputError(where(source_, e.line) + ": " + field(section, key) +
                         " must be a non-negative integer, got '" + e.value + "'");
    }
    return static_cast<std::size_t>(v);
}

std::size_t Config::count(const std::string &section, const std::string &key,
                          std::size_t fallback) const {
    return has(section, key) ? count(section, key) : fallback;
}

std::uint64_t Config::seed(const std::string &section, const std::string &key,
                           std::uint64_t fallback) const {
    return has(section, key) ? count(section, key) : fallback;
}

bool Config::flag(const std::string &section, const std::string &key, bool fallback) const {
    const Entry *e = find(section, key);
    if (!e) {
        return fallback;
    }
    if (e->value == "true" || e->value == "yes" || e->value == "1") {
        return true;
    }
    if (e->value == "false" || e->value == "no" || e->value == "0") {
        return false;
    }
    throw InputError(where(source_, e->line) + ": " + field(section, key) +
                     " must be true or false, got '" + e->value + "'");
}

std::vector<double> Config::reals(const std::string &section, const std::string &key) const {
    const Entry &e = need(section, key);
    std::vector<double> out;
    std::istringstream items(e.value);
    std::string item;
    while (std::getline(items, item, ',')) {
        try {
            out.push_back(parse_real(trim(item)));
        } catch (const std::exception &) {
            throw InputError(where(source_, e.line) + ": " + field(section, key) +
                             " must be a comma-separated list of numbers");
        }
    }
    if (out.empty()) {
        throw InputError(where(source_, e.line) + ": " + field(section, key) + " is empty");
    }
    return out;
}

std::vector<std::string> Config::optimizer_labels() const {
    std::vector<std::string> out;
    for (const auto &s : sections_) {
        if (const std::string label = optimizer_label(s); !label.empty()) {
            out.push_back(label);
        }
    }
    return out;
}

std::filesystem::path Config::path(const std::string &section, const std::string &key) const {
    const std::filesystem::path p(str(section, key));
    return p.is_absolute() ? p : base_dir_ / p;
}

void Config::write(std::ostream &out) const {
    bool first = true;
    for (const auto &s : sections_) {
        out << (first ? "" : "\n") << '[' << s << "]\n";
        first = false;
        for (const auto &e : entries_) {
            if (e.section == s) {
                out << e.key << " = " << e.value << '\n';
            }
        }
    }
}

} // namespace vqopt::app
