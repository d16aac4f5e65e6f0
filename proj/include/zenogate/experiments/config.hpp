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

/// Experiment configuration: a flat table of "section.key" -> text value,
/// seeded with per-experiment defaults, then overridden by an INI file and
/// by command-line flags of the same name.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "zenogate/error.hpp"

namespace zenogate::experiments {

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

enum class KeyType { real, integer, unsigned_integer, text, real_list };

struct ConfigKey {
    std::string name;  // "section.key"
    KeyType type;
    std::string default_value;
    std::string help;
};

inline const std::vector<std::string> &experiment_names() {
    static const std::vector<std::string> names{"fig2", "cnot", "scaling", "vsystem", "dfs"};
    return names;
}

/// Keys understood by an experiment, in serialization order.
inline std::vector<ConfigKey> config_keys(const std::string &experiment) {
    using K = KeyType;
    const std::vector<ConfigKey> system{
        {"system.g", K::real, "1", "cavity coupling g (sets the unit of frequency)"},
        {"system.kappa", K::real, "1", "cavity amplitude decay rate"},
        {"system.gamma_cav", K::real, "0", "atomic amplitude decay rate from level 2"},
        {"system.n_max", K::integer, "2", "Fock truncation"},
    };
    const std::vector<ConfigKey> cnot{
        {"cnot.split", K::real, "0.5", "share of sqrt(2) Omega carried by atom 1 on the 1-2 line"},
        {"cnot.separation_threshold", K::real, "0.1", "flag regime ratios above this"},
    };
    const std::vector<ConfigKey> common{
        {"propagation.method", K::text, "exact", "exact | adaptive"},
        {"propagation.rel_tol", K::real, "1e-12", "adaptive stepper relative tolerance"},
        {"propagation.abs_tol", K::real, "1e-14", "adaptive stepper absolute tolerance"},
        {"run.seed", K::unsigned_integer, "1", "root seed for Monte Carlo substreams"},
        {"run.jobs", K::integer, "1", "worker threads"},
        {"run.out", K::text, "out", "output directory"},
    };
    std::vector<ConfigKey> keys;
    const auto add = [&keys](const std::vector<ConfigKey> &more) {
        keys.insert(keys.end(), more.begin(), more.end());
    };
    if (experiment == "fig2") {
        add(system);
        add(cnot);
        add({{"grid.omega_min", K::real, "0.002", "smallest Omega"},
             {"grid.omega_max", K::real, "0.2", "largest Omega"},
             {"grid.omega_points", K::integer, "16", "geometric grid size"},
             {"grid.gamma_cav_values", K::real_list, "0, 1e-4, 1e-3, 1e-2",
              "one curve per value (chosen values, not read off a figure)"}});
    } else if (experiment == "cnot") {
        add(system);
        add(cnot);
        add({{"cnot.omega", K::real, "0.01", "|Omega|"},
             {"cnot.omega_phase", K::real, "0", "arg Omega in radians"},
             {"cnot.input", K::text, "010", "000 | 001 | 010 | 011 | plus (= (010 + 011)/sqrt 2)"}});
    } else if (experiment == "scaling") {
        add(system);
        add(cnot);
        add({{"grid.omega_min", K::real, "0.005", "smallest Omega"},
             {"grid.omega_max", K::real, "0.05", "largest Omega"},
             {"grid.omega_points", K::integer, "8", "geometric grid size"},
             {"scaling.horizon_factor", K::real, "50", "quadrature horizon is this / Omega^2"},
             {"scaling.slope_tolerance", K::real, "0.1", "allowed deviation of the fitted slope"}});
    } else if (experiment == "vsystem") {
        add({{"vsystem.omega_s", K::real, "1", "strong drive on the short-lived line"},
             {"vsystem.gamma_s", K::real, "1", "amplitude decay rate of the short-lived level"},
             {"grid.omega_w_min", K::real, "0.001", "smallest weak drive"},
             {"grid.omega_w_max", K::real, "0.01", "largest weak drive"},
             {"grid.omega_w_points", K::integer, "6", "geometric grid size"},
             {"vsystem.samples", K::integer, "10000", "Monte Carlo waiting times per point"},
             {"vsystem.horizon_factor", K::real, "50",
              "horizon is this * (omega_s / omega_w)^2 / gamma_s"},
             {"vsystem.slope_tolerance", K::real, "0.1", "allowed deviation of the fitted slope"}});
    } else if (experiment == "dfs") {
        add(system);
        add({{"dfs.horizon", K::real, "100", "time over which each state must stay dark"}});
    } else {
        throw ConfigError("unknown experiment '" + experiment + "'");
    }
    add(common);
    return keys;
}

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string &name, const std::string &text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(name + ": expected a number, got '" + text + "'");
    }
    return v;
}

template <class Int>
Int parse_integer(const std::string &name, const std::string &text) {
    const std::string t = trim(text);
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(name + ": expected an integer, got '" + text + "'");
    }
    return v;
}

inline std::vector<double> parse_list(const std::string &name, const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(name, item));
    if (out.empty()) throw ConfigError(name + ": empty list");
    return out;
}

}  // namespace detail

class ExperimentConfig {
public:
    explicit ExperimentConfig(std::string experiment)
        : experiment_(std::move(experiment)), keys_(config_keys(experiment_)) {
        for (const auto &k : keys_) values_[k.name] = k.default_value;
    }

    [[nodiscard]] const std::string &experiment() const { return experiment_; }
    [[nodiscard]] const std::vector<ConfigKey> &keys() const { return keys_; }

    /// Sets a key after checking it exists and parses as its declared type.
    void set(const std::string &name, const std::string &value) {
        const ConfigKey &key = find(name);
        switch (key.type) {
            case KeyType::real: (void)detail::parse_real(name, value); break;
            case KeyType::integer: (void)detail::parse_integer<long long>(name, value); break;
            case KeyType::unsigned_integer:
                (void)detail::parse_integer<std::uint64_t>(name, value);
                break;
            case KeyType::real_list: (void)detail::parse_list(name, value); break;
            case KeyType::text: break;
        }
        values_[name] = detail::trim(value);
    }

    [[nodiscard]] bool has(const std::string &name) const { return values_.count(name) > 0; }
    [[nodiscard]] const std::string &text(const std::string &name) const {
        (void)find(name);
        return values_.at(name);
    }
    [[nodiscard]] double real(const std::string &name) const {
        return detail::parse_real(name, text(name));
    }
    [[nodiscard]] long long integer(const std::string &name) const {
        return detail::parse_integer<long long>(name, text(name));
    }
    [[nodiscard]] std::uint64_t unsigned_integer(const std::string &name) const {
        return detail::parse_integer<std::uint64_t>(name, text(name));
    }
    [[nodiscard]] std::vector<double> real_list(const std::string &name) const {
        return detail::parse_list(name, text(name));
    }

    /// Reads an INI file. Syntax errors carry the file line; value errors
    /// carry the offending section.key.
    void load_ini(const std::string &path) {
        boost::property_tree::ptree tree;
        try {
            boost::property_tree::ini_parser::read_ini(path, tree);
        } catch (const boost::property_tree::ini_parser_error &e) {
            throw ConfigError(e.filename() + ":" + std::to_string(e.line()) + ": " + e.message());
        }
        for (const auto &[section, body] : tree) {
            if (body.empty()) {
                throw ConfigError(path + ": '" + section + "' is outside any [section]");
            }
            for (const auto &[key, leaf] : body) {
                const std::string name = section + "." + key;
                if (name == "experiment.name") {
                    if (leaf.data() != experiment_) {
                        throw ConfigError(path + ": experiment.name is '" + leaf.data() +
                                          "' but the command is '" + experiment_ + "'");
                    }
                    continue;
                }
                try {
                    set(name, leaf.data());
                } catch (const ConfigError &e) {
                    throw ConfigError(path + ": " + e.what());
                }
            }
        }
    }

    /// INI text that reproduces this configuration when loaded.
    [[nodiscard]] std::string to_ini() const {
        std::ostringstream out;
        out << "[experiment]\nname = " << experiment_ << "\n";
        std::vector<std::string> sections;
        for (const auto &k : keys_) {
            const std::string section = k.name.substr(0, k.name.find('.'));
            if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
                sections.push_back(section);
            }
        }
        for (const auto &section : sections) {
            out << "\n[" << section << "]\n";
            for (const auto &k : keys_) {
                const auto dot = k.name.find('.');
                if (k.name.compare(0, dot, section) != 0 || dot != section.size()) continue;
                out << k.name.substr(dot + 1) << " = " << values_.at(k.name) << "\n";
            }
        }
        return out.str();
    }

private:
    const ConfigKey &find(const std::string &name) const {
        const auto it = std::find_if(keys_.begin(), keys_.end(),
                                     [&](const ConfigKey &k) { return k.name == name; });
        if (it == keys_.end()) {
            throw ConfigError("unknown key '" + name + "' for experiment '" + experiment_ + "'");
        }
        return *it;
    }

    std::string experiment_;
    std::vector<ConfigKey> keys_;
    std::map<std::string, std::string> values_;
};

}  // namespace zenogate::experiments
