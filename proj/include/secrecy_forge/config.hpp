// Copyright 2026 The secrecy-forge Authors
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

#pragma once

#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace secrecy_forge {

inline constexpr const char *kVersion = "0.3.0";

/// Default tolerance for "entries sum to one" and row-stochasticity checks.
inline constexpr double kValidationTol = 1e-12;
/// Entries at or below this value are outside the support.
inline constexpr double kSupportEpsilon = 1e-12;
/// Tolerance on entropy equalities used by the classifier.
inline constexpr double kEntropyTol = 1e-9;

/// Dimension caps for dense computations. Overridable through the
/// SECRECY_FORGE_CAPS environment variable, e.g.
/// `SECRECY_FORGE_CAPS="product_states=8192,qstate_dim=512"`.
struct Caps {
    std::size_t product_states = 4096;
    std::size_t qstate_dim = 256;
    std::size_t branch_terms = 1'000'000;
    std::size_t optimizer_dim = 16;

    static Caps parse(std::string_view spec) {
        Caps caps;
        while (!spec.empty()) {
            auto comma = spec.find(',');
            auto item = spec.substr(0, comma);
            spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
            if (item.empty()) {
                continue;
            }
            auto eq = item.find('=');
            if (eq == std::string_view::npos) {
                throw std::invalid_argument("cap entry without '=': " + std::string(item));
            }
            auto key = item.substr(0, eq);
            std::string value(item.substr(eq + 1));
            std::size_t parsed = 0;
            try {
                parsed = static_cast<std::size_t>(std::stoull(value));
            } catch (const std::exception &) {
                throw std::invalid_argument("cap value is not an integer: " + std::string(item));
            }
            if (parsed == 0) {
                throw std::invalid_argument("cap must be positive: " + std::string(item));
            }
            if (key == "product_states") {
                caps.product_states = parsed;
            } else if (key == "qstate_dim") {
                caps.qstate_dim = parsed;
            } else if (key == "branch_terms") {
                caps.branch_terms = parsed;
            } else if (key == "optimizer_dim") {
                caps.optimizer_dim = parsed;
            } else {
                throw std::invalid_argument("unknown cap: " + std::string(key));
            }
        }
        return caps;
    }

    static Caps from_env() {
        const char *env = std::getenv("SECRECY_FORGE_CAPS");
        return env == nullptr ? Caps{} : parse(env);
    }
};

/// Process-wide caps, read once from the environment.
inline const Caps &default_caps() {
    static const Caps caps = Caps::from_env();
    return caps;
}

}  // namespace secrecy_forge
