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

// Convenience header pulling in the whole library except JSON I/O, which
// needs nlohmann/json on the include path (include json_io.hpp directly).

#pragma once

#include "secrecy_forge/classify.hpp"
#include "secrecy_forge/common_info.hpp"
#include "secrecy_forge/config.hpp"
#include "secrecy_forge/dequantize.hpp"
#include "secrecy_forge/dist.hpp"
#include "secrecy_forge/embed.hpp"
#include "secrecy_forge/entangle.hpp"
#include "secrecy_forge/instances.hpp"
#include "secrecy_forge/keyrate.hpp"
#include "secrecy_forge/qlinalg.hpp"
