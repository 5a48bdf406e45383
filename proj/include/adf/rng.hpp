// Copyright 2026 The adfkit Authors
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

#include <cstdint>
#include <random>
#include <string_view>

namespace adf {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Derives an independent stream seed from a master seed, a tag naming the
/// consumer ("shuffle", "augment", "init/frontend", ...) and two counters.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t a = 0, std::uint64_t b = 0) noexcept;

/// Fixes the master seed every framework random source derives from.
void seed_everything(std::uint64_t seed) noexcept;
std::uint64_t global_seed() noexcept;

/// Stream keyed off the global master seed.
Rng make_rng(std::string_view tag, std::uint64_t a = 0, std::uint64_t b = 0);

inline Rng make_rng(std::uint64_t master, std::string_view tag, std::uint64_t a,
                    std::uint64_t b) {
  return Rng(derive_seed(master, tag, a, b));
}

}  // namespace adf
