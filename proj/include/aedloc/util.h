// Copyright 2026 The aedloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AEDLOC_UTIL_H_
#define AEDLOC_UTIL_H_

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>

namespace aedloc {

// Generator for an independent stream derived from (seed, stream).
std::mt19937_64 MakeRng(std::uint64_t seed, std::uint64_t stream);

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Tasks must write only to
// their own slots; the first exception thrown is rethrown after all workers
// finish.
void ParallelFor(int n, int jobs, const std::function<void(int)>& fn);

// Shortest text form that parses back to the same double.
std::string FormatDouble(double v);

// Fixed-point text form with `digits` decimals.
std::string FormatFixed(double v, int digits);

std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t h = 0xcbf29ce484222325ULL);

std::string ReadFileBytes(const std::string& path);

}  // namespace aedloc

#endif  // AEDLOC_UTIL_H_
