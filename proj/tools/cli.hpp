/**
 * Copyright 2026 The Indistinguo Authors
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

#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "indistinguo/errors.hpp"
#include "indistinguo/matrix.hpp"

namespace indistinguo::cli {

/// Exit-code contract: 0 ok, 1 internal, 2 input, 3 invalid scenario,
/// 4 identifiability or reconstruction failure.
int exit_code_for(ErrorKind kind) noexcept;

/// Builds a unitary from `fourier:N`, `identity:N`, `cyclic:ALPHA`
/// (or `cyclic:alpha=ALPHA`), `haar:N[:SEED]` or a matrix JSON file.
/// `haar:N` without a seed uses `default_seed`.
UnitaryMatrix parse_unitary_spec(const std::string& spec, std::uint64_t default_seed);

/// Like parse_unitary_spec but accepts non-unitary matrices, including the
/// moduli/phases layout {"moduli": [[...]], "phases": [[...]]}.
ComplexMatrix load_complex_matrix(const std::string& spec, std::uint64_t default_seed);

/// Writes `content` to `path` through a temporary file and a rename, or to
/// `stdout_stream` when `path` is "-".
void write_output(const std::string& path, const std::string& content, std::ostream& stdout_stream);

/// Full command line. Messages go to `err`, results to files or `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace indistinguo::cli
