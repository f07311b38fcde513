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

#include "indistinguo/errors.hpp"

namespace indistinguo {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Capacity: return "capacity error";
    case ErrorKind::Index: return "index error";
    case ErrorKind::Input: return "input error";
    case ErrorKind::InvalidScenario: return "invalid scenario";
    case ErrorKind::Range: return "range error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::EmptyData: return "empty data";
    case ErrorKind::DegenerateInterferometer: return "degenerate interferometer";
    case ErrorKind::DegenerateGeometry: return "degenerate geometry";
    case ErrorKind::Identifiability: return "identifiability error";
    case ErrorKind::ReconstructionFailed: return "reconstruction failed";
    case ErrorKind::UnidentifiablePhase: return "unidentifiable phase";
    case ErrorKind::UnstableEstimator: return "unstable estimator";
    case ErrorKind::Internal: return "internal error";
    }
    return "error";
}

void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

} // namespace indistinguo
