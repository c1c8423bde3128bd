/*
 * Copyright 2026 The Wirtinger Authors
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

#include "wirtinger/common.hpp"

namespace wirtinger {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::BadMetric: return "BadMetric";
        case ErrorKind::OddDimension: return "OddDimension";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::InvalidStructure: return "InvalidStructure";
        case ErrorKind::NotUnit: return "NotUnit";
        case ErrorKind::UnknownCatalogEntry: return "UnknownCatalogEntry";
        case ErrorKind::ChartDomain: return "ChartDomain";
        case ErrorKind::StepTooLarge: return "StepTooLarge";
        case ErrorKind::DegenerateImmersion: return "DegenerateImmersion";
        case ErrorKind::GridTooSmall: return "GridTooSmall";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

void require_finite(const Matrix& m, std::string_view what) {
    if (!m.allFinite()) {
        throw Error(ErrorKind::NonFinite, std::string(what) + " contains NaN or infinity");
    }
}

}  // namespace wirtinger
