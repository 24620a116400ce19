// Copyright 2026 The qbounds Authors
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

#include <stdexcept>
#include <string>

namespace qbounds {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
    using Error::Error;
};
struct NotPositiveSemidefinite : Error {
    using Error::Error;
};
struct Unphysical : Error {
    using Error::Error;
};
struct EmptyParameterSet : Error {
    using Error::Error;
};
struct RankDeficient : Error {
    using Error::Error;
};
struct SingularInformation : Error {
    using Error::Error;
};
struct IncompletePovm : Error {
    using Error::Error;
};
struct InconsistentEqualities : Error {
    using Error::Error;
};
struct SolverFailure : Error {
    using Error::Error;
};
struct BoundedScenarioUnsupported : Error {
    using Error::Error;
};
struct SchemaError : Error {
    using Error::Error;
};
struct RangeError : Error {
    using Error::Error;
};
struct ColumnAbsent : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace qbounds
