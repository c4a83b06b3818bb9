// Copyright 2026 The qwork Authors
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

#include "qwork/error.hpp"

namespace qwork {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian:
      return "NotHermitian";
    case ErrorCode::BadProbability:
      return "BadProbability";
    case ErrorCode::WrongDimension:
      return "WrongDimension";
    case ErrorCode::NonHermitianSample:
      return "NonHermitianSample";
    case ErrorCode::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::ZeroCoherence:
      return "ZeroCoherence";
    case ErrorCode::EnumerationCapExceeded:
      return "EnumerationCapExceeded";
    case ErrorCode::NonRealWeight:
      return "NonRealWeight";
    case ErrorCode::GridTooCoarse:
      return "GridTooCoarse";
    case ErrorCode::IllConditioned:
      return "IllConditioned";
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::InvariantViolation:
      return "InvariantViolation";
    case ErrorCode::Config:
      return "Config";
  }
  return "Unknown";
}

}  // namespace qwork
