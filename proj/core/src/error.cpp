// Copyright 2026 The Tailscope Authors
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

#include "tailscope/error.hpp"

namespace tailscope {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kDomain: return "domain error";
    case Errc::kParameter: return "parameter error";
    case Errc::kMeanUndefined: return "mean undefined";
    case Errc::kDegenerateThreshold: return "degenerate threshold";
    case Errc::kInsufficientData: return "insufficient data";
    case Errc::kEmptyExceedance: return "empty exceedance";
    case Errc::kRange: return "range error";
    case Errc::kNormalization: return "normalization error";
    case Errc::kDegenerateRange: return "degenerate range";
    case Errc::kDegenerate: return "degenerate estimate";
    case Errc::kSingularDesign: return "singular design";
    case Errc::kEmptyWindow: return "empty window";
    case Errc::kConfiguration: return "configuration error";
    case Errc::kUnsupported: return "unsupported operation";
    case Errc::kIo: return "I/O error";
    case Errc::kParse: return "parse error";
    case Errc::kDuplicateDate: return "duplicate date";
    case Errc::kDegenerateDay: return "degenerate day";
    case Errc::kNumerical: return "numerical error";
  }
  return "unknown error";
}

ErrorClass classify(Errc code) {
  switch (code) {
    case Errc::kDomain:
    case Errc::kParameter:
    case Errc::kMeanUndefined:
    case Errc::kRange:
    case Errc::kConfiguration:
    case Errc::kUnsupported:
      return ErrorClass::kConfig;
    case Errc::kIo:
      return ErrorClass::kIo;
    default:
      return ErrorClass::kData;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(message) {}

EmptyWindowError::EmptyWindowError(Side side, const std::string& message)
    : Error(Errc::kEmptyWindow, message), side_(side) {}

}  // namespace tailscope
