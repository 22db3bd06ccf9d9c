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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tailscope {

/// Error conditions raised by the library. Every failure surfaces as a
/// tailscope::Error carrying one of these codes.
enum class Errc {
  kDomain,               // argument outside the function's domain
  kParameter,            // invalid model or law parameter
  kMeanUndefined,        // model has infinite mean
  kDegenerateThreshold,  // threshold at or beyond the right endpoint
  kInsufficientData,
  kEmptyExceedance,      // no observation strictly above the threshold
  kRange,                // index bounds violated
  kNormalization,        // nonpositive normalizing constant
  kDegenerateRange,      // zero-width normalization range
  kDegenerate,           // estimator undefined on this sample (ties etc.)
  kSingularDesign,       // least squares with no spread in x
  kEmptyWindow,
  kConfiguration,
  kUnsupported,          // operation not offered for this model kind
  kIo,
  kParse,
  kDuplicateDate,
  kDegenerateDay,
  kNumerical,
};

/// Coarse grouping used by the command-line tool for exit codes.
enum class ErrorClass { kConfig, kData, kIo };

std::string_view to_string(Errc code);
ErrorClass classify(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  ErrorClass error_class() const noexcept { return classify(code_); }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

/// Raised by the windowed Hausdorff distance when one of the two sets has no
/// point inside the window.
class EmptyWindowError : public Error {
 public:
  enum class Side { kFirst, kSecond };

  EmptyWindowError(Side side, const std::string& message);

  Side side() const noexcept { return side_; }

 private:
  Side side_;
};

}  // namespace tailscope
