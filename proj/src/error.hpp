// Copyright 2026 The occulab Authors
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

#ifndef OCCULAB_ERROR_HPP
#define OCCULAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace occulab {

// Mirrors occ_status in the public C header; keep the numbering in sync.
enum class ErrorCode {
  kDomain = 1,
  kInvalidArgument = 2,
  kEmbeddingNotPSD = 3,
  kNotPositiveDefinite = 4,
  kDivergentIntegral = 5,
  kUnsupportedDimension = 6,
  kGridTooLarge = 7,
  kHorizonExhausted = 8,
  kIo = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace occulab

#endif  // OCCULAB_ERROR_HPP
