// Copyright 2026 The dsamp Authors
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

namespace dsamp {

/// Base class for all dsamp errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* category() const noexcept { return "error"; }
};

#define DSAMP_DEFINE_ERROR(NAME, CATEGORY)               \
  class NAME : public Error {                            \
   public:                                               \
    using Error::Error;                                  \
    const char* category() const noexcept override {     \
      return CATEGORY;                                   \
    }                                                    \
  }

DSAMP_DEFINE_ERROR(ShapeError, "shape");
DSAMP_DEFINE_ERROR(ConfigError, "config");
DSAMP_DEFINE_ERROR(MetricError, "metric");
DSAMP_DEFINE_ERROR(NumericError, "numeric");
DSAMP_DEFINE_ERROR(BudgetError, "budget");
DSAMP_DEFINE_ERROR(FormatError, "format");
DSAMP_DEFINE_ERROR(RangeError, "range");
DSAMP_DEFINE_ERROR(DataError, "data");
DSAMP_DEFINE_ERROR(ComponentError, "component");
DSAMP_DEFINE_ERROR(TrainingError, "training");
DSAMP_DEFINE_ERROR(HistoryError, "history");

#undef DSAMP_DEFINE_ERROR

}  // namespace dsamp
