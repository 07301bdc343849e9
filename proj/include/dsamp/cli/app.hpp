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

namespace dsamp::cli {

/// Full command dispatch. Exit codes: 0 success, 2 usage, 3 bad config or
/// missing upstream artifact, 4 runtime failure. Errors print a single
/// "ERROR <category>: <message>" line on stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace dsamp::cli
