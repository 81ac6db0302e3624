// Copyright 2025 loganomaly Authors
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

#ifndef LOGANOMALY_CLI_HPP
#define LOGANOMALY_CLI_HPP

namespace loganomaly {

// Dispatches the subcommands (synth, train, detect, evaluate, features).
// Returns 0 on success, 1 on user error, 2 on internal error. Diagnostics
// go to stderr; data goes to files or stdout.
int run_command(int argc, const char* const* argv);

}  // namespace loganomaly

#endif  // LOGANOMALY_CLI_HPP
