//
// Copyright 2026 The curvmix Authors
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
//

#ifndef CURVMIX_TOOLS_COMMANDS_H_
#define CURVMIX_TOOLS_COMMANDS_H_

namespace curvmix::cli {

// Parses argv, dispatches to the chosen subcommand and returns the process
// exit code: 0 success, 2 bad arguments, 3 numerical failure, 4 I/O failure.
int Run(int argc, char** argv);

}  // namespace curvmix::cli

#endif  // CURVMIX_TOOLS_COMMANDS_H_
