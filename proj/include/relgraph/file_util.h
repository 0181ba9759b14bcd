// Copyright 2026 The Relgraph Authors.
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

#ifndef RELGRAPH_FILE_UTIL_H_
#define RELGRAPH_FILE_UTIL_H_

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

namespace relgraph {

// Writes a file by streaming into a sibling temporary and renaming it over
// `path` once the writer returns. A failed or interrupted write never leaves a
// truncated file at `path`.
void WriteFileAtomically(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& writer,
                         bool binary = false);

void WriteTextAtomically(const std::filesystem::path& path,
                         const std::string& text);

std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace relgraph

#endif  // RELGRAPH_FILE_UTIL_H_
