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

#ifndef RELGRAPH_TEXT_UTIL_H_
#define RELGRAPH_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace relgraph {

// ASCII lower-casing; bytes >= 0x80 pass through untouched.
std::string ToLowerAscii(std::string_view s);
std::string_view Trim(std::string_view s);
std::vector<std::string> SplitWhitespace(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);

}  // namespace relgraph

#endif  // RELGRAPH_TEXT_UTIL_H_
