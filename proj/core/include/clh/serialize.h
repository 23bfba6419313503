// Copyright 2026 The clh Authors
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

#ifndef CLH_SERIALIZE_H
#define CLH_SERIALIZE_H

#include <string>
#include <string_view>

#include "clh/guide.h"
#include "clh/model.h"

namespace clh {

// JSON encodings. Floats are written as the shortest decimal that parses back to the same
// double, so every round trip is bit exact. Decoding either returns a complete object or
// throws ParseError naming the offending location.

std::string serialize_instance(const Instance &inst);
Instance deserialize_instance(std::string_view text);

std::string serialize_guide(const Guide &guide);
Guide deserialize_guide(std::string_view text);

/// {"rows": r, "cols": c, "entries": [[re, im], ...]} row-major; "dim" replaces rows/cols when square.
std::string serialize_matrix(const ComplexMatrix &m);
ComplexMatrix deserialize_matrix(std::string_view text);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &contents);

}  // namespace clh

#endif
