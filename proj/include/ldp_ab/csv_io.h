// Copyright 2026 The LDP A/B Testing Authors
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

#ifndef LDP_AB_CSV_IO_H_
#define LDP_AB_CSV_IO_H_

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

// Single-column text files: one value per line, LF or CRLF, optional UTF-8
// BOM, optional header line, blank lines ignored.
//
// Unreadable files are kNotFound; malformed content is kDataLoss.
namespace ldp_ab {

// Header "value".
absl::StatusOr<std::vector<double>> ReadCounters(std::istream& in);
absl::StatusOr<std::vector<double>> ReadCountersFile(const std::string& path);

// Header "flag". Accepts 0/1 and true/false.
absl::StatusOr<std::vector<bool>> ReadFlags(std::istream& in);
absl::StatusOr<std::vector<bool>> ReadFlagsFile(const std::string& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
absl::Status WriteFileAtomically(const std::string& path,
                                 std::string_view contents);

}  // namespace ldp_ab

#endif  // LDP_AB_CSV_IO_H_
