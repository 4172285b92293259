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

#include "ldp_ab/csv_io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_format.h"

namespace ldp_ab {

namespace {

// Calls `parse` on every non-blank line except a leading header.
absl::Status ForEachValueLine(
    std::istream& in, absl::string_view header,
    const std::function<absl::Status(absl::string_view, int)>& parse) {
  std::string line;
  int line_number = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view view = line;
    if (line_number == 1 && absl::StartsWith(view, "\xEF\xBB\xBF")) {
      view.remove_prefix(3);
    }
    view = absl::StripAsciiWhitespace(view);  // also drops a trailing '\r'
    if (view.empty()) continue;
    if (first_content) {
      first_content = false;
      if (absl::EqualsIgnoreCase(view, header)) continue;
    }
    if (absl::Status s = parse(view, line_number); !s.ok()) return s;
  }
  if (in.bad()) return absl::DataLossError("read error");
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::vector<double>> ReadCounters(std::istream& in) {
  std::vector<double> values;
  absl::Status status = ForEachValueLine(
      in, "value", [&](absl::string_view text, int line) -> absl::Status {
        double v = 0;
        const auto [end, ec] =
            std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || end != text.data() + text.size() ||
            !std::isfinite(v)) {
          return absl::DataLossError(absl::StrFormat(
              "line %d: '%s' is not a finite number", line, std::string(text)));
        }
        values.push_back(v);
        return absl::OkStatus();
      });
  if (!status.ok()) return status;
  return values;
}

absl::StatusOr<std::vector<double>> ReadCountersFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  absl::StatusOr<std::vector<double>> values = ReadCounters(in);
  if (!values.ok()) {
    return absl::DataLossError(
        absl::StrFormat("%s: %s", path, values.status().message()));
  }
  return values;
}

absl::StatusOr<std::vector<bool>> ReadFlags(std::istream& in) {
  std::vector<bool> flags;
  absl::Status status = ForEachValueLine(
      in, "flag", [&](absl::string_view text, int line) -> absl::Status {
        if (text == "1" || absl::EqualsIgnoreCase(text, "true")) {
          flags.push_back(true);
        } else if (text == "0" || absl::EqualsIgnoreCase(text, "false")) {
          flags.push_back(false);
        } else {
          return absl::DataLossError(absl::StrFormat(
              "line %d: '%s' is not a flag (0/1/true/false)", line,
              std::string(text)));
        }
        return absl::OkStatus();
      });
  if (!status.ok()) return status;
  return flags;
}

absl::StatusOr<std::vector<bool>> ReadFlagsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  absl::StatusOr<std::vector<bool>> flags = ReadFlags(in);
  if (!flags.ok()) {
    return absl::DataLossError(
        absl::StrFormat("%s: %s", path, flags.status().message()));
  }
  return flags;
}

absl::Status WriteFileAtomically(const std::string& path,
                                 std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      return absl::UnavailableError(
          absl::StrFormat("cannot write '%s'", tmp));
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      return absl::UnavailableError(
          absl::StrFormat("short write to '%s'", tmp));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    return absl::UnavailableError(absl::StrFormat(
        "cannot rename '%s' to '%s': %s", tmp, path, ec.message()));
  }
  return absl::OkStatus();
}

}  // namespace ldp_ab
