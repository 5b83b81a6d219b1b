/*
   Copyright 2026 The rittlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// JSON and CSV plumbing shared by the modules and the CLI.

#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ritt/numkernel.hpp"

namespace ritt {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "rittlab-report/1";

/// { "n": int, "p": float, "re": [[...]], "im": [[...]] }, row-major.
inline Json operator_to_json(const Operator& t) {
  const Eigen::Index n = t.dim();
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    Json rrow = Json::array();
    Json irow = Json::array();
    for (Eigen::Index j = 0; j < n; ++j) {
      rrow.push_back(t.matrix()(i, j).real());
      irow.push_back(t.matrix()(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  Json out;
  out["n"] = n;
  out["p"] = t.p();
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

inline Operator operator_from_json(const Json& j) {
  require(j.is_object(), Errc::bad_parameters, "operator JSON must be an object");
  for (const auto& [key, value] : j.items()) {
    require(key == "n" || key == "p" || key == "re" || key == "im", Errc::bad_parameters,
            "unknown operator key '" + key + "'");
  }
  require(j.contains("n") && j.contains("re"), Errc::bad_parameters, "operator JSON needs 'n' and 're'");
  const auto n = j.at("n").get<Eigen::Index>();
  require(n > 0, Errc::bad_parameters, "operator dimension must be positive");
  const double p = j.contains("p") ? j.at("p").get<double>() : 2.0;
  Matrix m = Matrix::Zero(n, n);
  auto read = [&](const char* key, bool imag) {
    const Json& rows = j.at(key);
    require(rows.is_array() && static_cast<Eigen::Index>(rows.size()) == n, Errc::bad_parameters,
            std::string("'") + key + "' must have n rows");
    for (Eigen::Index i = 0; i < n; ++i) {
      const Json& row = rows[static_cast<std::size_t>(i)];
      require(row.is_array() && static_cast<Eigen::Index>(row.size()) == n, Errc::bad_parameters,
              std::string("'") + key + "' rows must have n entries");
      for (Eigen::Index c = 0; c < n; ++c) {
        const double v = row[static_cast<std::size_t>(c)].get<double>();
        if (imag) {
          m(i, c).imag(v);
        } else {
          m(i, c).real(v);
        }
      }
    }
  };
  read("re", false);
  if (j.contains("im")) read("im", true);
  return Operator(std::move(m), p);
}

/// Finite doubles as numbers, non-finite values as null.
inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(Errc::io_failure, "write to '" + path + "' failed");
}

inline Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::bad_parameters, origin + ": " + e.what());
  }
}

/// Deterministic report text: two-space indentation and a trailing newline.
inline std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

/// RFC 4180 CSV assembled in memory.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : columns_(header.size()) { add_row(header); }

  void add_row(const std::vector<std::string>& cells) {
    require(cells.size() == columns_, Errc::bad_parameters, "CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += escape(cells[i]);
    }
    text_ += "\r\n";
  }

  const std::string& str() const { return text_; }

  static std::string num(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
  }

 private:
  static std::string escape(const std::string& cell) {
    if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }

  std::size_t columns_;
  std::string text_;
};

}  // namespace ritt
