#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <string>
#include <vector>

#include "cliffsub/clifford.hpp"
#include "cliffsub/spinor.hpp"

namespace cliffsub::app {

using Json = nlohmann::json;

/// Fixed %.12e rendering used for every floating-point value we emit.
std::string format_double(double x);

/// Pretty JSON with sorted keys and format_double floats. Arrays whose
/// elements are all scalars stay on one line.
std::string dump_json(const Json& value);

Json to_json(Complex z);
Json to_json(const FourVector& v);
/// {"re": [[...]], "im": [[...]]}
Json to_json(const Eigen::MatrixXcd& m);
Json to_json(const CliffordElement& x);

/// Comma-separated table with a header row. Fields holding a comma, quote
/// or line break are quoted, with embedded quotes doubled.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> fields);
  std::string str() const;

  static std::string number(double x) { return format_double(x); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cliffsub::app
