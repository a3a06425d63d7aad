#include "cliffsub/app/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cliffsub/error.hpp"

namespace cliffsub::app {

std::string format_double(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  if (x == 0.0) x = 0.0;  // fold -0 into +0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

namespace {

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

void write_scalar(std::ostringstream& os, const Json& v) {
  if (v.is_number_float()) {
    const double x = v.get<double>();
    // Non-finite values are not valid JSON numbers; emit them as strings.
    if (std::isfinite(x)) os << format_double(x);
    else os << '"' << format_double(x) << '"';
  } else {
    os << v.dump();
  }
}

void write(std::ostringstream& os, const Json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  if (v.is_object()) {
    if (v.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (const auto& [key, item] : v.items()) {
      if (!first) os << ",\n";
      first = false;
      os << pad << Json(key).dump() << ": ";
      write(os, item, depth + 1);
    }
    os << '\n' << close << '}';
  } else if (v.is_array()) {
    if (v.empty()) {
      os << "[]";
      return;
    }
    bool flat = true;
    for (const auto& item : v) flat = flat && is_scalar(item);
    if (flat) {
      os << '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        write_scalar(os, v[i]);
      }
      os << ']';
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ",\n";
      os << pad;
      write(os, v[i], depth + 1);
    }
    os << '\n' << close << ']';
  } else {
    write_scalar(os, v);
  }
}

}  // namespace

std::string dump_json(const Json& value) {
  std::ostringstream os;
  write(os, value, 0);
  os << '\n';
  return os.str();
}

Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const FourVector& v) { return Json::array({v[0], v[1], v[2], v[3]}); }

Json to_json(const Eigen::MatrixXcd& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array();
    Json ir = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return Json{{"re", re}, {"im", im}};
}

Json to_json(const CliffordElement& x) {
  Json terms = Json::array();
  for (const auto& [blade, c] : x.terms()) {
    Json gens = Json::array();
    for (std::size_t i = 0; i < 64; ++i) {
      if (blade.contains(i)) gens.push_back(i);
    }
    terms.push_back(Json{{"blade", gens}, {"re", c.real()}, {"im", c.imag()}});
  }
  return terms;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> fields) {
  if (fields.size() != header_.size()) throw UsageError("CSV row width differs from header");
  rows_.push_back(std::move(fields));
}

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_row(std::ostringstream& os, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << quote(row[i]);
  }
  os << "\r\n";
}

}  // namespace

std::string CsvTable::str() const {
  std::ostringstream os;
  write_row(os, header_);
  for (const auto& r : rows_) write_row(os, r);
  return os.str();
}

}  // namespace cliffsub::app
