#pragma once
// Refinement-study reports: one row per mesh level, an observed order between
// consecutive rows, and deterministic CSV/JSON renderings.

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fvlab/io.hpp"

namespace fvlab {

struct ReportRow {
  double h = 0.0;                // representative mesh size of the level
  double dt = 0.0;               // time step used at this level
  std::vector<double> extras;    // aligned with ConvergenceReport::extra_names
  double value = 0.0;            // tracked quantity (error, residual, ...)
};

struct ConvergenceReport {
  std::string experiment;
  std::string value_name = "value";
  std::vector<std::string> extra_names;
  std::vector<ReportRow> rows;
  std::string config_hash;  // fingerprint of the configuration that produced it

  void add_row(ReportRow row) {
    if (row.extras.size() != extra_names.size())
      throw std::invalid_argument("ConvergenceReport: extras do not match extra_names");
    rows.push_back(std::move(row));
  }

  // log(value_k / value_{k+1}) / log(h_k / h_{k+1}) for consecutive rows;
  // NaN when either value is not strictly positive or the sizes coincide.
  std::vector<double> observed_orders() const {
    std::vector<double> orders;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      const ReportRow& a = rows[k];
      const ReportRow& b = rows[k + 1];
      if (a.value > 0.0 && b.value > 0.0 && a.h > 0.0 && b.h > 0.0 && a.h != b.h)
        orders.push_back(std::log(a.value / b.value) / std::log(a.h / b.h));
      else
        orders.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    return orders;
  }

  std::string to_csv() const {
    std::ostringstream out;
    out << "h,dt";
    for (const std::string& name : extra_names) out << ',' << name;
    out << ',' << value_name << ",observed_order\n";
    const std::vector<double> orders = observed_orders();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const ReportRow& row = rows[k];
      out << format_double(row.h) << ',' << format_double(row.dt);
      for (double e : row.extras) out << ',' << format_double(e);
      out << ',' << format_double(row.value) << ',';
      if (k > 0 && std::isfinite(orders[k - 1])) out << format_double(orders[k - 1]);
      out << '\n';
    }
    return out.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json jrows = nlohmann::json::array();
    for (const ReportRow& row : rows) {
      nlohmann::json jrow{{"h", row.h}, {"dt", row.dt}, {"value", row.value}};
      nlohmann::json jextras = nlohmann::json::object();
      for (std::size_t e = 0; e < extra_names.size(); ++e)
        jextras[extra_names[e]] = row.extras[e];
      jrow["extras"] = jextras;
      jrows.push_back(jrow);
    }
    nlohmann::json jorders = nlohmann::json::array();
    for (double o : observed_orders()) {
      if (std::isfinite(o))
        jorders.push_back(o);
      else
        jorders.push_back(nullptr);
    }
    return nlohmann::json{{"experiment", experiment},
                          {"value_name", value_name},
                          {"config_hash", config_hash},
                          {"rows", jrows},
                          {"observed_orders", jorders}};
  }
};

}  // namespace fvlab
