#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fusionlab/numeric.hpp"

namespace fusionlab {

struct CheckRecord {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct CheckReport {
  std::vector<CheckRecord> records;

  void add(const std::string& name, double residual, double tolerance) {
    records.push_back({name, residual, tolerance, residual <= tolerance});
  }
  void add_flag(const std::string& name, bool ok) {
    records.push_back({name, ok ? 0.0 : 1.0, 0.0, ok});
  }
  void merge(const CheckReport& other, const std::string& prefix) {
    for (const auto& r : other.records)
      records.push_back({prefix + r.name, r.residual, r.tolerance, r.pass});
  }
  bool pass() const {
    return std::all_of(records.begin(), records.end(),
                       [](const CheckRecord& r) { return r.pass; });
  }
  double worst() const {
    double w = 0.0;
    for (const auto& r : records) w = std::max(w, r.residual);
    return w;
  }
};

}  // namespace fusionlab
