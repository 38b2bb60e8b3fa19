#include "qfk/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace qfk {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

CheckRecord CheckRecord::upper(std::string check, std::string anchor, double observed,
                               double target) {
  CheckRecord r;
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.observed = observed;
  r.target = target;
  r.pass = std::isfinite(observed) && observed <= target;
  return r;
}

CheckRecord CheckRecord::lower(std::string check, std::string anchor, double observed,
                               double target) {
  CheckRecord r;
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.observed = observed;
  r.target = target;
  r.pass = std::isfinite(observed) && observed >= target;
  return r;
}

CheckRecord CheckRecord::window(std::string check, std::string anchor, double observed,
                                double lo, double hi) {
  CheckRecord r;
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.observed = observed;
  r.target = hi;
  r.has_window = true;
  r.window_lo = lo;
  r.window_hi = hi;
  r.pass = std::isfinite(observed) && observed >= lo && observed <= hi;
  return r;
}

bool RunReport::all_pass() const {
  for (const CheckRecord& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["preset"] = preset;
  j["config"] = {{"n", n}, {"d", d}, {"slices", num_slices}, {"h", h}, {"seed", seed}};
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckRecord& c : checks) {
    nlohmann::ordered_json rec;
    rec["check"] = c.check;
    rec["anchor"] = c.anchor;
    rec["observed"] = c.observed;
    rec["target"] = c.target;
    if (c.has_window) rec["window"] = {c.window_lo, c.window_hi};
    rec["pass"] = c.pass;
    j["checks"].push_back(rec);
  }
  if (!orders.empty()) {
    j["orders"] = nlohmann::ordered_json::array();
    for (const OrderRow& row : orders) {
      nlohmann::ordered_json rec;
      rec["study"] = row.study;
      rec["h"] = row.h;
      rec["error"] = row.error;
      if (std::isnan(row.order)) rec["order"] = "exact";
      else rec["order"] = row.order;
      j["orders"].push_back(rec);
    }
  }
  if (!observations.empty()) {
    j["observations"] = nlohmann::ordered_json::array();
    for (const Observation& obs : observations) {
      nlohmann::ordered_json rec;
      rec["name"] = obs.name;
      rec["value"] = obs.value;
      j["observations"].push_back(rec);
    }
  }
  return j.dump(2) + "\n";
}

std::string RunReport::to_csv() const {
  std::string out = "check,anchor,observed,target,pass\n";
  for (const CheckRecord& c : checks) {
    out += c.check + "," + c.anchor + "," + format_double(c.observed) + "," +
           format_double(c.target) + "," + (c.pass ? "1" : "0") + "\n";
  }
  return out;
}

void write_report_files(const RunReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  {
    std::ofstream json_out(dir / "report.json", std::ios::binary);
    json_out << report.to_json();
  }
  {
    std::ofstream csv_out(dir / "report.csv", std::ios::binary);
    csv_out << report.to_csv();
  }
}

}  // namespace qfk
