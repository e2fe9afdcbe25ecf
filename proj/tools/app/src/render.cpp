#include <cstdio>
#include <sstream>

#include "manna/app/commands.hpp"

namespace manna::app {
namespace {

std::string num(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(6);
    os << v.get<double>() + 0.0;
    return os.str();
  }
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  return v.dump();
}

std::string tuple(const json& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + num(v[k]);
  return out + ")";
}

std::string list(const json& v) {
  if (v.empty()) return "none";
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? " " : "") + num(v[k]);
  return out;
}

void allocation(std::ostringstream& os, const json& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) os << "  z_" << i + 1 << " = " << tuple(rows[i]) << "\n";
}

void fairness(std::ostringstream& os, const json& f) {
  const json& ef = f["envy_free"];
  const json& fs = f["fair_share"];
  const json& core = f["weak_core"];
  const json& eff = f["efficient"];
  os << "fairness: " << (f["passed"].get<bool>() ? "passed" : "FAILED") << "\n";
  os << "  envy-free:  " << num(ef["passed"]) << " (worst margin " << num(ef["margin"]) << ")\n";
  os << "  fair share: " << num(fs["passed"]) << " (worst margin " << num(fs["margin"]) << ")\n";
  os << "  weak core:  " << core["status"].get<std::string>();
  if (!core["blocking_coalition"].empty()) os << " by {" << list(core["blocking_coalition"]) << "}";
  os << "\n";
  os << "  efficient:  " << num(eff["passed"]) << " (gain " << num(eff["gain"]) << ")\n";
}

std::string classify_text(const json& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s (t*=%.6f)\n", r["kind"].get<std::string>().c_str(), r["margin"].get<double>());
  return buf;
}

std::string solve_text(const json& r) {
  std::ostringstream os;
  const std::size_t s = r["selected"].get<std::size_t>();
  os << "kind: " << r["kind"].get<std::string>() << "    rule: " << r["rule"].get<std::string>() << "\n";
  os << "profiles: " << r["count"] << (r["exhaustive"].get<bool>() ? "" : " (search cut short)") << "\n";
  os << "selected #" << s << ": U = " << tuple(r["profiles"][s]) << "\n";
  os << "allocation:\n";
  allocation(os, r["allocations"][s]);
  if (r.contains("division")) {
    const json& d = r["division"];
    os << "price: " << tuple(d["price"]) << "    budget: " << d["budget"] << "\n";
    if (d.contains("multipliers")) os << "multipliers: " << tuple(d["multipliers"]) << "\n";
    const json& k = r["kkt"];
    os << "kkt: " << k["summary"].get<std::string>() << " (budget residual " << num(k["max_budget_residual"])
       << ", demand residual " << num(k["max_demand_residual"]) << ")\n";
  }
  fairness(os, r["fairness"]);
  return os.str();
}

std::string enumerate_text(const json& r) {
  std::ostringstream os;
  const json& divisions = r["divisions"];
  os << r["count"] << " competitive profiles" << (r["exhaustive"].get<bool>() ? "" : " (search cut short)") << "\n";
  for (std::size_t k = 0; k < divisions.size(); ++k)
    os << (r["selected"] == k ? " * " : "   ") << k << ": " << tuple(divisions[k]["profile"]) << "\n";
  if (!r["selected"].is_null()) {
    const std::size_t s = r["selected"].get<std::size_t>();
    os << "selected #" << s << " maximizes the product of disutilities\n";
    allocation(os, divisions[s]["allocation"]);
    os << "  price " << tuple(divisions[s]["price"]) << "\n";
  }
  return os.str();
}

std::string audit_text(const json& r) {
  std::ostringstream os;
  os << "allocation (" << r["source"].get<std::string>() << "):\n";
  allocation(os, r["allocation"]);
  if (r.contains("profile")) os << "profile: " << tuple(r["profile"]) << "\n";
  fairness(os, r["fairness"]);
  if (r.contains("axioms")) {
    const json& a = r["axioms"];
    os << "axioms (" << a["rule"].get<std::string>() << "): " << (a["passed"].get<bool>() ? "passed" : "FAILED")
       << "\n";
    for (const auto& [name, res] : a["axioms"].items())
      os << "  " << name << ": " << res["checks"] << " checks, " << res["failures"] << " failures, "
         << res["skipped"] << " skipped\n";
  }
  return os.str();
}

std::string components_text(const json& r) {
  std::ostringstream os;
  os << "components: " << r["count"] << "\n";
  os << "envy-free cuts: " << list(r["ef_cuts"]) << "\n";
  os << "interior splits: " << list(r["interior_splits"]) << "\n";
  os << "ratios: " << tuple(r["ratio_order"]) << "\n";
  if (r.contains("oracle")) os << "grid oracle: " << r["oracle"] << "\n";
  return os.str();
}

}  // namespace

std::string render(Command command, const json& report) {
  switch (command) {
    case Command::Classify: return classify_text(report);
    case Command::Solve: return solve_text(report);
    case Command::Enumerate: return enumerate_text(report);
    case Command::Audit: return audit_text(report);
    case Command::Components: return components_text(report);
  }
  return report.dump(2) + "\n";
}

std::string render_demo(const json& report) {
  std::ostringstream os;
  os << report["name"].get<std::string>() << ": " << (report["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
  os << "  " << report["title"].get<std::string>() << "\n";
  for (const json& c : report["checks"])
    os << "  " << (c["passed"].get<bool>() ? "ok    " : "FAIL  ") << c["name"].get<std::string>() << ": "
       << c["detail"].get<std::string>() << "\n";
  return os.str();
}

}  // namespace manna::app
