#include "sofmdim/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sofmdim/errors.hpp"

namespace sofmdim {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InvalidArgument("expected a number, got " + j.dump());
}

json space_to_json(const FinitePseudometricSpace& space) {
  return {{"n", space.size()}, {"dist", space.table()}};
}

FinitePseudometricSpace space_from_json(const json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    auto dist = j.at("dist").get<std::vector<std::vector<double>>>();
    if (dist.size() != n) throw InvalidArgument("space: dist has " + std::to_string(dist.size()) + " rows, n = " + std::to_string(n));
    FinitePseudometricSpace space(dist);
    const auto problems = validate_space(space);
    if (!problems.empty()) throw InvalidArgument("space: " + problems.front());
    return space;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("space: ") + e.what());
  }
}

json sofic_to_json(const SoficApproximation& sigma) {
  json entries = json::array();
  for (const auto& [g, perm] : sigma.table()) {
    entries.push_back({{"element", sigma.group().format(g)},
                       {"perm", std::vector<std::uint32_t>(perm.images().begin(), perm.images().end())}});
  }
  return {{"d", sigma.d()}, {"entries", entries}};
}

SoficApproximation sofic_from_json(const json& j, const GroupModel& group) {
  try {
    SoficApproximation sigma(group, j.at("d").get<std::size_t>());
    for (const auto& e : j.at("entries")) {
      sigma.set(group.parse(e.at("element").get<std::string>()),
                Permutation(e.at("perm").get<std::vector<std::uint32_t>>()));
    }
    return sigma;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("sofic approximation: ") + e.what());
  }
}

json system_to_json(const DynSystem& sys) {
  json gens = json::object();
  const auto labels = sys.group().generator_labels();
  for (std::size_t k = 0; k < labels.size(); ++k) gens[labels[k]] = sys.generator_maps()[k];
  return {{"space", space_to_json(sys.space())},
          {"group", sys.group().name()},
          {"generators", gens},
          {"strict_action", sys.strict_action()}};
}

DynSystem system_from_json(const json& j) {
  try {
    const GroupModel group = GroupModel::from_name(j.at("group").get<std::string>());
    std::vector<PointMap> maps;
    for (const auto& label : group.generator_labels())
      maps.push_back(j.at("generators").at(label).get<PointMap>());
    return DynSystem(space_from_json(j.at("space")), group, std::move(maps),
                     j.at("strict_action").get<bool>());
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("system: ") + e.what());
  }
}

std::string stage_series_csv(const StageSeries& series) {
  std::ostringstream out;
  out << "stage_index,d,count,exactness,value\n";
  for (const auto& s : series.stages)
    out << s.index << ',' << s.d << ',' << s.count << ',' << to_string(s.exactness) << ','
        << format_double(s.value) << '\n';
  return out.str();
}

json stage_summary_json(const StageSeries& series) {
  return {{"liminf_proxy", json_number(series.liminf_proxy)},
          {"limsup_proxy", json_number(series.limsup_proxy)},
          {"tail_size", series.tail_size}};
}

json report_to_json(const VerificationReport& report) {
  json quantities = json::object();
  for (const auto& [k, v] : report.quantities) quantities[k] = json_number(v);
  json provenance = json::object();
  for (const auto& [k, e] : report.provenance) provenance[k] = to_string(e);
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"lhs", json_number(c.lhs)},
                      {"rhs", json_number(c.rhs)},
                      {"slack", json_number(c.slack)},
                      {"pass", c.pass()},
                      {"note", c.note}});
  }
  return {{"instance", report.instance},
          {"quantities", quantities},
          {"provenance", provenance},
          {"checks", checks},
          {"pass", report.pass()}};
}

namespace {

std::vector<const NumberedReport*> by_id(std::span<const NumberedReport> reports) {
  std::vector<const NumberedReport*> order;
  for (const auto& r : reports) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](auto* a, auto* b) { return a->instance_id < b->instance_id; });
  return order;
}

}  // namespace

std::string render_reports(std::span<const NumberedReport> reports, ReportFormat format) {
  const auto order = by_id(reports);
  if (format == ReportFormat::json) {
    json all = json::array();
    for (const auto* r : order) {
      json j = report_to_json(r->report);
      j["instance_id"] = r->instance_id;
      all.push_back(std::move(j));
    }
    return all.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "instance_id,inequality_name,lhs,rhs,slack,pass\n";
  for (const auto* r : order)
    for (const auto& c : r->report.checks)
      out << r->instance_id << ',' << c.name << ',' << format_double(c.lhs) << ','
          << format_double(c.rhs) << ',' << format_double(c.slack) << ','
          << (c.pass() ? "true" : "false") << '\n';
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

void emit_report(std::span<const NumberedReport> reports, ReportFormat format,
                 const std::filesystem::path& path) {
  if (reports.empty()) throw InvalidArgument("emit_report: no results");
  write_file_atomic(path, render_reports(reports, format));
}

}  // namespace sofmdim
