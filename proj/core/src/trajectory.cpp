#include "c2te/trajectory.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "c2te/errors.hpp"

namespace c2te {

using nlohmann::json;

const VehicleRecord* StepRecord::find(int id) const {
  for (const VehicleRecord& v : vehicles) {
    if (v.state.id == id) return &v;
  }
  return nullptr;
}

namespace {

constexpr const char* kFormat = "c2te-trajectory";
constexpr int kFormatVersion = 1;

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorKind::Parse, "trajectory parse error: " + what);
}

Stage stage_from(const std::string& text) {
  if (text == "premerge") return Stage::PreMerge;
  if (text == "merge") return Stage::Merge;
  parse_fail("unknown stage '" + text + "'");
}

Behavior behavior_from(const std::string& text) {
  if (text == "normal") return Behavior::Normal;
  if (text == "broken") return Behavior::Broken;
  if (text == "non_merging") return Behavior::NonMerging;
  parse_fail("unknown behavior '" + text + "'");
}

json record_to_json(const StepRecord& rec) {
  json vehicles = json::array();
  for (const VehicleRecord& v : rec.vehicles) {
    json item = {{"id", v.state.id},
                 {"x", v.state.x},
                 {"y", v.state.y},
                 {"theta", v.state.theta},
                 {"v", v.state.v},
                 {"psi", v.state.psi},
                 {"lane0", v.state.lane0},
                 {"stage", to_string(v.state.stage)},
                 {"behavior", to_string(v.state.behavior)},
                 {"ux", v.command.ux},
                 {"uy", v.command.uy},
                 {"fallback", v.fallback}};
    if (v.state.cruise_speed) item["cruise"] = *v.state.cruise_speed;
    vehicles.push_back(std::move(item));
  }
  json out = {{"type", "step"},
              {"k", rec.k},
              {"t", rec.t},
              {"target", {{"x", rec.target.x}, {"y", rec.target.y}, {"v", rec.target.v}}},
              {"vehicles", std::move(vehicles)}};
  if (!rec.notes.empty()) out["notes"] = rec.notes;
  return out;
}

StepRecord record_from_json(const json& node) {
  StepRecord rec;
  rec.k = node.at("k").get<long>();
  rec.t = node.at("t").get<double>();
  const json& tgt = node.at("target");
  rec.target = {tgt.at("x").get<double>(), tgt.at("y").get<double>(), tgt.at("v").get<double>()};
  for (const json& item : node.at("vehicles")) {
    VehicleRecord v;
    v.state.id = item.at("id").get<int>();
    v.state.x = item.at("x").get<double>();
    v.state.y = item.at("y").get<double>();
    v.state.theta = item.at("theta").get<double>();
    v.state.v = item.at("v").get<double>();
    v.state.psi = item.at("psi").get<double>();
    v.state.lane0 = item.value("lane0", 0);
    v.state.stage = stage_from(item.at("stage").get<std::string>());
    v.state.behavior = behavior_from(item.at("behavior").get<std::string>());
    if (item.contains("cruise")) v.state.cruise_speed = item["cruise"].get<double>();
    v.command = {item.at("ux").get<double>(), item.at("uy").get<double>()};
    v.fallback = item.value("fallback", false);
    rec.vehicles.push_back(std::move(v));
  }
  if (node.contains("notes")) rec.notes = node["notes"].get<std::vector<std::string>>();
  return rec;
}

// Shortest representation that round-trips.
void put_number(std::string& line, double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  line.append(buf, res.ptr);
}

}  // namespace

void write_jsonl(std::ostream& out, const TrajectoryLog& log) {
  json header = {{"type", "header"},
                 {"format", kFormat},
                 {"version", kFormatVersion},
                 {"scenario", log.scenario},
                 {"dt", log.dt}};
  out << header.dump() << '\n';
  for (const StepRecord& rec : log.records) out << record_to_json(rec).dump() << '\n';
  if (log.abort) {
    json line = {{"type", "abort"},
                 {"kind", log.abort->kind},
                 {"message", log.abort->message},
                 {"t", log.abort->t},
                 {"ids", log.abort->ids}};
    out << line.dump() << '\n';
  }
}

void write_jsonl(const std::filesystem::path& path, const TrajectoryLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  write_jsonl(out, log);
}

TrajectoryLog read_jsonl(std::istream& in) {
  TrajectoryLog log;
  std::string line;
  bool have_header = false;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json node = json::parse(line);
      const std::string type = node.at("type").get<std::string>();
      if (type == "header") {
        if (node.value("format", "") != kFormat) parse_fail("not a trajectory log");
        log.scenario = node.value("scenario", "");
        log.dt = node.at("dt").get<double>();
        have_header = true;
      } else if (type == "step") {
        if (!have_header) parse_fail("step record before header");
        log.records.push_back(record_from_json(node));
      } else if (type == "abort") {
        AbortInfo info;
        info.kind = node.at("kind").get<std::string>();
        info.message = node.value("message", "");
        info.t = node.value("t", 0.0);
        info.ids = node.value("ids", std::vector<int>{});
        log.abort = std::move(info);
      } else {
        parse_fail("unknown line type '" + type + "'");
      }
    } catch (const json::exception& e) {
      parse_fail("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) parse_fail("missing header line");
  return log;
}

TrajectoryLog read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot read trajectory '" + path.string() + "'");
  return read_jsonl(in);
}

void write_csv(std::ostream& out, const TrajectoryLog& log) {
  out << kCsvHeader << '\n';
  std::string line;
  for (const StepRecord& rec : log.records) {
    for (const VehicleRecord& v : rec.vehicles) {
      line.clear();
      put_number(line, rec.t);
      line += ',';
      line += std::to_string(v.state.id);
      for (double value : {v.state.x, v.state.y, v.state.theta, v.state.v, v.state.psi}) {
        line += ',';
        put_number(line, value);
      }
      line += ',';
      line += to_string(v.state.stage);
      line += ',';
      line += to_string(v.state.behavior);
      line += ',';
      put_number(line, v.command.ux);
      line += ',';
      put_number(line, v.command.uy);
      line += v.fallback ? ",1\n" : ",0\n";
      out << line;
    }
  }
}

void write_csv(const std::filesystem::path& path, const TrajectoryLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  write_csv(out, log);
}

}  // namespace c2te
