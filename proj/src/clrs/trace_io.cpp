#include "narx/clrs/trace_io.hpp"

#include <istream>
#include <json.hpp>

#include "narx/core/error.hpp"

namespace narx::clrs {

namespace {

using Json = nlohmann::ordered_json;

NamedValues named(const ProbeSet& set) {
  NamedValues out;
  for (const auto& p : set) out.emplace_back(p.spec.name, p.values);
  return out;
}

Json to_object(const NamedValues& values) {
  Json obj = Json::object();
  for (const auto& [name, v] : values) obj[name] = v;
  return obj;
}

NamedValues from_object(const Json& obj, const char* field) {
  require(obj.is_object(), ErrorKind::Format, std::string("trace field '") + field + "' is not an object");
  NamedValues out;
  for (const auto& [name, v] : obj.items()) {
    require(v.is_array(), ErrorKind::Format,
            std::string("trace field '") + field + "." + name + "' is not an array");
    out.emplace_back(name, v.get<std::vector<double>>());
  }
  return out;
}

}  // namespace

TraceRecord make_record(const AlgoInstance& inst, const AlgoTrace& trace) {
  TraceRecord rec;
  rec.algo = trace.algo;
  rec.seed = inst.seed;
  rec.n = inst.size;
  rec.inputs = named(trace.inputs);
  for (const auto& h : trace.hints) rec.hints.push_back(named(h));
  rec.outputs = named(trace.outputs);
  return rec;
}

std::string to_json_line(const TraceRecord& rec) {
  Json j;
  j["algo"] = std::string(to_string(rec.algo));
  j["seed"] = rec.seed;
  j["n"] = rec.n;
  j["inputs"] = to_object(rec.inputs);
  j["hints"] = Json::array();
  for (const auto& h : rec.hints) j["hints"].push_back(to_object(h));
  j["outputs"] = to_object(rec.outputs);
  return j.dump();
}

TraceRecord parse_json_line(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Format, std::string("trace line is not valid JSON: ") + e.what());
  }
  for (const char* key : {"algo", "seed", "n", "inputs", "hints", "outputs"})
    require(j.contains(key), ErrorKind::Format, std::string("trace line lacks '") + key + "'");
  TraceRecord rec;
  try {
    rec.algo = parse_algo(j["algo"].get<std::string>());
    rec.seed = j["seed"].get<std::uint64_t>();
    rec.n = j["n"].get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, std::string("bad trace header: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorKind::Format, e.what());
  }
  rec.inputs = from_object(j["inputs"], "inputs");
  require(j["hints"].is_array(), ErrorKind::Format, "trace field 'hints' is not an array");
  for (const auto& h : j["hints"]) rec.hints.push_back(from_object(h, "hints"));
  rec.outputs = from_object(j["outputs"], "outputs");
  return rec;
}

std::vector<TraceRecord> read_trace_file(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(parse_json_line(line));
    } catch (const Error& e) {
      fail(ErrorKind::Format, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace narx::clrs
