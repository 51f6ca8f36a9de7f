#include "hrcsyn/store.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fcntl.h>
#include <fstream>
#include <map>
#include <unistd.h>

#include "hrcsyn/error.hpp"

namespace hrcsyn {

namespace {

constexpr std::array<std::string_view, 5> kCollections{
    collection::kTaskProperties, collection::kTaskResults, collection::kTaskDuration,
    collection::kTaskSynergy, collection::kPlans};

enum class Kind { String, Integer, Number, Boolean, Array, Object, IntervalOrNull, NumberOrNull };

struct FieldRule {
  const char* name;
  Kind kind;
};

bool matches(const Document& v, Kind kind) {
  switch (kind) {
    case Kind::String: return v.is_string();
    case Kind::Integer: return v.is_number_integer();
    case Kind::Number: return v.is_number();
    case Kind::Boolean: return v.is_boolean();
    case Kind::Array: return v.is_array();
    case Kind::Object: return v.is_object();
    case Kind::NumberOrNull: return v.is_null() || v.is_number();
    case Kind::IntervalOrNull:
      return v.is_null() || (v.is_object() && v.contains("start") && v.contains("end") &&
                             v["start"].is_number() && v["end"].is_number());
  }
  return false;
}

std::span<const FieldRule> schema(std::string_view collection) {
  static const FieldRule properties[] = {{"_id", Kind::String},    {"action", Kind::String},
                                         {"agents", Kind::Array},  {"region", Kind::String},
                                         {"description", Kind::String}};
  static const FieldRule results[] = {{"_id", Kind::String},     {"plan_id", Kind::String},
                                      {"seq", Kind::Integer},    {"task_id", Kind::String},
                                      {"agent", Kind::String},   {"interval", Kind::IntervalOrNull},
                                      {"success", Kind::Boolean}};
  static const FieldRule duration[] = {{"_id", Kind::String},  {"task_id", Kind::String}, {"agent", Kind::String},
                                       {"mean", Kind::Number}, {"std", Kind::Number},     {"count", Kind::Integer}};
  static const FieldRule synergy[] = {{"_id", Kind::String},           {"agent", Kind::String},
                                      {"own_task", Kind::String},      {"other_task", Kind::String},
                                      {"coefficient", Kind::Number},   {"std_error", Kind::Number},
                                      {"sample_count", Kind::Integer}, {"low_confidence", Kind::Boolean},
                                      {"ridge", Kind::Boolean},        {"clamped", Kind::Boolean},
                                      {"diagnostic", Kind::String}};
  static const FieldRule plans[] = {{"_id", Kind::String},
                                    {"kind", Kind::String},
                                    {"seed", Kind::Integer},
                                    {"assignment", Kind::Array},
                                    {"order", Kind::Object},
                                    {"predicted_makespan", Kind::NumberOrNull},
                                    {"simulated_makespan", Kind::NumberOrNull}};
  if (collection == collection::kTaskProperties) return properties;
  if (collection == collection::kTaskResults) return results;
  if (collection == collection::kTaskDuration) return duration;
  if (collection == collection::kTaskSynergy) return synergy;
  if (collection == collection::kPlans) return plans;
  throw UnknownCollection("'" + std::string(collection) + "'");
}

void fsync_file(const std::filesystem::path& path) {
  const int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) throw IoFailure("cannot reopen '" + path.string() + "' for sync");
  const int rc = ::fsync(fd);
  ::close(fd);
  if (rc != 0) throw IoFailure("fsync failed for '" + path.string() + "'");
}

Document interval_doc(const TimeInterval& t) {
  if (t.is_empty()) return nullptr;
  return Document{{"start", t.start()}, {"end", t.end()}};
}

TimeInterval interval_from(const Document& d) {
  if (d.is_null()) return TimeInterval::empty();
  return TimeInterval(d.at("start").get<double>(), d.at("end").get<double>());
}

Agent agent_from(const Document& d, const char* field) {
  try {
    return parse_agent(d.at(field).get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaViolation(std::string(field) + ": " + e.what());
  }
}

}  // namespace

void validate_document(std::string_view collection, const Document& doc) {
  if (!doc.is_object()) throw SchemaViolation("document must be an object");
  for (const auto& rule : schema(collection)) {
    auto it = doc.find(rule.name);
    if (it == doc.end()) throw SchemaViolation(std::string("missing field '") + rule.name + "'");
    if (!matches(*it, rule.kind)) throw SchemaViolation(std::string("field '") + rule.name + "' has the wrong type");
  }
}

Store::Store(std::filesystem::path root) : root_(std::move(root)) {}

std::span<const std::string_view> Store::collection_names() noexcept { return kCollections; }

std::filesystem::path Store::collection_path(std::string_view collection) const {
  if (std::find(kCollections.begin(), kCollections.end(), collection) == kCollections.end()) {
    throw UnknownCollection("'" + std::string(collection) + "'");
  }
  return root_ / (std::string(collection) + ".jsonl");
}

std::vector<Document> Store::read(std::string_view collection) const {
  const auto path = collection_path(collection);
  std::vector<Document> docs;
  std::ifstream in(path);
  if (!in) return docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      docs.push_back(Document::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw IoFailure(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return docs;
}

void Store::write(std::string_view collection, const std::vector<Document>& docs) {
  const auto path = collection_path(collection);
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw IoFailure("cannot create store root '" + root_.string() + "': " + ec.message());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot write '" + tmp.string() + "'");
    for (const auto& d : docs) out << d.dump() << '\n';
    out.flush();
    if (!out) throw IoFailure("short write to '" + tmp.string() + "'");
  }
  fsync_file(tmp);
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoFailure("cannot replace '" + path.string() + "': " + ec.message());
}

std::string Store::upsert(std::string_view collection, const Document& doc) {
  upsert_many(collection, std::span<const Document>(&doc, 1));
  return doc.at("_id").get<std::string>();
}

void Store::upsert_many(std::string_view collection, std::span<const Document> docs) {
  for (const auto& d : docs) validate_document(collection, d);
  auto existing = read(collection);
  std::map<std::string, std::size_t> position;
  for (std::size_t k = 0; k < existing.size(); ++k) position.emplace(existing[k].at("_id").get<std::string>(), k);
  for (const auto& d : docs) {
    const auto id = d.at("_id").get<std::string>();
    if (auto it = position.find(id); it != position.end()) {
      existing[it->second] = d;
    } else {
      position.emplace(id, existing.size());
      existing.push_back(d);
    }
  }
  write(collection, existing);
}

std::vector<Document> Store::query(std::string_view collection, const Document& filter) const {
  std::vector<Document> out;
  for (auto& d : read(collection)) {
    bool keep = true;
    for (const auto& [key, value] : filter.items()) {
      auto it = d.find(key);
      if (it == d.end() || *it != value) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(std::move(d));
  }
  return out;
}

std::optional<Document> Store::get(std::string_view collection, std::string_view id) const {
  auto docs = query(collection, Document{{"_id", std::string(id)}});
  if (docs.empty()) return std::nullopt;
  return std::move(docs.front());
}

std::size_t Store::count(std::string_view collection) const { return read(collection).size(); }

void Store::clear(std::string_view collection) {
  const auto path = collection_path(collection);
  std::error_code ec;
  std::filesystem::remove(path, ec);
  if (ec) throw IoFailure("cannot remove '" + path.string() + "': " + ec.message());
}

std::vector<ExecutionTrace> Store::export_traces(std::span<const std::string> plan_ids) const {
  std::map<std::string, ExecutionTrace, std::less<>> by_plan;
  for (const auto& d : read(collection::kTaskResults)) {
    auto record = execution_record_from(d);
    auto& trace = by_plan[record.plan_id];
    trace.plan_id = record.plan_id;
    trace.records.push_back(std::move(record));
  }
  std::vector<ExecutionTrace> out;
  for (const auto& id : plan_ids) {
    auto it = by_plan.find(id);
    if (it == by_plan.end()) throw UnknownPlan("'" + id + "' has no records in task_results");
    auto trace = it->second;
    std::stable_sort(trace.records.begin(), trace.records.end(),
                     [](const ExecutionRecord& a, const ExecutionRecord& b) { return a.seq < b.seq; });
    out.push_back(std::move(trace));
  }
  return out;
}

std::vector<ExecutionTrace> Store::export_traces() const {
  std::vector<std::string> ids;
  for (const auto& d : read(collection::kTaskResults)) {
    auto id = d.at("plan_id").get<std::string>();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(std::move(id));
  }
  return export_traces(ids);
}

void Store::import_traces(std::span<const ExecutionTrace> traces) {
  std::vector<Document> docs;
  for (const auto& trace : traces) {
    for (const auto& r : trace.records) docs.push_back(to_document(r));
  }
  upsert_many(collection::kTaskResults, docs);
}

Document to_document(const TaskSpec& spec) {
  Document agents = Document::array();
  for (Agent a : spec.eligible_agents.members()) agents.push_back(std::string(to_string(a)));
  return Document{{"_id", spec.id},
                  {"action", std::string(to_string(spec.action_kind))},
                  {"agents", agents},
                  {"region", spec.region},
                  {"description", spec.description}};
}

TaskSpec task_spec_from(const Document& doc) {
  validate_document(collection::kTaskProperties, doc);
  TaskSpec spec;
  spec.id = doc.at("_id").get<std::string>();
  try {
    spec.action_kind = parse_action_kind(doc.at("action").get<std::string>());
    for (const auto& a : doc.at("agents")) spec.eligible_agents.insert(parse_agent(a.get<std::string>()));
  } catch (const std::exception& e) {
    throw SchemaViolation(std::string("task_properties: ") + e.what());
  }
  spec.region = doc.at("region").get<std::string>();
  spec.description = doc.at("description").get<std::string>();
  return spec;
}

Document to_document(const ExecutionRecord& r) {
  return Document{{"_id", r.plan_id + "#" + std::to_string(r.seq)},
                  {"plan_id", r.plan_id},
                  {"seq", r.seq},
                  {"task_id", r.task_id},
                  {"agent", std::string(to_string(r.agent))},
                  {"interval", interval_doc(r.measured_interval)},
                  {"success", r.success}};
}

ExecutionRecord execution_record_from(const Document& doc) {
  validate_document(collection::kTaskResults, doc);
  ExecutionRecord r;
  r.plan_id = doc.at("plan_id").get<std::string>();
  r.seq = doc.at("seq").get<std::int64_t>();
  r.task_id = doc.at("task_id").get<std::string>();
  r.agent = agent_from(doc, "agent");
  try {
    r.measured_interval = interval_from(doc.at("interval"));
  } catch (const InvalidInterval& e) {
    throw SchemaViolation(std::string("interval: ") + e.what());
  }
  r.success = doc.at("success").get<bool>();
  return r;
}

Document to_document(const DurationStats& s) {
  return Document{{"_id", s.task_id},
                  {"task_id", s.task_id},
                  {"agent", std::string(to_string(s.agent))},
                  {"mean", s.mean},
                  {"std", s.std},
                  {"count", s.count}};
}

DurationStats duration_stats_from(const Document& doc) {
  validate_document(collection::kTaskDuration, doc);
  return DurationStats{doc.at("task_id").get<std::string>(), agent_from(doc, "agent"), doc.at("mean").get<double>(),
                       doc.at("std").get<double>(), doc.at("count").get<std::int64_t>()};
}

Document to_document(const SynergyDocument& s) {
  const auto agent = std::string(to_string(s.agent));
  return Document{{"_id", agent + ":" + s.own_task + ":" + s.other_task},
                  {"agent", agent},
                  {"own_task", s.own_task},
                  {"other_task", s.other_task},
                  {"coefficient", s.entry.coefficient},
                  {"std_error", s.entry.std_error},
                  {"sample_count", s.entry.sample_count},
                  {"low_confidence", s.entry.low_confidence},
                  {"ridge", s.entry.ridge},
                  {"clamped", s.entry.clamped},
                  {"diagnostic", s.entry.diagnostic}};
}

SynergyDocument synergy_document_from(const Document& doc) {
  validate_document(collection::kTaskSynergy, doc);
  SynergyDocument s;
  s.agent = agent_from(doc, "agent");
  s.own_task = doc.at("own_task").get<std::string>();
  s.other_task = doc.at("other_task").get<std::string>();
  s.entry.coefficient = doc.at("coefficient").get<double>();
  s.entry.std_error = doc.at("std_error").get<double>();
  s.entry.sample_count = doc.at("sample_count").get<std::int64_t>();
  s.entry.low_confidence = doc.at("low_confidence").get<bool>();
  s.entry.ridge = doc.at("ridge").get<bool>();
  s.entry.clamped = doc.at("clamped").get<bool>();
  s.entry.diagnostic = doc.at("diagnostic").get<std::string>();
  if (!(s.entry.coefficient > 0.0)) throw SchemaViolation("coefficient must be positive");
  return s;
}

std::vector<Document> synergy_documents(const SynergyMatrix& matrix) {
  std::vector<Document> docs;
  for (Agent a : kAgents) {
    for (const auto& own : matrix.rows(a)) {
      for (const auto& other : matrix.cols(a)) {
        docs.push_back(to_document(SynergyDocument{a, own, other, matrix.get(a, own, other)}));
      }
    }
  }
  return docs;
}

SynergyMatrix synergy_matrix_from(std::span<const Document> docs) {
  SynergyMatrix matrix;
  for (const auto& d : docs) {
    auto s = synergy_document_from(d);
    matrix.set(s.agent, s.own_task, s.other_task, std::move(s.entry));
  }
  return matrix;
}

Document to_document(const PlanDocument& p) {
  Document assignment = Document::array();
  for (const auto& item : p.plan.assignment) {
    assignment.push_back(
        Document{{"instance", item.instance_id}, {"task", item.task_id}, {"agent", std::string(to_string(item.agent))}});
  }
  Document order = Document::object();
  for (Agent a : kAgents) order[std::string(to_string(a))] = p.plan.lane(a);
  return Document{{"_id", p.id},
                  {"kind", p.kind},
                  {"seed", p.seed},
                  {"assignment", assignment},
                  {"order", order},
                  {"predicted_makespan", p.plan.predicted_makespan ? Document(*p.plan.predicted_makespan) : Document()},
                  {"simulated_makespan", p.simulated_makespan ? Document(*p.simulated_makespan) : Document()}};
}

PlanDocument plan_document_from(const Document& doc) {
  validate_document(collection::kPlans, doc);
  PlanDocument p;
  p.id = doc.at("_id").get<std::string>();
  p.kind = doc.at("kind").get<std::string>();
  p.seed = doc.at("seed").get<std::uint64_t>();
  try {
    for (const auto& item : doc.at("assignment")) {
      p.plan.assignment.push_back({item.at("instance").get<std::string>(), item.at("task").get<std::string>(),
                                   parse_agent(item.at("agent").get<std::string>())});
    }
    for (Agent a : kAgents) p.plan.lane(a) = doc.at("order").at(std::string(to_string(a))).get<std::vector<std::size_t>>();
  } catch (const std::exception& e) {
    throw SchemaViolation(std::string("plans: ") + e.what());
  }
  if (!doc.at("predicted_makespan").is_null()) p.plan.predicted_makespan = doc.at("predicted_makespan").get<double>();
  if (!doc.at("simulated_makespan").is_null()) p.simulated_makespan = doc.at("simulated_makespan").get<double>();
  return p;
}

}  // namespace hrcsyn
