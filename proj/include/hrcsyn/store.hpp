#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hrcsyn/model.hpp"
#include "hrcsyn/planner.hpp"
#include "hrcsyn/trace.hpp"

namespace hrcsyn {

using Document = nlohmann::json;

namespace collection {
inline constexpr std::string_view kTaskProperties = "task_properties";
inline constexpr std::string_view kTaskResults = "task_results";
inline constexpr std::string_view kTaskDuration = "task_duration";
inline constexpr std::string_view kTaskSynergy = "task_synergy";
inline constexpr std::string_view kPlans = "plans";
}  // namespace collection

/// Knowledge base kept as one newline-delimited JSON file per collection
/// under a root directory (`<root>/<collection>.jsonl`). Every document has
/// a string "_id"; documents keep insertion order and an upsert with an
/// existing id replaces the document in place. Each write rewrites the file
/// through a temporary and an atomic rename, so readers never observe a
/// partial document. One writer per collection at a time.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  static std::span<const std::string_view> collection_names() noexcept;
  /// Throws UnknownCollection.
  std::filesystem::path collection_path(std::string_view collection) const;

  /// Throws SchemaViolation, UnknownCollection or IoFailure.
  std::string upsert(std::string_view collection, const Document& doc);
  void upsert_many(std::string_view collection, std::span<const Document> docs);

  /// Documents whose fields equal every field of `filter`, in insertion order.
  std::vector<Document> query(std::string_view collection, const Document& filter = Document::object()) const;
  std::optional<Document> get(std::string_view collection, std::string_view id) const;
  std::size_t count(std::string_view collection) const;
  void clear(std::string_view collection);

  /// Traces for the given plans, records ordered by seq. Throws UnknownPlan.
  std::vector<ExecutionTrace> export_traces(std::span<const std::string> plan_ids) const;
  /// Every plan in task_results, in order of first appearance.
  std::vector<ExecutionTrace> export_traces() const;
  void import_traces(std::span<const ExecutionTrace> traces);

 private:
  std::vector<Document> read(std::string_view collection) const;
  void write(std::string_view collection, const std::vector<Document>& docs);

  std::filesystem::path root_;
};

/// Throws SchemaViolation naming the first missing or mistyped field.
void validate_document(std::string_view collection, const Document& doc);

Document to_document(const TaskSpec& spec);
TaskSpec task_spec_from(const Document& doc);

Document to_document(const ExecutionRecord& record);
ExecutionRecord execution_record_from(const Document& doc);

Document to_document(const DurationStats& stats);
DurationStats duration_stats_from(const Document& doc);

/// One synergy coefficient, stored per (agent, own task, counterpart task).
struct SynergyDocument {
  Agent agent = Agent::Robot;
  std::string own_task;
  std::string other_task;
  SynergyEntry entry;

  friend bool operator==(const SynergyDocument&, const SynergyDocument&) = default;
};
Document to_document(const SynergyDocument& synergy);
SynergyDocument synergy_document_from(const Document& doc);

/// Row-major documents for every labelled cell of both agents' matrices.
std::vector<Document> synergy_documents(const SynergyMatrix& matrix);
SynergyMatrix synergy_matrix_from(std::span<const Document> docs);

struct PlanDocument {
  std::string id;
  std::string kind;  // "random" or "optimized"
  std::uint64_t seed = 0;
  CandidatePlan plan;
  std::optional<double> simulated_makespan;

  friend bool operator==(const PlanDocument&, const PlanDocument&) = default;
};
Document to_document(const PlanDocument& plan);
PlanDocument plan_document_from(const Document& doc);

}  // namespace hrcsyn
