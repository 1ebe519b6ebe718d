// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

// Control-plane emulation: pipeline profiles and table entries are pushed
// into switch runtimes through a small Insert/Modify/Delete vocabulary, either
// from runtime files (static) or by re-rooting the tree (dynamic).

#ifndef MSTPATH_CONTROLLER_H_
#define MSTPATH_CONTROLLER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mstpath/pipeline.h"
#include "mstpath/ruleplan.h"
#include "mstpath/topology.h"

namespace mstpath {

enum class ControlOpKind { kSetPipeline, kInsertEntry, kModifyEntry, kDeleteEntry };

std::string_view ControlOpKindName(ControlOpKind kind);

struct ControlOp {
  ControlOpKind kind;
  NodeId sw;
  std::string profile;              // kSetPipeline
  std::optional<TableEntry> entry;  // the others

  friend bool operator==(const ControlOp&, const ControlOp&) = default;
};

// Switch runtimes as seen before any control op: every switch present with
// the default profile and an empty table.
Runtimes InitialRuntimes(const Topology& topology);

// Applies one op, enforcing key presence/absence and port validity.
// Throws Error(kValidation).
void ApplyControlOp(const Topology& topology, Runtimes& runtimes,
                    const ControlOp& op);

// Replays `ops` against InitialRuntimes().
Runtimes Replay(const Topology& topology, std::span<const ControlOp> ops);

RulePlan PlanFromRuntimes(const Runtimes& runtimes);

class ControllerState {
 public:
  explicit ControllerState(Topology topology);

  const Topology& topology() const { return topology_; }
  const std::optional<NodeId>& current_root() const { return current_root_; }
  const Runtimes& runtimes() const { return runtimes_; }
  const std::vector<ControlOp>& op_log() const { return op_log_; }

  // Applies and logs.
  void Apply(const ControlOp& op);
  void set_current_root(NodeId root) { current_root_ = std::move(root); }

 private:
  Topology topology_;
  std::optional<NodeId> current_root_;
  Runtimes runtimes_;
  std::vector<ControlOp> op_log_;
};

// Loads each switch's entries, logging one SetPipeline followed by the
// entries' inserts in file order. Installed tables are kept in key order.
// Every switch needs an entry in `tables`. Throws Error(kValidation).
ControllerState StaticDeploy(
    const Topology& topology,
    const std::map<NodeId, std::vector<TableEntry>>& tables,
    std::string_view profile = kDefaultProfile);

// Reads `<switch>-runtime.json` for every switch from `dir`.
// Throws Error(kParse) when a file is missing or malformed.
std::map<NodeId, std::vector<TableEntry>> LoadRuntimeDir(
    const Topology& topology, const std::filesystem::path& dir);

// Rebuilds the tree at `new_root`, diffs against the installed tables and
// applies only the changed entries. Throws Error(kUnknownRoot).
void DynamicSetRoot(ControllerState& state, std::string_view new_root);

// Plan the controller converges to for `root`.
RulePlan PlanForRoot(const Topology& topology, std::string_view root);

struct ScenarioEvent {
  enum class Kind { kSetRoot, kInjectPacket, kCheckpoint };

  Kind kind = Kind::kCheckpoint;
  std::int64_t time = 0;
  NodeId node;    // kSetRoot
  NodeId origin;  // kInjectPacket
  std::string to; // kInjectPacket: dotted quad or host name
  int ttl = 64;
  std::string label;  // kCheckpoint

  static ScenarioEvent SetRoot(std::int64_t time, NodeId node);
  static ScenarioEvent Inject(std::int64_t time, NodeId origin, std::string to,
                              int ttl = 64);
  static ScenarioEvent Checkpoint(std::int64_t time, std::string label);
};

// {"events": [{"time": 1, "kind": "set_root", "node": "s1"}, ...]}.
// Throws Error(kParse).
std::vector<ScenarioEvent> ParseScenario(std::string_view text);

struct InjectionRecord {
  std::int64_t time = 0;
  NodeId origin;
  Ipv4Addr dst;
  NodeId root;
  PacketRun run;
};

struct Snapshot {
  std::string label;
  std::int64_t time = 0;
  std::optional<NodeId> root;
  RulePlan tables;
};

struct ScenarioReport {
  std::vector<ControlOp> op_log;
  std::vector<InjectionRecord> traces;
  std::vector<Snapshot> snapshots;
  Runtimes final_runtimes;

  bool AllDelivered() const;
};

// Events run strictly in order; each one completes (including every rule
// update) before the next is looked at. Throws Error(kValidation) for
// non-increasing times or an injection before any SetRoot.
ScenarioReport RunScenario(const Topology& topology,
                           std::span<const ScenarioEvent> events);

nlohmann::ordered_json ControlOpToJson(const ControlOp& op);
std::string ReportToJson(const ScenarioReport& report);
std::string RenderReport(const ScenarioReport& report);

}  // namespace mstpath

#endif  // MSTPATH_CONTROLLER_H_
