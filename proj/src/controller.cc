// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#include "mstpath/controller.h"

#include <algorithm>
#include <sstream>

#include <spdlog/spdlog.h>

#include "json_util.h"
#include "mstpath/mst.h"

namespace mstpath {

using internal::Json;
using nlohmann::ordered_json;

std::string_view ControlOpKindName(ControlOpKind kind) {
  switch (kind) {
    case ControlOpKind::kSetPipeline: return "SetPipeline";
    case ControlOpKind::kInsertEntry: return "InsertEntry";
    case ControlOpKind::kModifyEntry: return "ModifyEntry";
    case ControlOpKind::kDeleteEntry: return "DeleteEntry";
  }
  return "?";
}

Runtimes InitialRuntimes(const Topology& topology) {
  Runtimes out;
  for (const NodeId& sw : topology.Switches()) {
    out.emplace(sw, SwitchRuntime{sw, {}, std::string(kDefaultProfile)});
  }
  return out;
}

void ApplyControlOp(const Topology& topology, Runtimes& runtimes,
                    const ControlOp& op) {
  auto rt = runtimes.find(op.sw);
  if (rt == runtimes.end()) {
    throw Error(ErrorCode::kValidation, "control op for unknown switch " + op.sw);
  }
  std::vector<TableEntry>& table = rt->second.table;
  if (op.kind == ControlOpKind::kSetPipeline) {
    rt->second.pipeline_profile = op.profile;
    table.clear();
    return;
  }
  if (!op.entry) {
    throw Error(ErrorCode::kValidation, "control op without an entry");
  }
  const TableEntry& entry = *op.entry;
  auto it = std::find_if(table.begin(), table.end(), [&](const TableEntry& e) {
    return e.match == entry.match;
  });
  bool present = it != table.end();
  std::string key = op.sw + " " + entry.match.address.ToString() + "/" +
                    std::to_string(entry.match.prefix_len);

  if (op.kind != ControlOpKind::kDeleteEntry) {
    ValidateEntries(topology, op.sw, std::span<const TableEntry>(&entry, 1));
  }
  switch (op.kind) {
    case ControlOpKind::kInsertEntry:
      if (present) throw Error(ErrorCode::kValidation, "insert of existing key " + key);
      // Tables stay in key order whatever order inserts arrive in.
      table.insert(std::find_if(table.begin(), table.end(),
                                [&](const TableEntry& e) {
                                  return entry.match < e.match;
                                }),
                   entry);
      break;
    case ControlOpKind::kModifyEntry:
      if (!present) throw Error(ErrorCode::kValidation, "modify of absent key " + key);
      *it = entry;
      break;
    case ControlOpKind::kDeleteEntry:
      if (!present) throw Error(ErrorCode::kValidation, "delete of absent key " + key);
      table.erase(it);
      break;
    case ControlOpKind::kSetPipeline:
      break;
  }
}

Runtimes Replay(const Topology& topology, std::span<const ControlOp> ops) {
  Runtimes runtimes = InitialRuntimes(topology);
  for (const ControlOp& op : ops) ApplyControlOp(topology, runtimes, op);
  return runtimes;
}

RulePlan PlanFromRuntimes(const Runtimes& runtimes) {
  RulePlan plan;
  for (const auto& [sw, rt] : runtimes) plan.per_switch[sw] = rt.table;
  return plan;
}

ControllerState::ControllerState(Topology topology)
    : topology_(std::move(topology)), runtimes_(InitialRuntimes(topology_)) {}

void ControllerState::Apply(const ControlOp& op) {
  ApplyControlOp(topology_, runtimes_, op);
  op_log_.push_back(op);
  spdlog::debug("op {} {} {}", ControlOpKindName(op.kind), op.sw,
                op.entry ? op.entry->match.address.ToString() : op.profile);
}

ControllerState StaticDeploy(
    const Topology& topology,
    const std::map<NodeId, std::vector<TableEntry>>& tables,
    std::string_view profile) {
  ControllerState state(topology);
  for (const NodeId& sw : topology.Switches()) {
    auto it = tables.find(sw);
    if (it == tables.end()) {
      throw Error(ErrorCode::kValidation, "no runtime file for switch " + sw);
    }
    ValidateEntries(topology, sw, it->second);
  }
  for (const auto& [sw, entries] : tables) {
    if (!topology.Contains(sw) || !topology.At(sw).is_switch()) {
      throw Error(ErrorCode::kValidation, "runtime file for unknown switch " + sw);
    }
  }
  for (const NodeId& sw : topology.Switches()) {
    state.Apply(ControlOp{ControlOpKind::kSetPipeline, sw, std::string(profile), {}});
    for (const TableEntry& e : tables.at(sw)) {
      state.Apply(ControlOp{ControlOpKind::kInsertEntry, sw, {}, e});
    }
  }
  return state;
}

std::map<NodeId, std::vector<TableEntry>> LoadRuntimeDir(
    const Topology& topology, const std::filesystem::path& dir) {
  std::map<NodeId, std::vector<TableEntry>> out;
  for (const NodeId& sw : topology.Switches()) {
    std::filesystem::path file = dir / (sw + "-runtime.json");
    if (!std::filesystem::exists(file)) {
      throw Error(ErrorCode::kParse, "missing runtime file " + file.string());
    }
    try {
      out[sw] = ParseRuntime(ReadFile(file));
    } catch (const Error& e) {
      throw Error(e.code() == ErrorCode::kUnknownAction ? e.code() : ErrorCode::kParse,
                  file.filename().string() + ": " + e.what());
    }
  }
  return out;
}

RulePlan PlanForRoot(const Topology& topology, std::string_view root) {
  SpanningTree tree = OrientTree(topology, ComputeMst(topology, root), root);
  return SynthesizeRules(topology, tree);
}

void DynamicSetRoot(ControllerState& state, std::string_view new_root) {
  const Topology& t = state.topology();
  NodeId root_switch = ResolveRootSwitch(t, new_root);
  RulePlan target = PlanForRoot(t, root_switch);
  RuleDelta delta = DiffRules(PlanFromRuntimes(state.runtimes()), target);
  spdlog::info("set root {}: {} rule changes", root_switch, delta.size());
  for (const DeltaOp& d : delta.ops) {
    ControlOpKind kind = d.kind == DeltaKind::kInsert   ? ControlOpKind::kInsertEntry
                         : d.kind == DeltaKind::kModify ? ControlOpKind::kModifyEntry
                                                        : ControlOpKind::kDeleteEntry;
    state.Apply(ControlOp{kind, d.sw, {}, d.entry});
  }
  state.set_current_root(root_switch);
}

ScenarioEvent ScenarioEvent::SetRoot(std::int64_t time, NodeId node) {
  ScenarioEvent e;
  e.kind = Kind::kSetRoot;
  e.time = time;
  e.node = std::move(node);
  return e;
}

ScenarioEvent ScenarioEvent::Inject(std::int64_t time, NodeId origin,
                                    std::string to, int ttl) {
  ScenarioEvent e;
  e.kind = Kind::kInjectPacket;
  e.time = time;
  e.origin = std::move(origin);
  e.to = std::move(to);
  e.ttl = ttl;
  return e;
}

ScenarioEvent ScenarioEvent::Checkpoint(std::int64_t time, std::string label) {
  ScenarioEvent e;
  e.kind = Kind::kCheckpoint;
  e.time = time;
  e.label = std::move(label);
  return e;
}

std::vector<ScenarioEvent> ParseScenario(std::string_view text) {
  Json doc = internal::ParseJson(text, "scenario");
  const Json& jevents = internal::Require(doc, "events", "scenario");
  if (!jevents.is_array()) {
    throw Error(ErrorCode::kParse, "scenario.events: expected a list");
  }
  std::vector<ScenarioEvent> out;
  for (std::size_t i = 0; i < jevents.size(); ++i) {
    const Json& je = jevents[i];
    std::string path = "events[" + std::to_string(i) + "]";
    std::int64_t time = internal::RequireInt(je, "time", path);
    std::string kind = internal::RequireString(je, "kind", path);
    if (kind == "set_root") {
      out.push_back(ScenarioEvent::SetRoot(time, internal::RequireString(je, "node", path)));
    } else if (kind == "inject") {
      int ttl = je.contains("ttl") ? static_cast<int>(internal::RequireInt(je, "ttl", path))
                                   : 64;
      out.push_back(ScenarioEvent::Inject(time, internal::RequireString(je, "from", path),
                                          internal::RequireString(je, "to", path), ttl));
    } else if (kind == "checkpoint") {
      out.push_back(ScenarioEvent::Checkpoint(time, internal::RequireString(je, "label", path)));
    } else {
      throw Error(ErrorCode::kParse, path + ".kind: unknown event kind '" + kind + "'");
    }
  }
  return out;
}

bool ScenarioReport::AllDelivered() const {
  return std::all_of(traces.begin(), traces.end(), [](const InjectionRecord& r) {
    return r.run.outcome == RunOutcome::kDelivered;
  });
}

namespace {

Ipv4Addr ResolveDestination(const Topology& topology, const std::string& to) {
  if (const Node* n = topology.Find(to)) {
    if (!n->is_host()) {
      throw Error(ErrorCode::kValidation, "inject target " + to + " is not a host");
    }
    return *n->ipv4;
  }
  return Ipv4Addr::Parse(to);
}

}  // namespace

ScenarioReport RunScenario(const Topology& topology,
                           std::span<const ScenarioEvent> events) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].time <= events[i - 1].time) {
      throw Error(ErrorCode::kValidation,
                  "event times must strictly increase (event " + std::to_string(i) + ")");
    }
  }
  ControllerState state(topology);
  ScenarioReport report;
  for (const ScenarioEvent& ev : events) {
    switch (ev.kind) {
      case ScenarioEvent::Kind::kSetRoot:
        DynamicSetRoot(state, ev.node);
        break;
      case ScenarioEvent::Kind::kInjectPacket: {
        if (!state.current_root()) {
          throw Error(ErrorCode::kValidation,
                      "packet injected at time " + std::to_string(ev.time) +
                          " before any set_root");
        }
        InjectionRecord rec;
        rec.time = ev.time;
        rec.origin = ev.origin;
        rec.dst = ResolveDestination(topology, ev.to);
        rec.root = *state.current_root();
        rec.run = RunPacket(topology, state.runtimes(), ev.origin, rec.dst, ev.ttl);
        report.traces.push_back(std::move(rec));
        break;
      }
      case ScenarioEvent::Kind::kCheckpoint:
        report.snapshots.push_back(Snapshot{ev.label, ev.time, state.current_root(),
                                            PlanFromRuntimes(state.runtimes())});
        break;
    }
  }
  report.op_log = state.op_log();
  report.final_runtimes = state.runtimes();
  return report;
}

ordered_json ControlOpToJson(const ControlOp& op) {
  ordered_json j;
  j["op"] = ControlOpKindName(op.kind);
  j["switch"] = op.sw;
  if (op.kind == ControlOpKind::kSetPipeline) {
    j["profile"] = op.profile;
  } else if (op.entry) {
    j["entry"] = TableEntryToJson(*op.entry);
  }
  return j;
}

std::string ReportToJson(const ScenarioReport& report) {
  ordered_json doc;
  ordered_json ops = ordered_json::array();
  for (const ControlOp& op : report.op_log) ops.push_back(ControlOpToJson(op));
  ordered_json traces = ordered_json::array();
  for (const InjectionRecord& r : report.traces) {
    ordered_json j;
    j["time"] = r.time;
    j["from"] = r.origin;
    j["to"] = r.dst.ToString();
    j["root"] = r.root;
    ordered_json run = PacketRunToJson(r.run);
    for (auto& [k, v] : run.items()) j[k] = v;
    traces.push_back(std::move(j));
  }
  ordered_json snaps = ordered_json::array();
  for (const Snapshot& s : report.snapshots) {
    ordered_json j;
    j["label"] = s.label;
    j["time"] = s.time;
    j["root"] = s.root ? ordered_json(*s.root) : ordered_json(nullptr);
    ordered_json tables = ordered_json::object();
    for (const auto& [sw, entries] : s.tables.per_switch) {
      ordered_json list = ordered_json::array();
      for (const TableEntry& e : entries) list.push_back(TableEntryToJson(e));
      tables[sw] = std::move(list);
    }
    j["tables"] = std::move(tables);
    snaps.push_back(std::move(j));
  }
  doc["op_log"] = std::move(ops);
  doc["traces"] = std::move(traces);
  doc["snapshots"] = std::move(snaps);
  return doc.dump(2) + "\n";
}

std::string RenderReport(const ScenarioReport& report) {
  std::ostringstream out;
  out << "control ops: " << report.op_log.size() << "\n";
  for (const ControlOp& op : report.op_log) {
    out << "  " << ControlOpKindName(op.kind) << " " << op.sw;
    if (op.entry) {
      out << " " << op.entry->match.address.ToString() << "/"
          << op.entry->match.prefix_len << " " << op.entry->action_name();
      if (op.entry->action == ActionKind::kForward) {
        out << " " << op.entry->dst_mac.ToString() << " port " << op.entry->port;
      }
    } else {
      out << " " << op.profile;
    }
    out << "\n";
  }
  for (const InjectionRecord& r : report.traces) {
    out << "packet t=" << r.time << " " << r.origin << " -> " << r.dst.ToString()
        << " (root " << r.root << "): " << RunOutcomeName(r.run.outcome) << " via";
    for (const NodeId& sw : r.run.SwitchPath()) out << " " << sw;
    out << "\n";
  }
  for (const Snapshot& s : report.snapshots) {
    std::size_t n = 0;
    for (const auto& [sw, entries] : s.tables.per_switch) n += entries.size();
    out << "checkpoint " << s.label << " t=" << s.time << ": " << n
        << " entries\n";
  }
  return out.str();
}

}  // namespace mstpath
