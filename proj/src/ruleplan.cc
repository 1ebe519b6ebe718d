// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#include "mstpath/ruleplan.h"

#include <algorithm>
#include <set>

#include "json_util.h"

namespace mstpath {

using internal::Json;

std::string_view TableEntry::action_name() const {
  switch (action) {
    case ActionKind::kForward: return kForwardAction;
    case ActionKind::kDrop: return kDropAction;
    case ActionKind::kNoAction: return kNoAction;
  }
  return kNoAction;
}

bool TableEntry::SameAction(const TableEntry& other) const {
  if (table != other.table || action != other.action) return false;
  if (action != ActionKind::kForward) return true;
  return dst_mac == other.dst_mac && port == other.port;
}

TableEntry ForwardEntry(Ipv4Addr dst, int prefix_len, MacAddr next_hop,
                        int port) {
  TableEntry e;
  e.match = LpmKey{dst.Masked(prefix_len), prefix_len};
  e.action = ActionKind::kForward;
  e.dst_mac = next_hop;
  e.port = port;
  return e;
}

TableEntry DropEntry(Ipv4Addr dst, int prefix_len) {
  TableEntry e;
  e.match = LpmKey{dst.Masked(prefix_len), prefix_len};
  e.action = ActionKind::kDrop;
  return e;
}

const std::vector<TableEntry>& RulePlan::EntriesFor(std::string_view sw) const {
  static const std::vector<TableEntry> kEmpty;
  auto it = per_switch.find(NodeId(sw));
  return it == per_switch.end() ? kEmpty : it->second;
}

bool operator==(const RulePlan& a, const RulePlan& b) {
  std::set<NodeId> keys;
  for (const auto& [sw, entries] : a.per_switch) keys.insert(sw);
  for (const auto& [sw, entries] : b.per_switch) keys.insert(sw);
  return std::all_of(keys.begin(), keys.end(), [&](const NodeId& sw) {
    return a.EntriesFor(sw) == b.EntriesFor(sw);
  });
}

std::string_view DeltaKindName(DeltaKind kind) {
  switch (kind) {
    case DeltaKind::kInsert: return "Insert";
    case DeltaKind::kModify: return "Modify";
    case DeltaKind::kDelete: return "Delete";
  }
  return "?";
}

RulePlan SynthesizeRules(const Topology& topology, const SpanningTree& tree) {
  RulePlan plan;
  std::vector<const Node*> hosts;
  for (const Node& n : topology.nodes()) {
    if (!n.is_host()) continue;
    if (!tree.Contains(n.id)) {
      throw Error(ErrorCode::kUnreachableHost, n.id + " is not in the tree");
    }
    hosts.push_back(&n);
  }
  std::sort(hosts.begin(), hosts.end(), [](const Node* x, const Node* y) {
    return *x->ipv4 < *y->ipv4;
  });

  for (const NodeId& sw : topology.Switches()) {
    std::vector<TableEntry>& entries = plan.per_switch[sw];
    for (const Node* host : hosts) {
      std::vector<NodeId> path = TreePath(tree, sw, host->id);
      const NodeId& next = path.at(1);
      const ParentLink* up = tree.Parent(sw);
      int egress = 0;
      int ingress_at_next = 0;
      if (up != nullptr && up->parent == next) {
        egress = up->local_port;
        ingress_at_next = up->parent_port;
      } else {
        const ParentLink* down = tree.Parent(next);
        egress = down->parent_port;
        ingress_at_next = down->local_port;
      }
      MacAddr mac = topology.ReceivingMac(PortRef{next, ingress_at_next});
      entries.push_back(ForwardEntry(*host->ipv4, 32, mac, egress));
    }
  }
  return plan;
}

void ValidateEntries(const Topology& topology, std::string_view sw,
                     std::span<const TableEntry> entries) {
  const Node* node = topology.Find(sw);
  if (node == nullptr || !node->is_switch()) {
    throw Error(ErrorCode::kValidation, "no switch named '" + std::string(sw) + "'");
  }
  std::set<LpmKey> keys;
  for (const TableEntry& e : entries) {
    if (e.match.prefix_len < 0 || e.match.prefix_len > 32) {
      throw Error(ErrorCode::kValidation, "prefix length out of range");
    }
    if (!keys.insert(e.match).second) {
      throw Error(ErrorCode::kValidation,
                  std::string(sw) + ": duplicate key " +
                      e.match.address.ToString() + "/" +
                      std::to_string(e.match.prefix_len));
    }
    if (e.action == ActionKind::kForward && !node->port_macs.contains(e.port)) {
      throw Error(ErrorCode::kValidation,
                  std::string(sw) + ": entry for " + e.match.address.ToString() +
                      " references missing port " + std::to_string(e.port));
    }
  }
}

namespace {

std::string Quote(std::string_view s) { return Json(std::string(s)).dump(); }

}  // namespace

std::string SerializeEntries(std::span<const TableEntry> entries) {
  if (entries.empty()) return "[]\n";
  std::string out = "[\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const TableEntry& e = entries[i];
    out += "  {\n";
    out += "    \"table\": " + Quote(e.table) + ",\n";
    out += "    \"match\": {\n";
    out += "      " + Quote(kDstAddrField) + ": [" +
           Quote(e.match.address.ToString()) + ", " +
           std::to_string(e.match.prefix_len) + "]\n";
    out += "    },\n";
    out += "    \"action_name\": " + Quote(e.action_name()) + ",\n";
    if (e.action == ActionKind::kForward) {
      out += "    \"action_params\": {\n";
      out += "      \"dstAddr\": " + Quote(e.dst_mac.ToString()) + ",\n";
      out += "      \"port\": " + std::to_string(e.port) + "\n";
      out += "    }\n";
    } else {
      out += "    \"action_params\": {}\n";
    }
    out += i + 1 < entries.size() ? "  },\n" : "  }\n";
  }
  out += "]\n";
  return out;
}

nlohmann::ordered_json TableEntryToJson(const TableEntry& entry) {
  nlohmann::ordered_json j;
  j["table"] = entry.table;
  j["match"] = {{std::string(kDstAddrField),
                 {entry.match.address.ToString(), entry.match.prefix_len}}};
  j["action_name"] = entry.action_name();
  j["action_params"] = nlohmann::ordered_json::object();
  if (entry.action == ActionKind::kForward) {
    j["action_params"]["dstAddr"] = entry.dst_mac.ToString();
    j["action_params"]["port"] = entry.port;
  }
  return j;
}

std::string SerializeRuntime(const RulePlan& plan, std::string_view sw) {
  auto it = plan.per_switch.find(NodeId(sw));
  if (it == plan.per_switch.end()) {
    throw Error(ErrorCode::kUnknownSwitch,
                "no rules for switch '" + std::string(sw) + "'");
  }
  return SerializeEntries(it->second);
}

std::vector<TableEntry> ParseRuntime(std::string_view text) {
  Json doc = internal::ParseJson(text, "runtime");
  const Json* list = &doc;
  if (doc.is_object()) {
    list = &internal::Require(doc, "table_entries", "runtime");
  }
  if (!list->is_array()) {
    throw Error(ErrorCode::kParse, "runtime: expected a list of table entries");
  }
  std::vector<TableEntry> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const Json& je = (*list)[i];
    std::string path = "entries[" + std::to_string(i) + "]";
    TableEntry e;
    e.table = internal::RequireString(je, "table", path);
    if (e.table != kIpv4LpmTable) {
      throw Error(ErrorCode::kParse, path + ".table: unknown table '" + e.table + "'");
    }
    const Json& match = internal::Require(je, "match", path);
    const Json& key = internal::Require(match, std::string(kDstAddrField).c_str(),
                                        path + ".match");
    if (!key.is_array() || key.size() != 2 || !key[0].is_string() ||
        !key[1].is_number_integer()) {
      throw Error(ErrorCode::kParse,
                  path + ".match: expected [address, prefix_length]");
    }
    int prefix_len = key[1].get<int>();
    if (prefix_len < 0 || prefix_len > 32) {
      throw Error(ErrorCode::kParse, path + ".match: prefix length out of range");
    }
    Ipv4Addr addr;
    try {
      addr = Ipv4Addr::Parse(key[0].get<std::string>());
    } catch (const Error& err) {
      throw Error(ErrorCode::kParse, path + ".match: " + err.what());
    }
    e.match = LpmKey{addr.Masked(prefix_len), prefix_len};

    std::string action = internal::RequireString(je, "action_name", path);
    if (action == kForwardAction) {
      e.action = ActionKind::kForward;
      const Json& params = internal::Require(je, "action_params", path);
      std::string mac = internal::RequireString(params, "dstAddr", path + ".action_params");
      try {
        e.dst_mac = MacAddr::Parse(mac);
      } catch (const Error& err) {
        throw Error(ErrorCode::kParse, path + ".action_params.dstAddr: " + err.what());
      }
      e.port = static_cast<int>(
          internal::RequireInt(params, "port", path + ".action_params"));
    } else if (action == kDropAction) {
      e.action = ActionKind::kDrop;
    } else if (action == kNoAction) {
      e.action = ActionKind::kNoAction;
    } else {
      throw Error(ErrorCode::kUnknownAction,
                  path + ".action_name: '" + action + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

RuleDelta DiffRules(const RulePlan& old_plan, const RulePlan& new_plan) {
  std::set<NodeId> switches;
  for (const auto& [sw, entries] : old_plan.per_switch) switches.insert(sw);
  for (const auto& [sw, entries] : new_plan.per_switch) switches.insert(sw);

  RuleDelta delta;
  for (const NodeId& sw : switches) {
    std::map<LpmKey, const TableEntry*> before;
    std::map<LpmKey, const TableEntry*> after;
    for (const TableEntry& e : old_plan.EntriesFor(sw)) before[e.match] = &e;
    for (const TableEntry& e : new_plan.EntriesFor(sw)) after[e.match] = &e;

    auto b = before.begin();
    auto a = after.begin();
    while (b != before.end() || a != after.end()) {
      if (a == after.end() || (b != before.end() && b->first < a->first)) {
        delta.ops.push_back({DeltaKind::kDelete, sw, *b->second});
        ++b;
      } else if (b == before.end() || a->first < b->first) {
        delta.ops.push_back({DeltaKind::kInsert, sw, *a->second});
        ++a;
      } else {
        if (!(*b->second == *a->second)) {
          delta.ops.push_back({DeltaKind::kModify, sw, *a->second});
        }
        ++a;
        ++b;
      }
    }
  }
  return delta;
}

RulePlan ApplyDelta(RulePlan plan, const RuleDelta& delta) {
  for (const DeltaOp& op : delta.ops) {
    std::vector<TableEntry>& entries = plan.per_switch[op.sw];
    auto it = std::find_if(entries.begin(), entries.end(), [&](const TableEntry& e) {
      return e.match == op.entry.match;
    });
    bool present = it != entries.end();
    if (!present) {
      it = std::find_if(entries.begin(), entries.end(), [&](const TableEntry& e) {
        return op.entry.match < e.match;
      });
    }
    switch (op.kind) {
      case DeltaKind::kInsert:
        if (present) {
          throw Error(ErrorCode::kValidation, "insert of existing key on " + op.sw);
        }
        entries.insert(it, op.entry);
        break;
      case DeltaKind::kModify:
        if (!present) {
          throw Error(ErrorCode::kValidation, "modify of absent key on " + op.sw);
        }
        *it = op.entry;
        break;
      case DeltaKind::kDelete:
        if (!present) {
          throw Error(ErrorCode::kValidation, "delete of absent key on " + op.sw);
        }
        entries.erase(it);
        break;
    }
  }
  return plan;
}

}  // namespace mstpath
