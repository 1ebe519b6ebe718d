// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

// Per-switch LPM rules realizing tree routing, the `<switch>-runtime.json`
// file format, and minimal rule deltas between two plans.

#ifndef MSTPATH_RULEPLAN_H_
#define MSTPATH_RULEPLAN_H_

#include <compare>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mstpath/mst.h"
#include "mstpath/topology.h"

namespace mstpath {

inline constexpr std::string_view kIpv4LpmTable = "MyIngress.ipv4_lpm";
inline constexpr std::string_view kDstAddrField = "hdr.ipv4.dstAddr";
inline constexpr std::string_view kForwardAction = "MyIngress.ipv4_forward";
inline constexpr std::string_view kDropAction = "MyIngress.drop";
inline constexpr std::string_view kNoAction = "NoAction";

struct LpmKey {
  Ipv4Addr address;
  int prefix_len = 32;

  bool Contains(Ipv4Addr dst) const {
    return dst.Masked(prefix_len) == address.Masked(prefix_len);
  }

  friend auto operator<=>(const LpmKey&, const LpmKey&) = default;
};

enum class ActionKind { kForward, kDrop, kNoAction };

struct TableEntry {
  std::string table{kIpv4LpmTable};
  LpmKey match;
  ActionKind action = ActionKind::kForward;
  // Forward only.
  MacAddr dst_mac;
  int port = 0;

  std::string_view action_name() const;
  // Same action and parameters; the key is not compared.
  bool SameAction(const TableEntry& other) const;

  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

TableEntry ForwardEntry(Ipv4Addr dst, int prefix_len, MacAddr next_hop, int port);
TableEntry DropEntry(Ipv4Addr dst, int prefix_len);

struct RulePlan {
  // Each list is ordered by match key.
  std::map<NodeId, std::vector<TableEntry>> per_switch;

  const std::vector<TableEntry>& EntriesFor(std::string_view sw) const;

  // A switch with no entries equals a switch that is absent.
  friend bool operator==(const RulePlan& a, const RulePlan& b);
};

enum class DeltaKind { kInsert, kModify, kDelete };

struct DeltaOp {
  DeltaKind kind;
  NodeId sw;
  TableEntry entry;

  friend bool operator==(const DeltaOp&, const DeltaOp&) = default;
};

struct RuleDelta {
  std::vector<DeltaOp> ops;

  bool empty() const { return ops.empty(); }
  std::size_t size() const { return ops.size(); }
};

std::string_view DeltaKindName(DeltaKind kind);

// One /32 forward entry per (switch, host): the egress port is the first hop
// of the tree path and the MAC is that next hop's receiving port MAC.
// Throws Error(kUnreachableHost).
RulePlan SynthesizeRules(const Topology& topology, const SpanningTree& tree);

// Unique keys and existing ports on `sw`. Throws Error(kValidation).
void ValidateEntries(const Topology& topology, std::string_view sw,
                     std::span<const TableEntry> entries);

// Runtime file text for one switch. Throws Error(kUnknownSwitch).
std::string SerializeRuntime(const RulePlan& plan, std::string_view sw);
std::string SerializeEntries(std::span<const TableEntry> entries);
// The same object shape as one runtime-file entry.
nlohmann::ordered_json TableEntryToJson(const TableEntry& entry);

// Accepts the bare entry list written by SerializeRuntime, or an object
// carrying the list under "table_entries". Throws Error(kParse) or
// Error(kUnknownAction).
std::vector<TableEntry> ParseRuntime(std::string_view text);

// Insert/Modify/Delete per switch in key order; identical entries produce
// no op.
RuleDelta DiffRules(const RulePlan& old_plan, const RulePlan& new_plan);

// Throws Error(kValidation) if an op does not fit `plan` (insert of a
// present key, modify/delete of an absent one).
RulePlan ApplyDelta(RulePlan plan, const RuleDelta& delta);

}  // namespace mstpath

#endif  // MSTPATH_RULEPLAN_H_
