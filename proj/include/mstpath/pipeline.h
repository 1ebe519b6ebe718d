// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

// Deterministic model of the IPv4 ingress pipeline (parse, LPM lookup,
// forward/drop action) and hop-by-hop packet tracing across a topology.

#ifndef MSTPATH_PIPELINE_H_
#define MSTPATH_PIPELINE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mstpath/ruleplan.h"
#include "mstpath/topology.h"

namespace mstpath {

inline constexpr std::uint16_t kEtherTypeIpv4 = 0x0800;
inline constexpr std::string_view kDefaultProfile = "ipv4-mst";

struct SensorReading {
  NodeId station;
  std::string data_type;
  double value = 0.0;
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const SensorReading&, const SensorReading&) = default;
};

struct EthernetHeader {
  MacAddr src_mac;
  MacAddr dst_mac;
  std::uint16_t ether_type = kEtherTypeIpv4;

  friend bool operator==(const EthernetHeader&, const EthernetHeader&) = default;
};

struct Ipv4Header {
  Ipv4Addr src;
  Ipv4Addr dst;
  int ttl = 64;

  friend bool operator==(const Ipv4Header&, const Ipv4Header&) = default;
};

struct StandardMetadata {
  int ingress_port = 0;
  std::optional<int> egress_spec;
  bool dropped = false;

  friend bool operator==(const StandardMetadata&, const StandardMetadata&) = default;
};

using Payload = std::variant<std::monostate, SensorReading, std::string>;

struct PacketState {
  EthernetHeader eth;
  std::optional<Ipv4Header> ipv4;  // present iff eth.ether_type == 0x0800
  Payload payload;
  StandardMetadata meta;

  friend bool operator==(const PacketState&, const PacketState&) = default;
};

struct SwitchRuntime {
  NodeId sw;
  std::vector<TableEntry> table;
  std::string pipeline_profile{kDefaultProfile};

  friend bool operator==(const SwitchRuntime&, const SwitchRuntime&) = default;
};

using Runtimes = std::map<NodeId, SwitchRuntime>;

enum class TraceKind {
  kIngress,
  kTableHit,
  kTableMiss,
  kActionApplied,
  kDropped,
  kEmitted,
  kDelivered,
};

enum class DropReason {
  kNonIpv4,
  kTableMiss,
  kTtlExpired,
  kDropAction,
  kNoEgress,
  kNoLink,
  kHostMismatch,
  kHopLimitExceeded,
};

std::string_view TraceKindName(TraceKind kind);
std::string_view DropReasonName(DropReason reason);

struct TraceEvent {
  TraceKind kind;
  NodeId node;
  std::optional<int> port;
  std::optional<int> ttl;
  std::optional<TableEntry> entry;
  std::optional<DropReason> reason;

  // Human-readable payload for the text rendering.
  std::string Detail() const;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Longest matching prefix, or nullptr on a miss.
const TableEntry* LpmLookup(std::span<const TableEntry> table, Ipv4Addr dst);

// egress_spec, MAC swap, TTL decrement, in that order. A TTL that reaches 0
// marks the packet dropped. Throws Error(kMissingHeader) without IPv4.
PacketState ApplyIpv4Forward(PacketState packet, MacAddr dst_mac, int port);
PacketState ApplyDrop(PacketState packet);

struct ProcessResult {
  PacketState packet;
  std::vector<TraceEvent> events;
};

// One pass through a switch. Non-IPv4 packets and table misses are dropped;
// an entry that leaves egress_spec unset (NoAction) drops at the end.
ProcessResult ProcessPacket(const SwitchRuntime& runtime, PacketState packet);

enum class RunOutcome { kDelivered, kDropped, kHopLimitExceeded };

std::string_view RunOutcomeName(RunOutcome outcome);

struct Hop {
  NodeId sw;
  int ingress_port = 0;
  std::optional<int> egress_port;
  PacketState after;  // as emitted (or as dropped)
};

struct PacketRun {
  RunOutcome outcome = RunOutcome::kDropped;
  std::vector<TraceEvent> trace;
  std::vector<Hop> hops;
  std::optional<NodeId> delivered_to;

  std::vector<NodeId> SwitchPath() const;
};

// Injects a packet from host `origin` toward `dst` and follows it until it
// is delivered to the host owning `dst` or dropped. More than
// #nodes switch traversals yields kHopLimitExceeded.
// Throws Error(kUnknownNode) for an unknown origin or a switch without a
// runtime.
PacketRun RunPacket(const Topology& topology, const Runtimes& runtimes,
                    std::string_view origin, Ipv4Addr dst, int initial_ttl = 64,
                    Payload payload = {});

// One line per event: `<step> <kind> <node> <detail>`.
std::string RenderTrace(std::span<const TraceEvent> trace);
nlohmann::ordered_json TraceEventToJson(const TraceEvent& event);
nlohmann::ordered_json PacketRunToJson(const PacketRun& run);

}  // namespace mstpath

#endif  // MSTPATH_PIPELINE_H_
