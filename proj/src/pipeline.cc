// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#include "mstpath/pipeline.h"

#include <sstream>

namespace mstpath {

using nlohmann::ordered_json;

std::string_view TraceKindName(TraceKind kind) {
  switch (kind) {
    case TraceKind::kIngress: return "Ingress";
    case TraceKind::kTableHit: return "TableHit";
    case TraceKind::kTableMiss: return "TableMiss";
    case TraceKind::kActionApplied: return "ActionApplied";
    case TraceKind::kDropped: return "Dropped";
    case TraceKind::kEmitted: return "Emitted";
    case TraceKind::kDelivered: return "Delivered";
  }
  return "?";
}

std::string_view DropReasonName(DropReason reason) {
  switch (reason) {
    case DropReason::kNonIpv4: return "NonIpv4";
    case DropReason::kTableMiss: return "TableMiss";
    case DropReason::kTtlExpired: return "TtlExpired";
    case DropReason::kDropAction: return "DropAction";
    case DropReason::kNoEgress: return "NoEgress";
    case DropReason::kNoLink: return "NoLink";
    case DropReason::kHostMismatch: return "HostMismatch";
    case DropReason::kHopLimitExceeded: return "HopLimitExceeded";
  }
  return "?";
}

std::string_view RunOutcomeName(RunOutcome outcome) {
  switch (outcome) {
    case RunOutcome::kDelivered: return "Delivered";
    case RunOutcome::kDropped: return "Dropped";
    case RunOutcome::kHopLimitExceeded: return "HopLimitExceeded";
  }
  return "?";
}

std::string TraceEvent::Detail() const {
  std::ostringstream out;
  const char* sep = "";
  if (entry) {
    out << "entry=" << entry->match.address.ToString() << "/"
        << entry->match.prefix_len << " action=" << entry->action_name();
    if (entry->action == ActionKind::kForward) {
      out << " dstAddr=" << entry->dst_mac.ToString();
    }
    sep = " ";
  }
  if (port) {
    out << sep << "port=" << *port;
    sep = " ";
  }
  if (ttl) {
    out << sep << "ttl=" << *ttl;
    sep = " ";
  }
  if (reason) out << sep << "reason=" << DropReasonName(*reason);
  return out.str();
}

const TableEntry* LpmLookup(std::span<const TableEntry> table, Ipv4Addr dst) {
  const TableEntry* best = nullptr;
  for (const TableEntry& e : table) {
    if (!e.match.Contains(dst)) continue;
    if (best == nullptr || e.match.prefix_len > best->match.prefix_len) best = &e;
  }
  return best;
}

PacketState ApplyIpv4Forward(PacketState packet, MacAddr dst_mac, int port) {
  if (!packet.ipv4) {
    throw Error(ErrorCode::kMissingHeader, "ipv4_forward on a non-IPv4 packet");
  }
  packet.meta.egress_spec = port;
  packet.eth.src_mac = packet.eth.dst_mac;
  packet.eth.dst_mac = dst_mac;
  packet.ipv4->ttl = packet.ipv4->ttl > 0 ? packet.ipv4->ttl - 1 : 0;
  if (packet.ipv4->ttl == 0) packet.meta.dropped = true;
  return packet;
}

PacketState ApplyDrop(PacketState packet) {
  packet.meta.dropped = true;
  return packet;
}

ProcessResult ProcessPacket(const SwitchRuntime& runtime, PacketState packet) {
  ProcessResult result;
  auto& ev = result.events;
  const NodeId& sw = runtime.sw;
  std::optional<int> ttl_in;
  if (packet.ipv4) ttl_in = packet.ipv4->ttl;
  ev.push_back({TraceKind::kIngress, sw, packet.meta.ingress_port, ttl_in, {}, {}});

  auto drop = [&](DropReason reason) {
    packet = ApplyDrop(std::move(packet));
    ev.push_back({TraceKind::kDropped, sw, {}, {}, {}, reason});
    result.packet = std::move(packet);
    return result;
  };

  if (packet.eth.ether_type != kEtherTypeIpv4 || !packet.ipv4) {
    return drop(DropReason::kNonIpv4);
  }
  const TableEntry* hit = LpmLookup(runtime.table, packet.ipv4->dst);
  if (hit == nullptr) {
    ev.push_back({TraceKind::kTableMiss, sw, {}, {}, {}, {}});
    return drop(DropReason::kTableMiss);
  }
  ev.push_back({TraceKind::kTableHit, sw, {}, {}, *hit, {}});

  switch (hit->action) {
    case ActionKind::kForward:
      packet = ApplyIpv4Forward(std::move(packet), hit->dst_mac, hit->port);
      ev.push_back({TraceKind::kActionApplied, sw, hit->port, packet.ipv4->ttl,
                    *hit, {}});
      if (packet.meta.dropped) return drop(DropReason::kTtlExpired);
      break;
    case ActionKind::kDrop:
      packet = ApplyDrop(std::move(packet));
      ev.push_back({TraceKind::kActionApplied, sw, {}, {}, *hit, {}});
      return drop(DropReason::kDropAction);
    case ActionKind::kNoAction:
      ev.push_back({TraceKind::kActionApplied, sw, {}, {}, *hit, {}});
      break;
  }
  if (!packet.meta.egress_spec) return drop(DropReason::kNoEgress);
  ev.push_back({TraceKind::kEmitted, sw, *packet.meta.egress_spec, {}, {}, {}});
  result.packet = std::move(packet);
  return result;
}

std::vector<NodeId> PacketRun::SwitchPath() const {
  std::vector<NodeId> out;
  for (const Hop& h : hops) out.push_back(h.sw);
  return out;
}

PacketRun RunPacket(const Topology& topology, const Runtimes& runtimes,
                    std::string_view origin, Ipv4Addr dst, int initial_ttl,
                    Payload payload) {
  const Node& host = topology.At(origin);
  if (!host.is_host()) {
    throw Error(ErrorCode::kUnknownNode, std::string(origin) + " is not a host");
  }
  PortRef at = topology.Attachment(origin);

  PacketState packet;
  packet.eth = EthernetHeader{*host.mac, topology.ReceivingMac(at), kEtherTypeIpv4};
  packet.ipv4 = Ipv4Header{*host.ipv4, dst, initial_ttl};
  packet.payload = std::move(payload);
  packet.meta.ingress_port = at.port;

  PacketRun run;
  const std::size_t hop_limit = topology.nodes().size();
  PortRef arriving = at;
  while (true) {
    const NodeId& sw = arriving.node;
    if (run.hops.size() >= hop_limit) {
      run.trace.push_back({TraceKind::kDropped, sw, {}, {}, {},
                           DropReason::kHopLimitExceeded});
      run.outcome = RunOutcome::kHopLimitExceeded;
      return run;
    }
    auto rt = runtimes.find(sw);
    if (rt == runtimes.end()) {
      throw Error(ErrorCode::kUnknownNode, "no runtime for switch " + sw);
    }
    packet.meta = StandardMetadata{arriving.port, std::nullopt, false};
    ProcessResult step = ProcessPacket(rt->second, std::move(packet));
    packet = std::move(step.packet);
    run.trace.insert(run.trace.end(), step.events.begin(), step.events.end());
    run.hops.push_back(Hop{sw, arriving.port, packet.meta.egress_spec, packet});
    if (packet.meta.dropped) {
      run.outcome = RunOutcome::kDropped;
      return run;
    }

    PortRef out{sw, *packet.meta.egress_spec};
    const Link* link = topology.LinkAt(out);
    if (link == nullptr) {
      run.trace.push_back({TraceKind::kDropped, sw, out.port, {}, {},
                           DropReason::kNoLink});
      run.outcome = RunOutcome::kDropped;
      return run;
    }
    PortRef next = link->Other(sw);
    const Node& next_node = topology.At(next.node);
    if (next_node.is_host()) {
      if (next_node.ipv4 == packet.ipv4->dst) {
        run.trace.push_back({TraceKind::kDelivered, next.node, next.port,
                             packet.ipv4->ttl, {}, {}});
        run.outcome = RunOutcome::kDelivered;
        run.delivered_to = next.node;
      } else {
        run.trace.push_back({TraceKind::kDropped, next.node, next.port, {}, {},
                             DropReason::kHostMismatch});
        run.outcome = RunOutcome::kDropped;
      }
      return run;
    }
    arriving = next;
  }
}

std::string RenderTrace(std::span<const TraceEvent> trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceEvent& e = trace[i];
    out += std::to_string(i) + " " + std::string(TraceKindName(e.kind)) + " " +
           e.node;
    std::string detail = e.Detail();
    if (!detail.empty()) out += " " + detail;
    out += "\n";
  }
  return out;
}

ordered_json TraceEventToJson(const TraceEvent& event) {
  ordered_json j;
  j["kind"] = TraceKindName(event.kind);
  j["node"] = event.node;
  if (event.port) j["port"] = *event.port;
  if (event.ttl) j["ttl"] = *event.ttl;
  if (event.entry) {
    j["entry"] = {{"dstAddr", event.entry->match.address.ToString()},
                  {"prefix_len", event.entry->match.prefix_len},
                  {"action_name", event.entry->action_name()}};
  }
  if (event.reason) j["reason"] = DropReasonName(*event.reason);
  return j;
}

ordered_json PacketRunToJson(const PacketRun& run) {
  ordered_json j;
  j["outcome"] = RunOutcomeName(run.outcome);
  j["path"] = run.SwitchPath();
  if (run.delivered_to) j["delivered_to"] = *run.delivered_to;
  ordered_json events = ordered_json::array();
  for (const TraceEvent& e : run.trace) events.push_back(TraceEventToJson(e));
  j["events"] = std::move(events);
  return j;
}

}  // namespace mstpath
