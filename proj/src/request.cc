// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#include "mstpath/request.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "json_util.h"

namespace mstpath {

using internal::Json;
using internal::OrderedJson;

std::string_view OperationName(Operation op) {
  switch (op) {
    case Operation::kNone: return "none";
    case Operation::kSum: return "sum";
    case Operation::kAverage: return "average";
  }
  return "?";
}

std::string_view AggRoleName(AggRole role) {
  switch (role) {
    case AggRole::kLeaf: return "Leaf";
    case AggRole::kCombiner: return "Combiner";
    case AggRole::kRoot: return "Root";
  }
  return "?";
}

UserRequest ParseRequest(std::string_view text) {
  Json doc = internal::ParseJson(text, "request");
  UserRequest req;
  const Json& cov = internal::Require(doc, "coverage", "request");
  if (cov.is_string()) {
    req.coverage_group = cov.get<std::string>();
  } else if (cov.is_array()) {
    for (const Json& s : cov) {
      if (!s.is_string()) {
        throw Error(ErrorCode::kParse, "request.coverage: expected station names");
      }
      req.coverage.push_back(s.get<std::string>());
    }
  } else {
    throw Error(ErrorCode::kParse,
                "request.coverage: expected a list of stations or a group name");
  }
  req.data_type = internal::RequireString(doc, "data_type", "request");
  req.rate_hz = internal::JsonToRational(internal::Require(doc, "rate_hz", "request"),
                                         "request.rate_hz");
  req.interval_s = internal::JsonToRational(
      internal::Require(doc, "interval_s", "request"), "request.interval_s");
  req.jitter_bound_ms = internal::JsonToDouble(
      internal::Require(doc, "jitter_bound_ms", "request"), "request.jitter_bound_ms");
  std::string op = internal::RequireString(doc, "operation", "request");
  if (op == "none") {
    req.operation = Operation::kNone;
  } else if (op == "sum") {
    req.operation = Operation::kSum;
  } else if (op == "average") {
    req.operation = Operation::kAverage;
  } else {
    throw Error(ErrorCode::kParse, "request.operation: unknown operation '" + op + "'");
  }
  if (doc.contains("root_hint") && !doc["root_hint"].is_null()) {
    req.root_hint = internal::RequireString(doc, "root_hint", "request");
  }

  if (req.rate_hz <= 0) throw Error(ErrorCode::kValidation, "rate_hz must be positive");
  if (req.interval_s <= 0) {
    throw Error(ErrorCode::kValidation, "interval_s must be positive");
  }
  if (!(req.jitter_bound_ms >= 0)) {
    throw Error(ErrorCode::kValidation, "jitter_bound_ms must be nonnegative");
  }
  if (!req.coverage_group && req.coverage.empty()) {
    throw Error(ErrorCode::kEmptyCoverage, "coverage is empty");
  }
  return req;
}

std::vector<NodeId> ResolveCoverage(const Topology& topology,
                                    const UserRequest& request) {
  std::vector<NodeId> stations = request.coverage;
  if (request.coverage_group) {
    auto it = topology.groups().find(*request.coverage_group);
    if (it == topology.groups().end()) {
      throw Error(ErrorCode::kUnknownStation,
                  "no group named '" + *request.coverage_group + "'");
    }
    stations.insert(stations.end(), it->second.begin(), it->second.end());
  }
  std::sort(stations.begin(), stations.end());
  stations.erase(std::unique(stations.begin(), stations.end()), stations.end());
  if (stations.empty()) throw Error(ErrorCode::kEmptyCoverage, "coverage is empty");
  for (const NodeId& s : stations) {
    const Node* n = topology.Find(s);
    if (n == nullptr || !n->is_host()) {
      throw Error(ErrorCode::kUnknownStation, "'" + s + "' is not a base station");
    }
  }
  return stations;
}

Partial Combine(const Partial& a, const Partial& b) {
  return Partial{a.sum + b.sum, a.count + b.count};
}

std::int64_t HopSum(const SpanningTree& tree, const Topology& topology,
                    std::span<const NodeId> stations) {
  std::int64_t total = 0;
  for (const NodeId& s : stations) {
    NodeId sw = topology.Attachment(s).node;
    total += static_cast<std::int64_t>(TreePath(tree, sw, tree.root()).size()) - 1;
  }
  return total;
}

DatapathPlan PlanRequest(const Topology& topology, const UserRequest& request) {
  DatapathPlan plan;
  plan.request = request;
  plan.stations = ResolveCoverage(topology, request);

  if (request.root_hint) {
    plan.root = ResolveRootSwitch(topology, *request.root_hint);
    plan.mst = ComputeMst(topology, plan.root);
    plan.tree = OrientTree(topology, plan.mst, plan.root);
  } else {
    std::optional<std::int64_t> best;
    for (const NodeId& sw : topology.Switches()) {
      EdgeSet mst = ComputeMst(topology, sw);
      SpanningTree tree = OrientTree(topology, mst, sw);
      std::int64_t hops = HopSum(tree, topology, plan.stations);
      spdlog::debug("root candidate {}: hop sum {}", sw, hops);
      if (!best || hops < *best) {
        best = hops;
        plan.root = sw;
        plan.mst = std::move(mst);
        plan.tree = std::move(tree);
      }
    }
  }
  plan.rules = SynthesizeRules(topology, plan.tree);

  plan.agg.roles[plan.root] = AggRole::kRoot;
  for (const NodeId& s : plan.stations) {
    plan.agg.roles[s] = AggRole::kLeaf;
    for (const ParentLink* p = plan.tree.Parent(s); p != nullptr;
         p = plan.tree.Parent(p->parent)) {
      if (p->parent != plan.root) plan.agg.roles[p->parent] = AggRole::kCombiner;
    }
  }
  return plan;
}

LinkLatency ParseLatency(const Topology& topology, std::string_view text) {
  Json doc = internal::ParseJson(text, "latency");
  LinkLatency out;
  if (doc.contains("default_ms")) {
    double def = internal::JsonToDouble(doc["default_ms"], "latency.default_ms");
    if (def < 0) throw Error(ErrorCode::kParse, "latency.default_ms is negative");
    for (std::size_t i = 0; i < topology.links().size(); ++i) out[i] = def;
  }
  if (doc.contains("links")) {
    const Json& jl = doc["links"];
    if (!jl.is_array()) throw Error(ErrorCode::kParse, "latency.links: expected a list");
    for (std::size_t i = 0; i < jl.size(); ++i) {
      std::string path = "latency.links[" + std::to_string(i) + "]";
      const Json& at = internal::Require(jl[i], "at", path);
      if (!at.is_array() || at.size() != 2 || !at[0].is_string() ||
          !at[1].is_number_integer()) {
        throw Error(ErrorCode::kParse, path + ".at: expected [node, port]");
      }
      PortRef ref{at[0].get<std::string>(), at[1].get<int>()};
      const Link* link = topology.LinkAt(ref);
      if (link == nullptr) {
        throw Error(ErrorCode::kParse, path + ".at: no link at " + ref.node + ":" +
                                           std::to_string(ref.port));
      }
      double ms = internal::JsonToDouble(internal::Require(jl[i], "ms", path), path + ".ms");
      if (ms < 0) throw Error(ErrorCode::kParse, path + ".ms is negative");
      out[static_cast<std::size_t>(link - topology.links().data())] = ms;
    }
  }
  return out;
}

double PathLatencyMs(const DatapathPlan& plan, std::string_view station,
                     const LinkLatency& latency) {
  double total = 0.0;
  for (const ParentLink* p = plan.tree.Parent(station); p != nullptr;
       p = plan.tree.Parent(p->parent)) {
    auto it = latency.find(p->link_index);
    if (it != latency.end()) total += it->second;
  }
  return total;
}

namespace {

std::int64_t EpochOf(std::int64_t timestamp_ms, const Rational& interval_s) {
  // floor(t / (1000 * p / q)) = floor(t * q / (1000 * p))
  __int128 num = static_cast<__int128>(timestamp_ms) * interval_s.denominator();
  __int128 den = static_cast<__int128>(1000) * interval_s.numerator();
  __int128 q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return static_cast<std::int64_t>(q);
}

bool MatchesType(const UserRequest& req, const SensorReading& r) {
  return req.data_type.empty() || r.data_type == req.data_type;
}

}  // namespace

std::vector<EpochResult> SimulateCollection(const DatapathPlan& plan,
                                            std::span<const SensorReading> readings,
                                            const LinkLatency& latency) {
  const UserRequest& req = plan.request;
  std::set<NodeId> coverage(plan.stations.begin(), plan.stations.end());
  std::map<std::int64_t, std::map<NodeId, const SensorReading*>> epochs;
  std::size_t ignored = 0;
  for (const SensorReading& r : readings) {
    if (!coverage.contains(r.station)) {
      throw Error(ErrorCode::kStationOutsideCoverage,
                  "reading from '" + r.station + "' at " +
                      std::to_string(r.timestamp_ms) + " ms");
    }
    if (!MatchesType(req, r)) {
      ++ignored;
      continue;
    }
    const SensorReading*& slot = epochs[EpochOf(r.timestamp_ms, req.interval_s)][r.station];
    if (slot == nullptr || r.timestamp_ms >= slot->timestamp_ms) slot = &r;
  }
  if (ignored > 0) spdlog::info("ignored {} readings of other data types", ignored);

  std::map<NodeId, double> path_latency;
  for (const NodeId& s : plan.stations) {
    path_latency[s] = PathLatencyMs(plan, s, latency);
  }

  std::vector<EpochResult> out;
  for (const auto& [index, by_station] : epochs) {
    EpochResult res;
    res.epoch_index = index;

    auto fold = [&](auto& self, const NodeId& node) -> Partial {
      Partial acc;
      if (auto it = by_station.find(node); it != by_station.end()) {
        acc = Combine(acc, Partial{it->second->value, 1});
      }
      for (const NodeId& child : plan.tree.Children(node)) {
        if (plan.agg.roles.contains(child)) acc = Combine(acc, self(self, child));
      }
      return acc;
    };
    res.total = fold(fold, plan.tree.root());

    std::optional<double> earliest;
    std::optional<double> latest;
    for (const NodeId& s : plan.stations) {
      auto it = by_station.find(s);
      if (it == by_station.end()) {
        res.missing.push_back(s);
        continue;
      }
      double arrival = static_cast<double>(it->second->timestamp_ms) + path_latency[s];
      earliest = earliest ? std::min(*earliest, arrival) : arrival;
      latest = latest ? std::max(*latest, arrival) : arrival;
      res.per_station.emplace_back(s, it->second->value);
    }
    if (!res.missing.empty()) {
      spdlog::warn("epoch {}: {} station(s) missing", index, res.missing.size());
    }
    res.arrival_spread_ms = earliest ? *latest - *earliest : 0.0;
    res.jitter_ok = res.arrival_spread_ms <= req.jitter_bound_ms;
    switch (req.operation) {
      case Operation::kSum:
        res.value = res.total.sum;
        break;
      case Operation::kAverage:
        if (res.total.count > 0) res.value = res.total.Average();
        break;
      case Operation::kNone:
        break;
    }
    out.push_back(std::move(res));
  }
  return out;
}

bool RateReport::any_flagged() const {
  return std::any_of(stations.begin(), stations.end(),
                     [](const StationRate& s) { return s.flagged; });
}

RateReport VerifyRate(const DatapathPlan& plan,
                      std::span<const SensorReading> readings, Rational tolerance) {
  const UserRequest& req = plan.request;
  RateReport report;
  report.tolerance = tolerance;
  std::map<NodeId, std::int64_t> counts;
  for (const NodeId& s : plan.stations) counts[s] = 0;
  std::optional<std::int64_t> first;
  std::optional<std::int64_t> last;
  for (const SensorReading& r : readings) {
    if (!MatchesType(req, r)) continue;
    std::int64_t e = EpochOf(r.timestamp_ms, req.interval_s);
    first = first ? std::min(*first, e) : e;
    last = last ? std::max(*last, e) : e;
    if (auto it = counts.find(r.station); it != counts.end()) ++it->second;
  }
  std::int64_t epochs = first ? *last - *first + 1 : 1;
  report.span_s = req.interval_s * epochs;
  for (const auto& [station, n] : counts) {
    Rational observed = Rational(n) / report.span_s;
    Rational deviation = observed - req.rate_hz;
    if (deviation < 0) deviation = -deviation;
    report.stations.push_back(StationRate{station, n, ToDouble(observed),
                                          deviation > tolerance * req.rate_hz});
  }
  return report;
}

std::vector<SensorReading> ParseReadings(std::string_view text) {
  std::vector<SensorReading> out;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) {
      auto b = f.find_first_not_of(" \t");
      auto e = f.find_last_not_of(" \t");
      fields.push_back(b == std::string::npos ? "" : f.substr(b, e - b + 1));
    }
    if (out.empty() && !fields.empty() && fields[0] == "station") continue;
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kParse,
                   "readings line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 4) throw fail("expected station,data_type,value,timestamp_ms");
    SensorReading r;
    r.station = fields[0];
    r.data_type = fields[1];
    if (r.station.empty()) throw fail("empty station");
    {
      const std::string& v = fields[2];
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), r.value);
      if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(r.value)) {
        throw fail("bad value '" + v + "'");
      }
    }
    {
      const std::string& t = fields[3];
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), r.timestamp_ms);
      if (ec != std::errc() || ptr != t.data() + t.size() || r.timestamp_ms < 0) {
        throw fail("bad timestamp '" + t + "'");
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string CollectionReportJson(const Topology& topology, const DatapathPlan& plan,
                                 std::span<const EpochResult> epochs,
                                 const RateReport& rates) {
  OrderedJson doc;
  OrderedJson jplan;
  jplan["root"] = plan.root;
  jplan["operation"] = OperationName(plan.request.operation);
  jplan["stations"] = plan.stations;
  OrderedJson edges = OrderedJson::array();
  for (const TreeEdge& e : plan.mst.edges) {
    const Link& l = topology.links()[e.link_index];
    edges.push_back({{"a", {l.a.node, l.a.port}},
                     {"b", {l.b.node, l.b.port}},
                     {"weight", internal::RationalToJson(e.weight)}});
  }
  jplan["tree_edges"] = std::move(edges);
  jplan["total_weight"] = internal::RationalToJson(TotalWeight(plan.mst));
  OrderedJson roles = OrderedJson::object();
  for (const auto& [node, role] : plan.agg.roles) roles[node] = AggRoleName(role);
  jplan["aggregation"] = std::move(roles);
  doc["plan"] = std::move(jplan);

  OrderedJson jepochs = OrderedJson::array();
  bool all_ok = true;
  for (const EpochResult& e : epochs) {
    OrderedJson j;
    j["epoch"] = e.epoch_index;
    j["sum"] = e.total.sum;
    j["count"] = e.total.count;
    j["value"] = e.value ? OrderedJson(*e.value) : OrderedJson(nullptr);
    if (plan.request.operation == Operation::kNone) {
      OrderedJson per = OrderedJson::object();
      for (const auto& [s, v] : e.per_station) per[s] = v;
      j["per_station"] = std::move(per);
    }
    j["missing"] = e.missing;
    j["arrival_spread_ms"] = e.arrival_spread_ms;
    j["jitter_ok"] = e.jitter_ok;
    all_ok = all_ok && e.jitter_ok;
    jepochs.push_back(std::move(j));
  }
  doc["epochs"] = std::move(jepochs);

  OrderedJson jrates;
  jrates["span_s"] = internal::RationalToJson(rates.span_s);
  jrates["requested_hz"] = internal::RationalToJson(plan.request.rate_hz);
  jrates["tolerance"] = internal::RationalToJson(rates.tolerance);
  OrderedJson jst = OrderedJson::array();
  for (const StationRate& s : rates.stations) {
    jst.push_back({{"station", s.station},
                   {"readings", s.readings},
                   {"observed_hz", s.observed_hz},
                   {"flagged", s.flagged}});
  }
  jrates["stations"] = std::move(jst);
  doc["rates"] = std::move(jrates);
  doc["jitter_ok"] = all_ok;
  return doc.dump(2) + "\n";
}

std::string RenderCollectionReport(const DatapathPlan& plan,
                                   std::span<const EpochResult> epochs,
                                   const RateReport& rates) {
  std::ostringstream out;
  out << "root " << plan.root << ", " << plan.stations.size() << " station(s), "
      << OperationName(plan.request.operation) << " every "
      << FormatRational(plan.request.interval_s) << " s\n";
  out << "epoch  count  value          spread_ms  jitter\n";
  for (const EpochResult& e : epochs) {
    char line[128];
    std::string value = e.value ? std::to_string(*e.value) : "-";
    std::snprintf(line, sizeof(line), "%-6lld %-6llu %-14s %-10.3f %s",
                  static_cast<long long>(e.epoch_index),
                  static_cast<unsigned long long>(e.total.count), value.c_str(),
                  e.arrival_spread_ms, e.jitter_ok ? "ok" : "VIOLATED");
    out << line;
    if (!e.missing.empty()) out << "  missing " << e.missing.size();
    out << "\n";
  }
  for (const StationRate& s : rates.stations) {
    if (s.flagged) {
      out << "rate: " << s.station << " observed " << s.observed_hz
          << " Hz, requested " << ToDouble(plan.request.rate_hz) << " Hz\n";
    }
  }
  return out.str();
}

}  // namespace mstpath
