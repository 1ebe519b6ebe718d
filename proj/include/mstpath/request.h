// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

// IoT collection requests: planning a rooted tree with aggregation roles, and
// simulating epoch-based collection to check value, rate and jitter.

#ifndef MSTPATH_REQUEST_H_
#define MSTPATH_REQUEST_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mstpath/mst.h"
#include "mstpath/pipeline.h"
#include "mstpath/ruleplan.h"
#include "mstpath/topology.h"

namespace mstpath {

enum class Operation { kNone, kSum, kAverage };

std::string_view OperationName(Operation op);

struct UserRequest {
  // Either explicit stations or the name of a topology group.
  std::vector<NodeId> coverage;
  std::optional<std::string> coverage_group;
  std::string data_type;
  Rational rate_hz{1};
  Rational interval_s{10};
  double jitter_bound_ms = 0.0;
  Operation operation = Operation::kNone;
  std::optional<NodeId> root_hint;
};

// Throws Error(kParse) or Error(kValidation) for a broken invariant.
UserRequest ParseRequest(std::string_view text);

// Coverage stations, sorted; groups resolved against `topology`.
// Throws Error(kEmptyCoverage) or Error(kUnknownStation).
std::vector<NodeId> ResolveCoverage(const Topology& topology,
                                    const UserRequest& request);

// Partial aggregate carried up the tree.
struct Partial {
  double sum = 0.0;
  std::uint64_t count = 0;

  double Average() const { return sum / static_cast<double>(count); }
  friend bool operator==(const Partial&, const Partial&) = default;
};

Partial Combine(const Partial& a, const Partial& b);

enum class AggRole { kLeaf, kCombiner, kRoot };

std::string_view AggRoleName(AggRole role);

struct AggregationPlan {
  // Only nodes on some station-to-root path appear.
  std::map<NodeId, AggRole> roles;
};

struct DatapathPlan {
  UserRequest request;
  std::vector<NodeId> stations;
  NodeId root;
  EdgeSet mst;
  SpanningTree tree;
  RulePlan rules;
  AggregationPlan agg;
};

// Tree-path hop count from every station's switch to `root`, summed.
std::int64_t HopSum(const SpanningTree& tree, const Topology& topology,
                    std::span<const NodeId> stations);

// Root is the hint when present, else the switch with the smallest HopSum
// (ties to the smaller name). Throws Error(kEmptyCoverage),
// Error(kUnknownStation) or Error(kUnknownRoot).
DatapathPlan PlanRequest(const Topology& topology, const UserRequest& request);

// Extra latency per link, keyed by index into Topology::links(); links not
// present cost 0.
using LinkLatency = std::map<std::size_t, double>;

// {"default_ms": 0, "links": [{"at": ["s1", 3], "ms": 12.5}, ...]}; a port
// names the link attached to it. Throws Error(kParse).
LinkLatency ParseLatency(const Topology& topology, std::string_view text);

struct EpochResult {
  std::int64_t epoch_index = 0;
  Partial total;  // root's folded partial
  // Sum or average; empty for Operation::kNone.
  std::optional<double> value;
  std::vector<std::pair<NodeId, double>> per_station;
  std::vector<NodeId> missing;
  double arrival_spread_ms = 0.0;
  bool jitter_ok = true;

  bool complete() const { return missing.empty(); }
};

// Buckets readings by epoch (latest reading per station wins), folds
// partials leaf-to-root through the tree and measures the spread of
// arrival times at the root. Readings of another data type are ignored.
// Throws Error(kStationOutsideCoverage).
std::vector<EpochResult> SimulateCollection(const DatapathPlan& plan,
                                            std::span<const SensorReading> readings,
                                            const LinkLatency& latency = {});

// Sum of link latencies from `station` up to the plan's root.
double PathLatencyMs(const DatapathPlan& plan, std::string_view station,
                     const LinkLatency& latency);

struct StationRate {
  NodeId station;
  std::int64_t readings = 0;
  double observed_hz = 0.0;
  bool flagged = false;
};

struct RateReport {
  Rational span_s{0};
  Rational tolerance{1, 10};
  std::vector<StationRate> stations;

  bool any_flagged() const;
};

// Observed readings per second over the epochs the readings span; a station
// is flagged when it deviates from the requested rate by more than
// `tolerance` (relative).
RateReport VerifyRate(const DatapathPlan& plan,
                      std::span<const SensorReading> readings,
                      Rational tolerance = Rational(1, 10));

// `station,data_type,value,timestamp_ms` per line; blank lines, `#`
// comments and a leading header row are skipped. Throws Error(kParse).
std::vector<SensorReading> ParseReadings(std::string_view text);

std::string CollectionReportJson(const Topology& topology, const DatapathPlan& plan,
                                 std::span<const EpochResult> epochs,
                                 const RateReport& rates);
std::string RenderCollectionReport(const DatapathPlan& plan,
                                   std::span<const EpochResult> epochs,
                                   const RateReport& rates);

}  // namespace mstpath

#endif  // MSTPATH_REQUEST_H_
