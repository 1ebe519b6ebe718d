// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Every bound and tolerance is a named constant below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "mstpath/cli.h"
#include "mstpath/controller.h"
#include "mstpath/mst.h"
#include "mstpath/pipeline.h"
#include "mstpath/request.h"
#include "mstpath/ruleplan.h"
#include "mstpath/topology.h"
#include "../test_support.h"

namespace mstpath {
namespace {

namespace fs = std::filesystem;
using testing::DataPath;
using testing::GoldenPath;

constexpr double kReferenceS1SecondsMax = 1.0;
constexpr int kMstGraphs = 100;
constexpr int kMstMaxSwitches = 6;
constexpr double kMstSecondsMax = 30.0;
constexpr int kForwardTopologies = 50;
constexpr int kForwardMaxSwitches = 10;
constexpr int kForwardMaxHosts = 8;
constexpr double kForwardSecondsMax = 60.0;
constexpr int kAggInstances = 200;
constexpr double kAggRelativeTolerance = 1e-9;
constexpr double kJitterBoundMs = 100.0;
constexpr double kCompliantSpreadMs = 80.0;
constexpr double kViolatingSpreadMs = 120.0;
constexpr int kReplayRandomScenarios = 30;
constexpr std::uint64_t kSeed = 20260101;

struct Verdict {
  bool ok = true;
  std::string detail;
};

// Collects the first few failure messages.
class Check {
 public:
  void Expect(bool cond, const std::string& what) {
    if (cond) return;
    ++failures_;
    if (failures_ <= 3) msgs_ << (failures_ > 1 ? "; " : "") << what;
  }
  int failures() const { return failures_; }
  Verdict Done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + msgs_.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream msgs_;
};

fs::path ScratchDir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() /
               ("mstpath-accept-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int Cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  int code = RunCli(args, o, e);
  if (out != nullptr) *out = o.str() + e.str();
  return code;
}

Verdict ReferenceS1Fidelity() {
  Check c;
  fs::path dir = ScratchDir("s1ref");
  std::string log;
  int code = Cli({"compile", "--topology", DataPath("paper-topo.json"), "--root", "s1",
                  "--out", dir.string()},
                 &log);
  c.Expect(code == kExitOk, "compile exit " + std::to_string(code) + ": " + log);
  if (code == kExitOk) {
    std::vector<TableEntry> got = ParseRuntime(ReadFile(dir / "s1-runtime.json"));
    auto fwd = [](const char* ip, const char* mac, int port) {
      return ForwardEntry(Ipv4Addr::Parse(ip), 32, MacAddr::Parse(mac), port);
    };
    std::vector<TableEntry> expected = {fwd("10.0.1.1", "00:00:00:00:01:01", 1),
                                    fwd("10.0.2.2", "00:00:00:05:05:02", 3),
                                    fwd("10.0.3.3", "00:00:00:05:05:02", 3)};
    c.Expect(got == expected, "s1 entries differ from the reference table");
    for (const TableEntry& e : got) {
      c.Expect(e.table == "MyIngress.ipv4_lpm", "table " + e.table);
      c.Expect(e.action_name() == "MyIngress.ipv4_forward", "action name");
    }
    c.Expect(ReadFile(dir / "s1-runtime.json") == ReadFile(GoldenPath("s1-runtime.json")),
             "s1 file not byte-equal to golden");
  }
  fs::remove_all(dir);
  return c.Done("s1: 3 entries field-for-field equal");
}

Verdict MstOptimality() {
  Check c;
  std::mt19937_64 rng(kSeed + 2);
  testing::RandomOptions opts;
  opts.max_switches = kMstMaxSwitches;
  for (int i = 0; i < kMstGraphs; ++i) {
    Topology t = testing::RandomTopology(rng, opts);
    std::vector<EdgeSet> all = EnumerateSpanningTrees(t);
    Rational best = TotalWeight(all.front());
    for (const EdgeSet& s : all) best = std::min(best, TotalWeight(s));
    Rational got = TotalWeight(ComputeMst(t));
    c.Expect(got == best, "graph " + std::to_string(i) + ": " + FormatRational(got) +
                              " vs " + FormatRational(best));
  }
  return c.Done(std::to_string(kMstGraphs) + " graphs, 0 mismatches");
}

Verdict ForwardingConformance() {
  Check c;
  std::mt19937_64 rng(kSeed + 3);
  testing::RandomOptions opts;
  opts.max_switches = kForwardMaxSwitches;
  opts.min_hosts = 1;
  opts.max_hosts = kForwardMaxHosts;
  int runs = 0;
  int hop_limit = 0;
  for (int i = 0; i < kForwardTopologies; ++i) {
    Topology t = testing::RandomTopology(rng, opts);
    std::vector<NodeId> hosts = t.Hosts();
    const NodeId& root_host = hosts[rng() % hosts.size()];
    NodeId root = ResolveRootSwitch(t, root_host);
    EdgeSet mst = ComputeMst(t, root);
    SpanningTree tree = OrientTree(t, mst, root);
    RulePlan plan = SynthesizeRules(t, tree);
    Runtimes rt = InitialRuntimes(t);
    for (auto& [sw, r] : rt) r.table = plan.EntriesFor(sw);
    std::set<std::size_t> tree_links;
    for (const auto& [child, p] : tree.parents()) tree_links.insert(p.link_index);

    for (const NodeId& h : hosts) {
      PacketRun run = RunPacket(t, rt, h, *t.At(root_host).ipv4);
      ++runs;
      if (run.outcome == RunOutcome::kHopLimitExceeded) ++hop_limit;
      c.Expect(run.outcome == RunOutcome::kDelivered,
               "topology " + std::to_string(i) + " " + h + " not delivered");
      std::vector<NodeId> want = TreePath(tree, t.Attachment(h).node, root);
      c.Expect(run.SwitchPath() == want, "topology " + std::to_string(i) + " " + h +
                                             " path differs from tree_path");
      for (const Hop& hop : run.hops) {
        if (!hop.egress_port) continue;
        const Link* l = t.LinkAt({hop.sw, *hop.egress_port});
        c.Expect(l != nullptr &&
                     tree_links.contains(static_cast<std::size_t>(l - t.links().data())),
                 "non-tree link used at " + hop.sw);
      }
    }
  }
  c.Expect(hop_limit == 0, std::to_string(hop_limit) + " HopLimitExceeded");
  return c.Done(std::to_string(kForwardTopologies) + " topologies, " +
                std::to_string(runs) + " packets, 0 HopLimitExceeded");
}

Verdict IngressSemantics() {
  Check c;
  MacAddr prev_dst = MacAddr::Parse("00:00:00:00:00:aa");
  MacAddr param = MacAddr::Parse("00:00:00:05:05:02");
  PacketState p;
  p.eth = EthernetHeader{MacAddr::Parse("00:00:00:00:00:bb"), prev_dst, kEtherTypeIpv4};
  p.ipv4 = Ipv4Header{Ipv4Addr::Parse("10.0.1.1"), Ipv4Addr::Parse("10.0.2.2"), 64};
  PacketState out = ApplyIpv4Forward(p, param, 3);
  c.Expect(out.ipv4->ttl == 63, "ttl " + std::to_string(out.ipv4->ttl));
  c.Expect(out.eth.src_mac == prev_dst, "src_mac is not the previous dst_mac");
  c.Expect(out.eth.dst_mac == param, "dst_mac is not the parameter");
  c.Expect(out.meta.egress_spec == 3, "egress_spec");
  c.Expect(!out.meta.dropped, "ttl 64 packet dropped");

  p.ipv4->ttl = 1;
  PacketState last = ApplyIpv4Forward(p, param, 3);
  c.Expect(last.meta.dropped && last.ipv4->ttl == 0, "ttl 1 not dropped");

  SwitchRuntime rt{"s1", ParseRuntime(ReadFile(GoldenPath("s1-runtime.json")))};
  p.ipv4->ttl = 64;
  p.ipv4->dst = Ipv4Addr::Parse("10.0.9.9");
  ProcessResult miss = ProcessPacket(rt, p);
  c.Expect(miss.packet.meta.dropped && miss.events.back().reason == DropReason::kTableMiss,
           "table miss not dropped");
  return c.Done("ttl 64->63 with MAC swap; ttl 1 dropped; miss dropped");
}

Verdict DynamicReRoot() {
  Check c;
  Topology t = LoadTopology(DataPath("ring4.json"));
  ControllerState state(t);
  DynamicSetRoot(state, "s1");
  std::size_t before = state.op_log().size();
  DynamicSetRoot(state, "s3");
  std::vector<ControlOp> delta(state.op_log().begin() + static_cast<std::ptrdiff_t>(before),
                               state.op_log().end());

  // Hand-computed: h4's route on s1..s3 and s4's routes to h1..h3 change.
  auto mod = [](const char* sw, const char* ip, const char* mac, int port) {
    return ControlOp{ControlOpKind::kModifyEntry, sw, {},
                     ForwardEntry(Ipv4Addr::Parse(ip), 32, MacAddr::Parse(mac), port)};
  };
  std::vector<ControlOp> hand = {
      mod("s1", "10.0.4.4", "00:00:00:02:02:03", 2),
      mod("s2", "10.0.4.4", "00:00:00:03:03:03", 2),
      mod("s3", "10.0.4.4", "00:00:00:04:04:03", 2),
      mod("s4", "10.0.1.1", "00:00:00:03:03:02", 3),
      mod("s4", "10.0.2.2", "00:00:00:03:03:02", 3),
      mod("s4", "10.0.3.3", "00:00:00:03:03:02", 3),
  };
  c.Expect(delta.size() == hand.size(), "delta has " + std::to_string(delta.size()) + " ops");
  c.Expect(delta == hand, "delta content differs from the hand-computed ops");

  // Independent plan computation and set difference.
  RulePlan p1 = SynthesizeRules(t, OrientTree(t, ComputeMst(t, "s1"), "s1"));
  RulePlan p3 = SynthesizeRules(t, OrientTree(t, ComputeMst(t, "s3"), "s3"));
  std::set<std::pair<NodeId, std::string>> a, b;
  for (const auto& [sw, es] : p1.per_switch) {
    for (const TableEntry& e : es) a.insert({sw, TableEntryToJson(e).dump()});
  }
  for (const auto& [sw, es] : p3.per_switch) {
    for (const TableEntry& e : es) b.insert({sw, TableEntryToJson(e).dump()});
  }
  std::size_t only_new = 0;
  for (const auto& x : b) only_new += !a.contains(x);
  c.Expect(only_new == delta.size(), "set difference " + std::to_string(only_new));
  c.Expect(PlanFromRuntimes(state.runtimes()) == p3, "tables differ from fresh synthesis");

  std::size_t settled = state.op_log().size();
  DynamicSetRoot(state, "s3");
  c.Expect(state.op_log().size() == settled, "idempotent SetRoot logged ops");
  return c.Done("6 Modify ops as hand-computed; fresh-synthesis tables; idempotent 0 ops");
}

Verdict AggregationOracle() {
  Check c;
  std::mt19937_64 rng(kSeed + 6);
  testing::RandomOptions opts;
  opts.max_switches = 8;
  opts.min_hosts = 1;
  opts.max_hosts = 8;
  opts.extra_edge_probability = 0.3;
  std::uniform_int_distribution<int> value(-1000, 1000);
  int epochs_checked = 0;
  for (int i = 0; i < kAggInstances; ++i) {
    Topology t = testing::RandomTopology(rng, opts);
    std::vector<NodeId> hosts = t.Hosts();
    std::shuffle(hosts.begin(), hosts.end(), rng);
    hosts.resize(1 + rng() % hosts.size());
    UserRequest req;
    req.coverage = hosts;
    req.data_type = "t";
    req.jitter_bound_ms = kJitterBoundMs;
    for (Operation op : {Operation::kAverage, Operation::kSum}) {
      req.operation = op;
      DatapathPlan plan = PlanRequest(t, req);
      std::vector<SensorReading> readings;
      std::map<std::int64_t, std::vector<double>> flat;
      for (std::int64_t e = 0; e < 2; ++e) {
        for (const NodeId& s : plan.stations) {
          double v = value(rng);
          readings.push_back({s, "t", v, e * 10000 + static_cast<std::int64_t>(rng() % 9000)});
          flat[e].push_back(v);
        }
      }
      for (const EpochResult& r : SimulateCollection(plan, readings)) {
        ++epochs_checked;
        const std::vector<double>& vs = flat[r.epoch_index];
        double sum = 0;
        for (double v : vs) sum += v;
        c.Expect(r.complete(), "incomplete epoch");
        c.Expect(r.total.count == plan.stations.size(), "root count != |coverage|");
        if (op == Operation::kSum) {
          c.Expect(r.value && *r.value == sum, "sum not exact");
        } else {
          double mean = sum / static_cast<double>(vs.size());
          double rel = std::abs(*r.value - mean) / std::max(1.0, std::abs(mean));
          c.Expect(rel <= kAggRelativeTolerance, "average rel error " + std::to_string(rel));
        }
      }
    }
  }
  return c.Done(std::to_string(kAggInstances) + " instances, " +
                std::to_string(epochs_checked) + " epochs");
}

Verdict JitterVerdicts() {
  Check c;
  Topology t = LoadTopology(DataPath("seoul/topology.json"));
  UserRequest req = ParseRequest(ReadFile(DataPath("seoul/request.json")));
  c.Expect(req.interval_s == Rational(10), "interval");
  c.Expect(req.jitter_bound_ms == kJitterBoundMs, "bound");
  DatapathPlan plan = PlanRequest(t, req);
  std::vector<SensorReading> readings = ParseReadings(ReadFile(DataPath("seoul/readings.csv")));
  struct Case {
    const char* file;
    double spread;
    bool ok;
  };
  for (const Case& k : {Case{"seoul/latency.json", kCompliantSpreadMs, true},
                        Case{"seoul/latency-violating.json", kViolatingSpreadMs, false}}) {
    LinkLatency lat = ParseLatency(t, ReadFile(DataPath(k.file)));
    for (const EpochResult& e : SimulateCollection(plan, readings, lat)) {
      c.Expect(e.arrival_spread_ms == k.spread,
               std::string(k.file) + " spread " + std::to_string(e.arrival_spread_ms));
      c.Expect(e.jitter_ok == k.ok, std::string(k.file) + " verdict");
    }
  }
  fs::path dir = ScratchDir("jitter");
  auto run = [&](const char* latency) {
    return Cli({"request", "--topology", DataPath("seoul/topology.json"), "--request",
                DataPath("seoul/request.json"), "--readings", DataPath("seoul/readings.csv"),
                "--latency", DataPath(latency), "--report", (dir / "r.json").string()});
  };
  c.Expect(run("seoul/latency.json") == kExitOk, "compliant run exit");
  int code = run("seoul/latency-violating.json");
  c.Expect(code == kExitViolation, "violating run exit " + std::to_string(code));
  fs::remove_all(dir);
  return c.Done("spreads 80/120 ms -> jitter_ok true/false; violating exit 2");
}

std::string RuntimeBytes(const Runtimes& rt) {
  std::string out;
  for (const auto& [sw, r] : rt) {
    out += sw + " " + r.pipeline_profile + "\n" + SerializeEntries(r.table);
  }
  return out;
}

Verdict ReplayDeterminism() {
  Check c;
  std::vector<std::pair<Topology, std::vector<ScenarioEvent>>> scenarios;
  scenarios.emplace_back(LoadTopology(DataPath("ring4.json")),
                         ParseScenario(ReadFile(DataPath("ring4-reroot.json"))));
  std::mt19937_64 rng(kSeed + 8);
  testing::RandomOptions opts;
  opts.max_switches = 8;
  opts.min_hosts = 2;
  opts.max_hosts = 6;
  for (int i = 0; i < kReplayRandomScenarios; ++i) {
    Topology t = testing::RandomTopology(rng, opts);
    std::vector<NodeId> hosts = t.Hosts();
    std::vector<NodeId> switches = t.Switches();
    std::vector<ScenarioEvent> ev;
    std::int64_t time = 0;
    for (int k = 0; k < 5; ++k) {
      ev.push_back(ScenarioEvent::SetRoot(++time, switches[rng() % switches.size()]));
      ev.push_back(ScenarioEvent::Inject(++time, hosts[rng() % hosts.size()],
                                         hosts[rng() % hosts.size()]));
    }
    scenarios.emplace_back(std::move(t), std::move(ev));
  }
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& [t, ev] = scenarios[i];
    ScenarioReport r = RunScenario(t, ev);
    c.Expect(RuntimeBytes(Replay(t, r.op_log)) == RuntimeBytes(r.final_runtimes),
             "scenario " + std::to_string(i) + " replay differs");
    c.Expect(ReportToJson(RunScenario(t, ev)) == ReportToJson(r),
             "scenario " + std::to_string(i) + " report not stable");
  }

  // Every CLI output file, twice, compared byte for byte and against goldens.
  auto outputs = [&](const fs::path& dir) {
    std::map<std::string, std::string> files;
    Cli({"compile", "--topology", DataPath("paper-topo.json"), "--root", "s1", "--out",
         (dir / "rules").string()});
    Cli({"controller", "--topology", DataPath("ring4.json"), "--scenario",
         DataPath("ring4-reroot.json"), "--report", (dir / "controller.json").string()});
    Cli({"request", "--topology", DataPath("seoul/topology.json"), "--request",
         DataPath("seoul/request.json"), "--readings", DataPath("seoul/readings.csv"),
         "--latency", DataPath("seoul/latency.json"), "--report",
         (dir / "request.json").string()});
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = ReadFile(e.path());
    }
    return files;
  };
  fs::path d1 = ScratchDir("replay1");
  fs::path d2 = ScratchDir("replay2");
  std::map<std::string, std::string> first = outputs(d1);
  std::map<std::string, std::string> second = outputs(d2);
  // Five runtime files plus two reports.
  c.Expect(first.size() == 7, "expected 7 output files, got " + std::to_string(first.size()));
  c.Expect(first == second, "outputs differ between runs");
  c.Expect(first["rules/s1-runtime.json"] == ReadFile(GoldenPath("s1-runtime.json")),
           "s1 runtime differs from golden");
  if (first.contains("controller.json")) {
    auto doc = nlohmann::ordered_json::parse(first["controller.json"]);
    c.Expect(doc["op_log"].dump(2) + "\n" == ReadFile(GoldenPath("ring4-reroot-oplog.json")),
             "op_log differs from golden");
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
  return c.Done(std::to_string(scenarios.size()) + " scenarios replayed; " +
                std::to_string(first.size()) + " output files identical across 2 runs");
}

struct Criterion {
  int id;
  const char* name;
  double seconds_max;  // 0 = no time bound
  std::function<Verdict()> run;
};

}  // namespace
}  // namespace mstpath

int main() {
  using namespace mstpath;
  const std::vector<Criterion> criteria = {
      {1, "s1-reference-fidelity", kReferenceS1SecondsMax, ReferenceS1Fidelity},
      {2, "mst-optimality", kMstSecondsMax, MstOptimality},
      {3, "forwarding-conformance", kForwardSecondsMax, ForwardingConformance},
      {4, "ingress-semantics", 0, IngressSemantics},
      {5, "dynamic-reroot", 0, DynamicReRoot},
      {6, "aggregation-oracle", 0, AggregationOracle},
      {7, "jitter-verdicts", 0, JitterVerdicts},
      {8, "replay-determinism", 0, ReplayDeterminism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.seconds_max > 0 && secs > c.seconds_max) {
      v.ok = false;
      v.detail += " (over the " + std::to_string(c.seconds_max) + " s limit)";
    }
    std::printf("%s %d %-24s %8.3fs  %s\n", v.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                v.detail.c_str());
    failed += !v.ok;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
