// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#include "mstpath/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "mstpath/controller.h"
#include "mstpath/mst.h"
#include "mstpath/pipeline.h"
#include "mstpath/request.h"
#include "mstpath/ruleplan.h"
#include "mstpath/topology.h"

namespace mstpath {

namespace fs = std::filesystem;

namespace {

void ConfigureLogging(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("mstpath", sink);
  logger->set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::err;
  if (const char* env = std::getenv("MSTPATH_LOG")) {
    std::string v(env);
    if (v == "info") {
      level = spdlog::level::info;
    } else if (v == "debug") {
      level = spdlog::level::debug;
    }
  }
  logger->set_level(level);
  spdlog::set_default_logger(std::move(logger));
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kValidation, "cannot write " + path.string());
  f << text;
}

struct CompileArgs {
  std::string topology;
  std::string root;
  std::string out_dir;
  bool to_stdout = false;
};

int Compile(const CompileArgs& a, std::ostream& out) {
  Topology t = LoadTopology(a.topology);
  NodeId root = ResolveRootSwitch(t, a.root);
  EdgeSet mst = ComputeMst(t, root);
  SpanningTree tree = OrientTree(t, mst, root);
  RulePlan plan = SynthesizeRules(t, tree);

  out << "root " << root << "\n";
  for (const TreeEdge& e : mst.edges) {
    const Link& l = t.links()[e.link_index];
    out << "mst edge " << l.a.node << ":" << l.a.port << " - " << l.b.node << ":"
        << l.b.port << " weight " << FormatRational(e.weight) << "\n";
  }
  out << "total weight " << FormatRational(TotalWeight(mst)) << "\n";
  for (const auto& [sw, entries] : plan.per_switch) {
    std::string doc = SerializeRuntime(plan, sw);
    fs::path file = fs::path(a.out_dir) / (sw + "-runtime.json");
    WriteFile(file, doc);
    out << "wrote " << file.string() << " (" << entries.size() << " entries)\n";
    if (a.to_stdout) out << doc;
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string topology;
  std::string rules_dir;
  std::string from;
  std::string to;
  int ttl = 64;
  bool to_stdout = false;
};

int Simulate(const SimulateArgs& a, std::ostream& out) {
  Topology t = LoadTopology(a.topology);
  ControllerState state = StaticDeploy(t, LoadRuntimeDir(t, a.rules_dir));
  Ipv4Addr dst;
  if (const Node* n = t.Find(a.to); n != nullptr && n->is_host()) {
    dst = *n->ipv4;
  } else {
    dst = Ipv4Addr::Parse(a.to);
  }
  PacketRun run = RunPacket(t, state.runtimes(), a.from, dst, a.ttl);
  out << RenderTrace(run.trace);
  out << RunOutcomeName(run.outcome) << ", path";
  for (const NodeId& sw : run.SwitchPath()) out << " " << sw;
  out << "\n";
  if (a.to_stdout) out << PacketRunToJson(run).dump(2) << "\n";
  return run.outcome == RunOutcome::kDelivered ? kExitOk : kExitViolation;
}

struct ControllerArgs {
  std::string topology;
  std::string scenario;
  std::string report;
  bool to_stdout = false;
};

int Controller(const ControllerArgs& a, std::ostream& out) {
  Topology t = LoadTopology(a.topology);
  std::vector<ScenarioEvent> events = ParseScenario(ReadFile(a.scenario));
  ScenarioReport report = RunScenario(t, events);
  std::string doc = ReportToJson(report);
  WriteFile(a.report, doc);
  out << RenderReport(report);
  if (a.to_stdout) out << doc;
  return report.AllDelivered() ? kExitOk : kExitViolation;
}

struct RequestArgs {
  std::string topology;
  std::string request;
  std::string readings;
  std::string latency;
  std::string report;
  std::string rate_tolerance = "0.1";
  bool to_stdout = false;
};

int Request(const RequestArgs& a, std::ostream& out) {
  Topology t = LoadTopology(a.topology);
  UserRequest req = ParseRequest(ReadFile(a.request));
  std::vector<SensorReading> readings = ParseReadings(ReadFile(a.readings));
  LinkLatency latency;
  if (!a.latency.empty()) latency = ParseLatency(t, ReadFile(a.latency));
  DatapathPlan plan = PlanRequest(t, req);
  std::vector<EpochResult> epochs = SimulateCollection(plan, readings, latency);
  RateReport rates = VerifyRate(plan, readings, ParseRational(a.rate_tolerance));
  std::string doc = CollectionReportJson(t, plan, epochs, rates);
  WriteFile(a.report, doc);
  out << RenderCollectionReport(plan, epochs, rates);
  if (a.to_stdout) out << doc;
  bool jitter_ok = std::all_of(epochs.begin(), epochs.end(),
                               [](const EpochResult& e) { return e.jitter_ok; });
  return jitter_ok ? kExitOk : kExitViolation;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  ConfigureLogging(err);

  CLI::App app{"MST datapath compiler and match-action simulator", "mstpath"};
  app.require_subcommand(1);

  CompileArgs compile;
  auto* c = app.add_subcommand("compile", "write per-switch runtime rule files");
  c->add_option("--topology", compile.topology, "topology file")->required();
  c->add_option("--root", compile.root, "root switch or collection host")->required();
  c->add_option("--out", compile.out_dir, "output directory")->required();
  c->add_flag("--stdout", compile.to_stdout, "also print runtime files");

  SimulateArgs simulate;
  auto* s = app.add_subcommand("simulate", "trace one packet through the network");
  s->add_option("--topology", simulate.topology, "topology file")->required();
  s->add_option("--rules", simulate.rules_dir, "directory of runtime files")->required();
  s->add_option("--from", simulate.from, "origin host")->required();
  s->add_option("--to", simulate.to, "destination IPv4 or host name")->required();
  s->add_option("--ttl", simulate.ttl, "initial TTL")->capture_default_str();
  s->add_flag("--stdout", simulate.to_stdout, "also print the trace as JSON");

  ControllerArgs controller;
  auto* k = app.add_subcommand("controller", "run a controller scenario");
  k->add_option("--topology", controller.topology, "topology file")->required();
  k->add_option("--scenario", controller.scenario, "scenario file")->required();
  k->add_option("--report", controller.report, "report output file")->required();
  k->add_flag("--stdout", controller.to_stdout, "also print the report JSON");

  RequestArgs request;
  auto* r = app.add_subcommand("request", "plan and simulate a collection request");
  r->add_option("--topology", request.topology, "topology file")->required();
  r->add_option("--request", request.request, "request file")->required();
  r->add_option("--readings", request.readings, "readings CSV")->required();
  r->add_option("--latency", request.latency, "per-link latency file");
  r->add_option("--report", request.report, "report output file")->required();
  r->add_option("--rate-tolerance", request.rate_tolerance,
                "relative rate tolerance")
      ->capture_default_str();
  r->add_flag("--stdout", request.to_stdout, "also print the report JSON");

  std::vector<std::string> storage{"mstpath"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*c) return Compile(compile, out);
    if (*s) return Simulate(simulate, out);
    if (*k) return Controller(controller, out);
    if (*r) return Request(request, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace mstpath
