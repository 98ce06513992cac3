#include "qmesh/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qmesh/cli/verify.hpp"
#include "qmesh/core/errors.hpp"
#include "qmesh/core/random.hpp"
#include "qmesh/experiments/csv.hpp"
#include "qmesh/experiments/experiments.hpp"
#include "qmesh/mesh/topology_io.hpp"
#include "qmesh/routing/golden.hpp"
#include "qmesh/routing/session.hpp"

namespace qmesh::cli {
namespace {

/// Usage errors detected after CLI11 accepted the flags.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/*
 * JSON mirror of the flags. Objects named after a subcommand hold that
 * subcommand's flags; top-level scalars address the main program.
 *   {"sweep": {"runs": 50, "p": [0.3, 0.5]}}
 */
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config: top level must be an object");
    std::vector<CLI::ConfigItem> items;
    collect(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void collect(const nlohmann::json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto sub = parents;
        sub.push_back(key);
        collect(value, sub, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

std::vector<int> parse_counts(const std::string& spec) {
  std::vector<int> out;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("bad node count '" + s + "' in --nodes");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw UsageError("--nodes range must be start:stop:step");
    const int start = to_int(parts[0]);
    const int stop = to_int(parts[1]);
    const int step = to_int(parts[2]);
    if (step < 1 || start < 1 || stop < start) throw UsageError("--nodes range needs 1 <= start <= stop and step >= 1");
    for (int c = start; c <= stop; c += step) out.push_back(c);
  } else {
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(to_int(part));
  }
  if (out.empty()) throw UsageError("--nodes is empty");
  return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

// ---- prob ------------------------------------------------------------------

struct ProbArgs {
  std::vector<double> n{0.5, 0.7, 0.9};
  int hops = 0;
  int max_hops = 0;
  std::string out;
  bool oracle = false;
};

int cmd_prob(const ProbArgs& a, std::ostream& out) {
  std::vector<EntanglementDegree> degrees;
  for (double n : a.n) degrees.emplace_back(n);
  if (a.hops < 0 || a.max_hops < 0) throw UsageError("hop counts must be positive");
  if (a.hops > 0 && a.max_hops > 0) throw UsageError("--hops and --max-hops are exclusive");

  std::ostringstream text;
  int lo = 1;
  int hi = a.max_hops > 0 ? a.max_hops : 150;
  if (a.hops > 0) {
    lo = hi = a.hops;
    for (const auto& n : degrees) text << format_real(analytic_success(a.hops, n)) << '\n';
  } else {
    write_fig2_csv(text, fig2_data(a.n, hi));
  }
  emit(text.str(), a.out, out);

  if (a.oracle) {
    const int top = std::min(hi, kMaxOracleHops);
    double worst = 0;
    int checked = 0;
    const StateVector inputs[] = {new_qubit(Complex(1), Complex(0)), new_qubit(Complex(0.6), Complex(0, 0.8))};
    for (const auto& n : degrees) {
      for (int i = lo; i <= top; ++i) {
        for (const StateVector& in : inputs) {
          const double exact = enumerate_chain(i, n, in).success_probability;
          worst = std::max(worst, std::abs(exact - analytic_success(i, n)));
          ++checked;
        }
      }
    }
    if (checked == 0) {
      out << "oracle: no hop count within 1.." << kMaxOracleHops << '\n';
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3e", worst);
      out << "oracle: " << checked << " checks, max deviation " << buf << '\n';
    }
  }
  return 0;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  int max_hops = kMaxOracleHops;
  std::uint64_t seed = 1;
  int fault = -1;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (a.max_hops < 1 || a.max_hops > kMaxOracleHops) {
    throw UsageError("--max-hops must lie in 1.." + std::to_string(kMaxOracleHops));
  }
  VerifyOptions opts;
  opts.max_hops = a.max_hops;
  opts.seed = a.seed;
  if (a.fault >= 0) {
    if (a.fault >= static_cast<int>(opts.table.size())) throw UsageError("fault index out of range");
    opts.table[a.fault] = compose(opts.table[a.fault], PauliOp::X);
  }
  int failed = 0;
  for (const CheckResult& c : run_verification(opts)) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    failed += c.passed ? 0 : 1;
  }
  if (failed) {
    out << failed << " check(s) failed\n";
    return 2;
  }
  out << "all checks passed\n";
  return 0;
}

// ---- route -----------------------------------------------------------------

struct RouteArgs {
  int nodes = 50;
  double range = 200;
  double p = 1.0;
  double n = 1.0;
  std::uint64_t seed = 1;
  std::string mode = "piggyback";
  std::string quantum = "tracked";
  std::string trace;
  std::string dump;
  std::string topology;
  bool golden = false;
  long window = 0;
  bool fallback_attach = false;
};

int cmd_route(const RouteArgs& a, std::ostream& out) {
  SimConfig sim;
  sim.n = EntanglementDegree(a.n);
  sim.mode = a.mode == "separate" ? SessionMode::Separate : SessionMode::Piggyback;
  sim.quantum = a.quantum == "exact" ? QuantumMode::Exact : QuantumMode::Tracked;
  sim.selection_window = a.window;
  sim.record_trace = !a.trace.empty();
  if (a.window < 0) throw UsageError("--window must be non-negative");
  if (a.golden && !a.topology.empty()) throw UsageError("--golden-example and --topology are exclusive");

  Topology t;
  NodeId src{};
  NodeId dst{};
  if (a.golden) {
    t = golden_topology();
    src = kGoldenSource;
    dst = kGoldenDestination;
  } else if (!a.topology.empty()) {
    t = load_topology(a.topology);
    const auto clients = t.clients();
    if (clients.size() < 2) throw UsageError("topology file needs at least two clients");
    src = clients[0];
    dst = clients[1];
  } else {
    TopologyConfig cfg;
    cfg.backbone_count = a.nodes;
    cfg.range = a.range;
    cfg.link_prob = a.p;
    cfg.seed = a.seed;
    cfg.fallback_attach = a.fallback_attach;
    cfg.validate();
    t = generate(cfg);
    src = generated_source(cfg);
    dst = generated_destination(cfg);
  }

  Rng rng(mix_keys(a.seed, {0x5e55}));
  const double cos_theta = 2 * uniform01(rng) - 1;
  const double phi = 2 * M_PI * uniform01(rng);
  const StateVector input =
      new_qubit(Complex(std::sqrt((1 + cos_theta) / 2)), std::polar(std::sqrt((1 - cos_theta) / 2), phi));
  const SessionReport r = run_session(t, src, dst, input, sim, rng);

  if (!a.dump.empty()) write_text_file(a.dump, topology_to_json(t));
  if (!a.trace.empty()) emit(format_trace(r, t), a.trace, out);

  out << "route: " << (r.route ? format_route(*r.route, t) : "none") << '\n';
  out << "hops: " << r.hops << '\n';
  if (r.route) out << "reply path: " << format_route(r.qrf_path, t) << '\n';
  out << "mode: " << to_string(r.mode) << '\n';
  out << "packets: qrr=" << r.packets.qrr << " qrf=" << r.packets.qrf << " result=" << r.packets.result
      << " extra_result=" << r.packets.extra_result << " total=" << r.packets.total() << '\n';
  out << "completion_time: " << r.completion_time << '\n';
  out << "success: " << (r.success ? "yes" : "no") << '\n';
  if (r.route) out << "attempt_probability: " << format_real(r.attempt_prob) << '\n';
  if (r.fidelity) out << "fidelity: " << format_real(*r.fidelity) << '\n';
  return 0;
}

// ---- sweep / packets -------------------------------------------------------

struct SweepArgs {
  std::string nodes = "10:200:10";
  double range = 200;
  std::vector<double> p{0.3, 0.5, 0.8};
  std::vector<double> n{0.5, 0.7, 0.9, 1.0};
  int runs = 100;
  std::uint64_t seed = 7;
  std::string out;
  unsigned threads = 1;
  std::string success_mode = "analytic";
  bool fallback_attach = false;
  double area = 1000;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  SweepConfig cfg;
  cfg.node_counts = parse_counts(a.nodes);
  cfg.range = a.range;
  cfg.p_values = a.p;
  cfg.n_values = a.n;
  cfg.runs = a.runs;
  cfg.master_seed = a.seed;
  cfg.threads = a.threads;
  cfg.success_mode = a.success_mode == "sampled" ? SuccessMode::Sampled : SuccessMode::Analytic;
  cfg.fallback_attach = a.fallback_attach;
  cfg.area_side = a.area;
  cfg.validate();
  if (!a.out.empty() && a.out != "-") {
    // Fail on an unwritable path before spending time on the sweep.
    std::ofstream probe(a.out, std::ios::app);
    if (!probe) throw IoError("cannot open " + a.out + " for writing");
  }

  const auto rows = sweep(cfg);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  emit(csv.str(), a.out, out);
  if (!a.out.empty() && a.out != "-") out << "wrote " << rows.size() << " rows to " << a.out << '\n';
  return 0;
}

struct PacketArgs {
  int min_hops = 1;
  int max_hops = 6;
  std::string out;
};

int cmd_packets(const PacketArgs& a, std::ostream& out) {
  std::ostringstream csv;
  write_packets_csv(csv, packet_comparison(a.min_hops, a.max_hops));
  emit(csv.str(), a.out, out);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wireless quantum mesh simulator: GHZ-chain teleportation and QRR/QRF routing"};
  app.name("qmesh");
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file mirroring the flags; command-line flags win");

  ProbArgs prob;
  auto* p = app.add_subcommand("prob", "Closed-form teleportation success probability");
  p->add_option("--n", prob.n, "Degrees of entanglement")->delimiter(',')->capture_default_str();
  p->add_option("--hops", prob.hops, "Single hop count");
  p->add_option("--max-hops", prob.max_hops, "Table for hop counts 1..N (default 150)");
  p->add_option("--out", prob.out, "Write output to a file");
  p->add_flag("--oracle", prob.oracle, "Cross-check hop counts up to 6 against exhaustive enumeration");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run the consistency suites");
  v->add_option("--max-hops", verify.max_hops, "Largest hop count to enumerate (<= 6)")->capture_default_str();
  v->add_option("--seed", verify.seed, "Seed for random inputs")->capture_default_str();
#ifdef QMESH_ENABLE_FAULT_INJECTION
  v->add_option("--inject-fault", verify.fault, "Corrupt one correction-table entry")->group("");
#endif

  RouteArgs route;
  auto* r = app.add_subcommand("route", "Run one routing and teleportation session");
  r->add_option("--nodes", route.nodes, "Backbone node count")->capture_default_str();
  r->add_option("--range", route.range, "Transmission range in meters")->capture_default_str();
  r->add_option("--p", route.p, "Link establishment probability")->capture_default_str();
  r->add_option("--n", route.n, "Degree of entanglement")->capture_default_str();
  r->add_option("--seed", route.seed, "Master seed")->capture_default_str();
  r->add_option("--mode", route.mode, "Measurement delivery")
      ->check(CLI::IsMember({"piggyback", "separate"}))
      ->capture_default_str();
  r->add_option("--quantum", route.quantum, "Quantum model")->check(CLI::IsMember({"tracked", "exact"}))->capture_default_str();
  r->add_option("--trace", route.trace, "Write the event trace ('-' for stdout)");
  r->add_option("--dump", route.dump, "Write the topology as JSON");
  r->add_option("--topology", route.topology, "Load a topology JSON instead of generating one");
  r->add_flag("--golden-example", route.golden, "Use the eight-node reference mesh");
  r->add_option("--window", route.window, "Ticks the selecting node waits for more requests")->capture_default_str();
  r->add_flag("--fallback-attach", route.fallback_attach, "Attach clients to the next-nearest node after a failed link");

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "Monte Carlo success probability over random meshes (CSV)");
  s->add_option("--nodes", sw.nodes, "Node counts as start:stop:step or a list")->capture_default_str();
  s->add_option("--range", sw.range, "Transmission range in meters")->capture_default_str();
  s->add_option("--p", sw.p, "Link probabilities")->delimiter(',')->capture_default_str();
  s->add_option("--n", sw.n, "Degrees of entanglement")->delimiter(',')->capture_default_str();
  s->add_option("--runs", sw.runs, "Runs per point")->capture_default_str();
  s->add_option("--seed", sw.seed, "Master seed")->capture_default_str();
  s->add_option("--out", sw.out, "CSV path (stdout when omitted)");
  s->add_option("--threads", sw.threads, "Worker threads, 0 = all cores")->capture_default_str();
  s->add_option("--success-mode", sw.success_mode, "analytic or sampled")
      ->check(CLI::IsMember({"analytic", "sampled"}))
      ->capture_default_str();
  s->add_flag("--fallback-attach", sw.fallback_attach, "Attach clients to the next-nearest node after a failed link");
  s->add_option("--area", sw.area, "Side of the square area in meters")->capture_default_str();

  PacketArgs pk;
  auto* k = app.add_subcommand("packets", "Packet counts of both result modes on straight lines (CSV)");
  k->add_option("--min-hops", pk.min_hops)->capture_default_str();
  k->add_option("--max-hops", pk.max_hops)->capture_default_str();
  k->add_option("--out", pk.out, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (p->parsed()) return cmd_prob(prob, out);
    if (v->parsed()) return cmd_verify(verify, out);
    if (r->parsed()) return cmd_route(route, out);
    if (s->parsed()) return cmd_sweep(sw, out);
    if (k->parsed()) return cmd_packets(pk, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return 1;
  } catch (const std::invalid_argument& e) {  // ParameterError, NormalizationError
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace qmesh::cli
