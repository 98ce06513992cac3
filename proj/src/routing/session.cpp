#include "qmesh/routing/session.hpp"

#include <map>
#include <memory>
#include <queue>
#include <sstream>

#include "qmesh/core/errors.hpp"

namespace qmesh {

std::string to_string(SessionMode m) { return m == SessionMode::Piggyback ? "piggyback" : "separate"; }
std::string to_string(QuantumMode m) { return m == QuantumMode::Tracked ? "tracked" : "exact"; }

std::string format_route(const Route& route, const Topology& t, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < route.size(); ++i) {
    if (i) out += sep;
    out += t.name_of(route[i]);
  }
  return out;
}

std::string format_log(const MeasurementLog& log) {
  if (log.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (i) out += ',';
    out += to_string(log[i].bell);
    out += '/';
    out += std::to_string(bit_value(log[i].had));
  }
  return out;
}

namespace {

struct Event {
  enum Kind { Deliver, Select } kind = Deliver;
  long time = 0;
  std::uint64_t seq = 0;
  NodeId from{};
  NodeId to{};
  Packet packet;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return std::pair{a.time, a.seq} > std::pair{b.time, b.seq};
  }
};

class Session {
 public:
  Session(const Topology& t, NodeId src, NodeId dst, const StateVector& input, const SimConfig& cfg, Rng& rng)
      : t_(t), src_(src), dst_(dst), input_(input), cfg_(cfg), rng_(rng) {
    nodes_.reserve(t.size());
    for (const Node& n : t.nodes()) nodes_.emplace_back(n);
    report_.mode = cfg.mode;
  }

  SessionReport run() {
    if (auto edge = t_.attachment(src_)) {
      QrrPacket qrr{src_, dst_, cfg_.request_id, src_, 0, {src_}};
      nodes_[index_of(src_)].originate(qrr);
      transmit(0, src_, *edge, qrr);
    }
    while (!queue_.empty()) {
      Event e = queue_.top();
      queue_.pop();
      now_ = e.time;
      if (e.kind == Event::Select) {
        select(e.to);
      } else {
        deliver(e);
      }
    }
    if (!recovered_) report_.completion_time = now_;
    return std::move(report_);
  }

 private:
  long delay(NodeId from, NodeId to) const {
    if (!cfg_.link_delay) return 1;
    const long d = cfg_.link_delay(from, to);
    if (d < 1) throw ParameterError("link delays must be at least one tick");
    return d;
  }

  void trace(NodeId from, std::optional<NodeId> to, std::string type, std::string summary) {
    if (cfg_.record_trace) report_.trace.push_back({now_, std::move(type), from, to, std::move(summary)});
  }

  std::string summarize(const Packet& p) const {
    std::ostringstream s;
    if (const auto* q = std::get_if<QrrPacket>(&p)) {
      s << "src=" << t_.name_of(q->source) << " dst=" << t_.name_of(q->dest) << " id=" << q->request_id
        << " cost=" << q->cost << " record=" << format_route(q->route_record, t_);
    } else if (const auto* f = std::get_if<QrfPacket>(&p)) {
      s << "route=" << format_route(f->route, t_) << " log=" << format_log(f->log);
    } else if (const auto* r = std::get_if<ResultPacket>(&p)) {
      s << "log=" << format_log(r->log);
    } else if (const auto* x = std::get_if<ExtraResultPacket>(&p)) {
      s << "origin=" << t_.name_of(x->origin) << " m=" << format_log({x->measurement});
    }
    return s.str();
  }

  void schedule(Event e) {
    e.seq = seq_++;
    queue_.push(std::move(e));
  }

  void transmit(long now, NodeId from, NodeId to, Packet p) {
    now_ = now;
    report_.packets.add(type_of(p));
    trace(from, to, to_string(type_of(p)), summarize(p));
    schedule({Event::Deliver, now + delay(from, to), 0, from, to, std::move(p)});
  }

  void broadcast(NodeId from, const Packet& p) {
    report_.packets.add(type_of(p));
    trace(from, std::nullopt, to_string(type_of(p)), summarize(p));
    for (NodeId v : t_.neighbors(from)) schedule({Event::Deliver, now_ + delay(from, v), 0, from, v, p});
  }

  void deliver(const Event& e) {
    NodeState& node = nodes_[index_of(e.to)];
    std::visit(
        [&](const auto& pkt) {
          using T = std::decay_t<decltype(pkt)>;
          if constexpr (std::is_same_v<T, QrrPacket>) {
            const QrrDecision d = node.handle_qrr(pkt, now_, e.seq);
            if (d.kind == QrrDecision::Rebroadcast) broadcast(e.to, d.forward);
            if (d.kind == QrrDecision::Buffer && d.first_candidate && !selected_) {
              schedule({Event::Select, now_ + cfg_.selection_window, 0, e.to, e.to, {}});
            }
          } else if constexpr (std::is_same_v<T, QrfPacket>) {
            report_.qrf_path.push_back(e.to);
            act(e.to, node.process_qrf(pkt, e.from, *channel_, cfg_.mode, rng_));
          } else if constexpr (std::is_same_v<T, ResultPacket>) {
            if (e.to == dst_) {
              result_ = pkt;
              try_recover();
            } else {
              transmit(now_, e.to, next_hop(pkt.route, e.to), pkt);
            }
          } else {
            if (e.to == dst_) {
              extras_[pkt.origin] = pkt.measurement;
              try_recover();
            } else {
              transmit(now_, e.to, next_hop(pkt.route, e.to), pkt);
            }
          }
        },
        e.packet);
  }

  static NodeId next_hop(const Route& route, NodeId at) {
    for (std::size_t i = 0; i + 1 < route.size(); ++i)
      if (route[i] == at) return route[i + 1];
    throw ProtocolError("forwarding node is not on the route");
  }

  void act(NodeId self, QrfAction a) {
    if (a.extra) transmit(now_, self, a.extra->first, std::move(a.extra->second));
    if (a.reply) transmit(now_, self, a.reply->first, std::move(a.reply->second));
    if (a.result) transmit(now_, self, a.result->first, std::move(a.result->second));
  }

  void select(NodeId selector) {
    if (selected_) return;
    const auto route = nodes_[index_of(selector)].select_route();
    if (!route) return;
    selected_ = true;
    trace(selector, std::nullopt, "SELECT",
          "route=" + format_route(*route, t_) + " candidates=" + std::to_string(nodes_[index_of(selector)].pending().size()));
    report_.route = route;
    report_.hops = static_cast<int>(route->size()) - 1;
    if (cfg_.quantum == QuantumMode::Exact) {
      channel_ = make_exact_channel(cfg_.n, input_, cfg_.table);
    } else {
      channel_ = make_tracked_channel(cfg_.n, std::norm(input_.amplitude(0)));
    }

    QrfPacket qrf{*route, cfg_.request_id, {}};
    report_.qrf_path.push_back(selector);
    if (selector == dst_) {
      transmit(now_, selector, (*route)[route->size() - 2], std::move(qrf));
    } else {
      act(selector, nodes_[index_of(selector)].process_qrf(qrf, dst_, *channel_, cfg_.mode, rng_));
    }
  }

  void try_recover() {
    const auto swaps = static_cast<std::size_t>(report_.hops - 1);
    if (!result_) return;
    if (cfg_.mode == SessionMode::Separate && extras_.size() < swaps) return;

    MeasurementLog log;
    if (cfg_.mode == SessionMode::Piggyback) {
      log = result_->log;
    } else {
      const Route& route = *report_.route;
      for (std::size_t i = route.size() - 2; i >= 1; --i) log.push_back(extras_.at(route[i]));
      log.push_back(result_->log.back());
    }
    if (log.size() != static_cast<std::size_t>(report_.hops)) throw ProtocolError("measurement log length differs from hop count");
    log.back().had = channel_->measure_destination(rng_);

    const Recovery rec = channel_->recover(log, rng_);
    report_.success = rec.success;
    report_.attempt_prob = rec.attempt_prob;
    report_.log = log;
    if (rec.success && rec.output) report_.fidelity = fidelity(*rec.output, input_);
    report_.completion_time = now_;
    recovered_ = true;
    trace(dst_, std::nullopt, "RECOVER", std::string("success=") + (rec.success ? "1" : "0") + " log=" + format_log(log));
  }

  const Topology& t_;
  NodeId src_;
  NodeId dst_;
  const StateVector& input_;
  const SimConfig& cfg_;
  Rng& rng_;

  std::vector<NodeState> nodes_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  long now_ = 0;

  bool selected_ = false;
  bool recovered_ = false;
  std::unique_ptr<ChannelModel> channel_;
  std::optional<ResultPacket> result_;
  std::map<NodeId, HopMeasurement> extras_;
  SessionReport report_;
};

}  // namespace

SessionReport run_session(const Topology& t, NodeId src, NodeId dst, const StateVector& input, const SimConfig& cfg,
                          Rng& rng) {
  if (t.node(src).role != Role::Client || t.node(dst).role != Role::Client) {
    throw ParameterError("sessions run between client nodes");
  }
  if (src == dst) throw ParameterError("source and destination must differ");
  if (input.num_qubits() != 1) throw ParameterError("input must be a single qubit");
  if (cfg.selection_window < 0) throw ParameterError("selection window must be non-negative");
  return Session(t, src, dst, input, cfg, rng).run();
}

std::string format_trace(const SessionReport& r, const Topology& t) {
  std::string out;
  for (const TraceEvent& e : r.trace) {
    out += std::to_string(e.tick) + '\t' + e.type + '\t' + t.name_of(e.from) + '\t';
    if (e.to) {
      out += t.name_of(*e.to);
    } else {
      out += e.type == "SELECT" || e.type == "RECOVER" ? "-" : "*";
    }
    out += '\t' + e.summary + '\n';
  }
  return out;
}

}  // namespace qmesh
