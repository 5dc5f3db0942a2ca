#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "prdt/bench/bench.hpp"
#include "prdt/kv/client.hpp"
#include "prdt/kv/server.hpp"
#include "prdt/protocols/paxos.hpp"
#include "prdt/protocols/voting.hpp"
#include "prdt/sim/registry.hpp"

namespace py = pybind11;
using namespace prdt;

namespace {

ReplicaContext context(const std::string& replica, const std::vector<std::string>& members) {
  Membership m;
  for (const auto& id : members) m.members.insert(ReplicaId{id});
  m.require_nonempty();
  return {ReplicaId{replica}, std::move(m)};
}

// States cross into Python as immutable values; actions return deltas.
template <class P>
void bind_state(py::module_& m, const char* name) {
  py::class_<P>(m, name)
      .def(py::init<>())
      .def_static("from_json", [](const std::string& text) { return nlohmann::json::parse(text).get<P>(); })
      .def("to_json", [](const P& p) { return nlohmann::json(p).dump(); })
      .def("merge", [](const P& a, const P& b) { return merge(a, b); })
      .def("is_bottom", [](const P& p) { return is_bottom(p); })
      .def("propose", [](const P& p, const std::string& value, const std::string& replica, const std::vector<std::string>& members) {
        return Consensus<P>::propose(p, value, context(replica, members));
      }, py::arg("value"), py::arg("replica"), py::arg("members"))
      .def("upkeep", [](const P& p, const std::string& replica, const std::vector<std::string>& members) {
        return Consensus<P>::upkeep(p, context(replica, members));
      }, py::arg("replica"), py::arg("members"))
      .def("decision", [](const P& p, const std::vector<std::string>& members) {
        return nlohmann::json(Consensus<P>::decision(p, context(members.at(0), members).membership)).dump();
      }, py::arg("members"))
      .def("__eq__", [](const P& a, const P& b) { return a == b; })
      .def("__repr__", [name](const P& p) { return std::string(name) + "(" + nlohmann::json(p).dump() + ")"; });
}

std::string report_json(const sim::SimReport& r) {
  nlohmann::json j{{"protocol", r.protocol}, {"runs", r.runs}, {"decided_runs", r.decided_runs}, {"restarts", r.restarts},
                   {"passed", r.passed()}, {"last_trace", r.last_trace}};
  j["violations"] = nlohmann::json::array();
  for (const auto& v : r.violations) j["violations"].push_back({{"kind", v.kind}, {"detail", v.detail}});
  j["failure"] = r.failure ? nlohmann::json(*r.failure) : nlohmann::json(nullptr);
  return j.dump();
}

std::vector<bench::BenchRecord> records_of(const std::vector<std::tuple<std::uint64_t, std::string, std::uint64_t, std::uint64_t>>& rows) {
  std::vector<bench::BenchRecord> out;
  for (const auto& [i, kind, latency, ts] : rows) out.push_back({i, kind, latency, ts});
  return out;
}

py::dict summary_dict(const bench::Summary& s) {
  py::dict d;
  d["records"] = s.records;
  d["used"] = s.used;
  d["mean_ops_per_s"] = s.mean_ops_per_s;
  d["median_ops_per_s"] = s.median_ops_per_s;
  d["p50_us"] = s.p50_us;
  d["p90_us"] = s.p90_us;
  d["p99_us"] = s.p99_us;
  d["max_us"] = s.max_us;
  return d;
}

}  // namespace

PYBIND11_MODULE(_prdt, m) {
  py::register_exception<std::invalid_argument>(m, "InvalidArgument", PyExc_ValueError);

  bind_state<Voting<std::string>>(m, "Voting");
  bind_state<Paxos<std::string>>(m, "Paxos");

  m.def("protocols", &sim::protocol_names);
  m.def("_simulate", [](const std::string& protocol, std::size_t replicas, std::size_t runs, std::size_t steps, std::uint64_t seed,
                        double propose_probability, std::vector<std::string> values, std::size_t stall_threshold,
                        std::size_t epilogue_rounds) {
    sim::SimConfig cfg;
    cfg.replica_count = replicas;
    cfg.runs = runs;
    cfg.steps_per_run = steps;
    cfg.seed = seed;
    cfg.propose_probability = propose_probability;
    cfg.value_pool = std::move(values);
    cfg.stall_threshold = stall_threshold;
    cfg.epilogue_rounds = epilogue_rounds;
    py::gil_scoped_release release;
    return report_json(sim::run_protocol(protocol, cfg));
  });
  m.def("_replay", [](const std::string& trace) {
    return report_json(sim::replay_protocol(nlohmann::json::parse(trace).get<sim::RunTrace>()));
  });

  m.def("percentile", &bench::percentile, py::arg("sample"), py::arg("p"));
  m.def("summarize", [](const std::vector<std::tuple<std::uint64_t, std::string, std::uint64_t, std::uint64_t>>& rows, double warmup) {
    return summary_dict(bench::summarize(bench::split_runs(records_of(rows)), warmup));
  }, py::arg("records"), py::arg("warmup") = 0.1);
  m.def("write_csv", [](const std::vector<std::tuple<std::uint64_t, std::string, std::uint64_t, std::uint64_t>>& rows,
                        std::optional<std::string> incomplete) {
    std::ostringstream out;
    bench::write_csv(out, records_of(rows), incomplete);
    return out.str();
  }, py::arg("records"), py::arg("incomplete") = std::nullopt);
  m.def("read_csv", [](const std::string& text) {
    std::istringstream in(text);
    auto run = bench::read_csv(in);
    std::vector<std::tuple<std::uint64_t, std::string, std::uint64_t, std::uint64_t>> rows;
    for (const auto& r : run.records) rows.emplace_back(r.op_index, r.kind, r.latency_us, r.timestamp_us);
    return py::make_tuple(rows, run.incomplete);
  });

  py::class_<kv::KvServer>(m, "Server")
      .def(py::init([](const std::string& id, const std::string& host, std::uint16_t port, std::uint32_t election_timeout_ms) {
             kv::ServerConfig cfg;
             cfg.id = ReplicaId{id};
             cfg.listen = {host, port};
             cfg.options.election_timeout = std::chrono::milliseconds(election_timeout_ms);
             return std::make_unique<kv::KvServer>(cfg);
           }),
           py::arg("id"), py::arg("host") = "127.0.0.1", py::arg("port") = 0, py::arg("election_timeout_ms") = 500)
      .def_property_readonly("port", &kv::KvServer::port)
      .def("set_peer", [](kv::KvServer& s, const std::string& id, const std::string& host, std::uint16_t port) {
        s.set_peer(ReplicaId{id}, {host, port});
      })
      .def("start", &kv::KvServer::start)
      .def("stop", &kv::KvServer::stop, py::call_guard<py::gil_scoped_release>())
      .def("log_size", [](kv::KvServer& s) { return s.log().size(); }, py::call_guard<py::gil_scoped_release>());

  py::class_<kv::KvClient>(m, "Client")
      .def(py::init<const std::string&, std::uint16_t>(), py::arg("host"), py::arg("port"))
      .def("put", [](kv::KvClient& c, const std::string& k, const std::string& v) {
        kv::ClientResponse r;
        {
          py::gil_scoped_release release;
          r = c.put(k, v);
        }
        return py::make_tuple(r.status, r.value);
      })
      .def("get", [](kv::KvClient& c, const std::string& k) {
        kv::ClientResponse r;
        {
          py::gil_scoped_release release;
          r = c.get(k);
        }
        return py::make_tuple(r.status, r.value);
      });
}
