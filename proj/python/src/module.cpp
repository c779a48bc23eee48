// Python bindings for the simulator core.

#include "dsa/audit.hpp"
#include "dsa/bard.hpp"
#include "dsa/config.hpp"
#include "dsa/ddsaar.hpp"
#include "dsa/engine.hpp"
#include "dsa/errors.hpp"
#include "dsa/radio.hpp"
#include "dsa/sweep.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace dsa;

namespace {

BandId band_arg(const std::string &name) {
  const auto b = parse_band(name);
  if (!b)
    throw ConfigError("", "unknown band " + name);
  return *b;
}

py::dict band_dict(const BandProfile &b) {
  py::dict d;
  d["id"] = std::string(band_name(b.id));
  d["carrier_freq_hz"] = b.carrier_freq_hz;
  d["channel_bandwidth_hz"] = b.channel_bandwidth_hz;
  d["transmit_power_w"] = b.transmit_power_w;
  d["num_channels"] = b.num_channels;
  d["range_m"] = b.range_m;
  d["bit_rate_bps"] = b.bit_rate_bps;
  return d;
}

py::dict metrics_dict(const RunMetrics &m) {
  py::dict d;
  d["generated_messages"] = m.generated_messages;
  d["delivered_messages"] = m.delivered_messages;
  d["mdr"] = m.mdr;
  d["mean_latency_s"] = m.mean_latency_s;
  d["generated_packets"] = m.generated_packets;
  d["delivered_packets"] = m.delivered_packets;
  d["dropped_ttl"] = m.dropped_ttl;
  d["dropped_full"] = m.dropped_full;
  d["in_flight"] = m.in_flight;
  py::dict usage;
  for (BandId b : kAllBands)
    usage[py::str(std::string(band_name(b)))] = m.band_usage[band_index(b)];
  d["band_usage"] = usage;
  return d;
}

RunConfig config_arg(const std::string &json_text) {
  return json_text.empty() ? RunConfig{} : parse_config(json_text);
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-band cognitive radio network simulator";
  m.attr("__version__") = kCodeVersion;

  // Translators run newest first, so the base class goes first.
  py::register_exception<Error>(m, "SimError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("default_bands", [] {
    py::list out;
    for (const auto &b : default_band_catalog())
      out.append(band_dict(b));
    return out;
  }, "Default band catalog with derived range and bit rate");

  m.def("compute_range", [](const std::string &band) {
    const RadioParams radio;
    return compute_range(find_band(default_band_catalog(radio), band_arg(band)), radio);
  }, py::arg("band"), "Transmission range in metres for a default band");

  m.def("compute_bit_rate", [](const std::string &band) {
    const RadioParams radio;
    return compute_bit_rate(find_band(default_band_catalog(radio), band_arg(band)), radio);
  }, py::arg("band"), "Shannon bit rate in bit/s for a default band");

  m.def("compute_reward",
        [](int next_queue_len, double packet_size_bits, double min_rate_bps,
           double band_rate_bps, double dist_to_dest_m, double next_dist_to_dest_m,
           bool delivered, bool channel_unavailable) {
          RewardContext c;
          c.next_queue_len = next_queue_len;
          c.packet_size_bits = packet_size_bits;
          c.min_rate_bps = min_rate_bps;
          c.band_rate_bps = band_rate_bps;
          c.dist_to_dest_m = dist_to_dest_m;
          c.next_dist_to_dest_m = next_dist_to_dest_m;
          c.delivered_to_destination = delivered;
          c.channel_unavailable = channel_unavailable;
          return compute_reward(c, RlParams{});
        },
        py::arg("next_queue_len"), py::arg("packet_size_bits"), py::arg("min_rate_bps"),
        py::arg("band_rate_bps"), py::arg("dist_to_dest_m"), py::arg("next_dist_to_dest_m"),
        py::arg("delivered"), py::arg("channel_unavailable"),
        "Per-decision reward with default RL parameters");

  m.def("q_update",
        [](double q, double reward, std::optional<double> max_next, double alpha, double gamma) {
          RlParams p;
          p.alpha = alpha;
          p.gamma = gamma;
          QTable t(2, 1);
          t.at(0, 0) = q;
          if (max_next)
            t.at(1, 0) = *max_next;
          return q_update(t, 0, 0, reward, max_next ? std::optional<int>(1) : std::nullopt, p);
        },
        py::arg("q"), py::arg("reward"), py::arg("max_next") = py::none(),
        py::arg("alpha") = RlParams{}.alpha, py::arg("gamma") = RlParams{}.gamma,
        "One Q-learning step; max_next=None marks a terminal transition");

  m.def("ldc_route",
        [](const std::vector<std::pair<double, double>> &xy, int source, int destination,
           double packet_size_bits) {
          std::vector<Position> pos;
          for (const auto &[x, y] : xy)
            pos.push_back({x, y});
          const auto g = build_stb_static(pos, default_band_catalog(), RadioParams{},
                                          packet_size_bits);
          const auto route = ldc_route(source, destination, g);
          std::vector<std::pair<int, std::string>> hops;
          for (const auto &a : route)
            hops.emplace_back(a.next_node, std::string(band_name(a.band)));
          return py::make_tuple(hops, route.empty() ? 0.0 : route_cost(g, source, route));
        },
        py::arg("positions"), py::arg("source"), py::arg("destination"),
        py::arg("packet_size_bits") = 5e6,
        "Least-delay route over the static multigraph: ([(node, band), ...], cost_s)");

  m.def("config_json", [](const std::string &json_text) {
    return config_to_json(config_arg(json_text)).dump();
  }, py::arg("config") = "", "Validated, fully expanded config as JSON");

  m.def("run",
        [](const std::string &json_text, std::optional<std::uint64_t> seed, bool audit) {
          RunConfig cfg = config_arg(json_text);
          if (seed)
            cfg.engine.seed = *seed;
          cfg.validate();
          RunResult r;
          {
            py::gil_scoped_release release;
            r = dsa::run(cfg);
          }
          py::dict out = metrics_dict(r.metrics);
          out["config_hash"] = config_hash(cfg);
          out["seed"] = cfg.engine.seed;
          out["num_events"] = r.log.size();
          if (audit) {
            const auto report = audit_all(r.log, r.scenario);
            out["audit_checked"] = report.checked;
            out["audit_violations"] = report.violations;
          }
          return out;
        },
        py::arg("config") = "", py::arg("seed") = py::none(), py::arg("audit") = false,
        "Run one simulation from a JSON config string and return its metrics");

  m.def("events_csv", [](const std::string &json_text, std::optional<std::uint64_t> seed) {
    RunConfig cfg = config_arg(json_text);
    if (seed)
      cfg.engine.seed = *seed;
    cfg.validate();
    std::ostringstream os;
    dsa::run(cfg).log.write_csv(os);
    return os.str();
  }, py::arg("config") = "", py::arg("seed") = py::none(), "Event log of one run as CSV text");
}
