#include "qsim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qsim {

using nlohmann::json;

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
    case NodeKind::Host:
        return "host";
    case NodeKind::Switch:
        return "switch";
    case NodeKind::Router:
        return "router";
    }
    return "host";
}

std::optional<NodeKind> node_kind_from_name(const std::string& name) {
    if (name == "host") {
        return NodeKind::Host;
    }
    if (name == "switch") {
        return NodeKind::Switch;
    }
    if (name == "router") {
        return NodeKind::Router;
    }
    return std::nullopt;
}

std::vector<std::string> scenario_scheduler_choices(int scenario) {
    switch (scenario) {
    case 1:
    case 2:
        return {"fifo", "pq", "wfq", "pwfq_rr"};
    case 3:
        return {"fifo", "pq", "cq", "cq_llq", "wfq", "wfq_llq", "pwfq_rr"};
    default:
        throw std::invalid_argument("unknown scenario id " + std::to_string(scenario));
    }
}

namespace {

const std::set<std::string> kAllSchedulerKinds = {"fifo",    "pq",       "cq", "cq_llq",
                                                  "wfq",     "wfq_llq",  "pwfq_rr"};

} // namespace

void ScenarioConfig::validate() const {
    std::set<std::string> ids;
    std::set<std::string> hosts;
    for (const auto& node : nodes) {
        if (node.id.empty() || !ids.insert(node.id).second) {
            throw std::invalid_argument("ScenarioConfig: node ids must be unique and non-empty");
        }
        if (node.kind == NodeKind::Host) {
            hosts.insert(node.id);
        }
    }
    if (links.empty()) {
        throw std::invalid_argument("ScenarioConfig: at least one link required");
    }
    for (const auto& link : links) {
        if (!ids.count(link.a) || !ids.count(link.b) || link.a == link.b) {
            throw std::invalid_argument("ScenarioConfig: link endpoints must name distinct nodes");
        }
        if (link.rate_bps == 0) {
            throw std::invalid_argument("ScenarioConfig: link rate must be positive");
        }
        if (link.propagation_delay_s < 0.0) {
            throw std::invalid_argument("ScenarioConfig: negative propagation delay");
        }
    }
    std::set<std::string> source_names;
    for (const auto& src : sources) {
        src.validate();
        if (!source_names.insert(src.name).second) {
            throw std::invalid_argument("ScenarioConfig: source names must be unique");
        }
        if (!hosts.count(src.from) || !hosts.count(src.to)) {
            throw std::invalid_argument("ScenarioConfig: sources must run host to host");
        }
    }
    if (!kAllSchedulerKinds.count(scheduler.kind)) {
        throw std::invalid_argument("ScenarioConfig: unknown scheduler kind " + scheduler.kind);
    }
    if (scheduler.capacity_pkts == 0) {
        throw std::invalid_argument("ScenarioConfig: scheduler capacity must be positive");
    }
    if (scheduler.weights.size() != scheduler.queues.size() ||
        scheduler.quanta_bytes.size() != scheduler.queues.size()) {
        throw std::invalid_argument(
            "ScenarioConfig: per-queue weights/quanta must match the queue list");
    }
    if (run.duration_s <= 0.0 || run.bucket_s <= 0.0) {
        throw std::invalid_argument("ScenarioConfig: duration and bucket must be positive");
    }
    if (run.phase_jitter_s < 0.0) {
        throw std::invalid_argument("ScenarioConfig: negative phase jitter");
    }
    if (rsvp.enabled) {
        for (const auto& r : rsvp.reservations) {
            if (r.rate_bps <= 0.0) {
                throw std::invalid_argument("ScenarioConfig: reservation rate must be positive");
            }
            bool found = false;
            for (const auto& src : sources) {
                found = found || src.name == r.source_name;
            }
            if (!found) {
                throw std::invalid_argument("ScenarioConfig: reservation names unknown source " +
                                            r.source_name);
            }
        }
    }
}

namespace {

SourceSpec voice_source(const std::string& name, const std::string& from,
                        const std::string& to, double start, double stop) {
    SourceSpec s;
    s.name = name;
    s.kind = SourceKind::VoiceCbr;
    s.cls = TrafficClassKind::Voice;
    s.from = from;
    s.to = to;
    s.start_s = start;
    s.stop_s = stop;
    s.rate_bps = 64000;
    s.packet_bytes = 200;
    return s;
}

SourceSpec video_source(const std::string& name, const std::string& from,
                        const std::string& to, double start, double stop,
                        std::uint32_t frame_bytes) {
    SourceSpec s;
    s.name = name;
    s.kind = SourceKind::VideoFrames;
    s.cls = TrafficClassKind::Video;
    s.from = from;
    s.to = to;
    s.start_s = start;
    s.stop_s = stop;
    s.fps = 10.0;
    s.frame_bytes = frame_bytes;
    s.mtu_bytes = 1500;
    return s;
}

SourceSpec data_source(const std::string& name, const std::string& from,
                       const std::string& to, double start, double stop,
                       std::uint64_t peak_bps, std::uint32_t packet_bytes,
                       double on_mean, double off_mean) {
    SourceSpec s;
    s.name = name;
    s.kind = SourceKind::DataOnOff;
    s.cls = TrafficClassKind::Data;
    s.from = from;
    s.to = to;
    s.start_s = start;
    s.stop_s = stop;
    s.rate_bps = peak_bps;
    s.packet_bytes = packet_bytes;
    s.on_mean_s = on_mean;
    s.off_mean_s = off_mean;
    return s;
}

void add_dumbbell(ScenarioConfig& cfg, std::uint64_t bottleneck_bps,
                  const std::vector<std::string>& servers,
                  const std::vector<std::string>& clients, bool with_switches) {
    for (const auto& id : servers) {
        cfg.nodes.push_back({id, NodeKind::Host});
    }
    for (const auto& id : clients) {
        cfg.nodes.push_back({id, NodeKind::Host});
    }
    cfg.nodes.push_back({"r1", NodeKind::Router});
    cfg.nodes.push_back({"r2", NodeKind::Router});
    const std::uint64_t access = 100'000'000;
    if (with_switches) {
        cfg.nodes.push_back({"sw_s", NodeKind::Switch});
        cfg.nodes.push_back({"sw_c", NodeKind::Switch});
        for (const auto& id : servers) {
            cfg.links.push_back({id, "sw_s", access, 0.001});
        }
        cfg.links.push_back({"sw_s", "r1", access, 0.001});
        cfg.links.push_back({"r2", "sw_c", access, 0.001});
        for (const auto& id : clients) {
            cfg.links.push_back({"sw_c", id, access, 0.001});
        }
    } else {
        for (const auto& id : servers) {
            cfg.links.push_back({id, "r1", access, 0.001});
        }
        for (const auto& id : clients) {
            cfg.links.push_back({"r2", id, access, 0.001});
        }
    }
    cfg.links.push_back({"r1", "r2", bottleneck_bps, 0.001});
}

} // namespace

ScenarioConfig build_scenario(int scenario, const ScenarioOverrides& overrides) {
    ScenarioConfig cfg;
    cfg.run.duration_s = overrides.duration_s.value_or(120.0);
    cfg.run.seed = overrides.seed.value_or(1);
    cfg.run.bucket_s = overrides.bucket_s.value_or(1.0);
    const double start = 0.5;
    const double stop = cfg.run.duration_s;

    switch (scenario) {
    case 1: {
        cfg.name = "scenario1";
        add_dumbbell(cfg, 56'000, {"srv_voice", "srv_video", "srv_data"},
                     {"cli_voice", "cli_video", "cli_data"}, false);
        cfg.sources.push_back(voice_source("voice0", "srv_voice", "cli_voice", start, stop));
        cfg.sources.push_back(
            video_source("video0", "srv_video", "cli_video", start, stop, 3750));
        // High-duty small-packet data keeps the shared FIFO queue contended
        // in every seed, which pins the FIFO per-class delivery near its
        // arrival share.
        cfg.sources.push_back(data_source("data0", "srv_data", "cli_data", start, stop,
                                          192'000, 250, 1.0, 0.5));
        cfg.sources.push_back(data_source("data1", "srv_data", "cli_data", start, stop,
                                          192'000, 250, 1.0, 0.5));
        // WFQ weights give voice and video both clearly more than their
        // FIFO share while data is pushed to a sliver.
        cfg.scheduler.weights = {8.0, 11.0, 1.0};
        cfg.scheduler.quanta_bytes = {1500.0, 1500.0, 1500.0};
        cfg.scheduler.pwfq_weights = {3.0, 1.0};
        cfg.scheduler.pwfq_priorities = {{2.0, 1.0}, {1.0}};
        cfg.scheduler.pwfq_classes = {
            {"voice", {0, 0}}, {"video", {0, 1}}, {"data", {1, 0}}};
        break;
    }
    case 2: {
        cfg.name = "scenario2";
        add_dumbbell(cfg, 1'544'000, {"srv_voice", "srv_video", "srv_data"},
                     {"cli_voice", "cli_video", "cli_data"}, false);
        cfg.sources.push_back(voice_source("voice0", "srv_voice", "cli_voice", start, stop));
        for (int i = 0; i < 5; ++i) {
            cfg.sources.push_back(video_source("video" + std::to_string(i), "srv_video",
                                               "cli_video", start, stop, 3750));
        }
        cfg.sources.push_back(data_source("data0", "srv_data", "cli_data", start, stop,
                                          256'000, 250, 1.0, 2.0));
        cfg.scheduler.weights = {4.0, 15.0, 1.0};
        cfg.rsvp.enabled = true;
        cfg.rsvp.reservations.push_back({"voice0", 64000.0, 800});
        cfg.scheduler.pwfq_weights = {3.0, 1.0};
        cfg.scheduler.pwfq_priorities = {{2.0, 1.0}, {1.0}};
        cfg.scheduler.pwfq_classes = {
            {"voice", {0, 0}}, {"video", {0, 1}}, {"data", {1, 0}}};
        break;
    }
    case 3: {
        cfg.name = "scenario3";
        std::vector<std::string> servers;
        std::vector<std::string> clients;
        for (int i = 0; i < 4; ++i) {
            servers.push_back("srv" + std::to_string(i));
            clients.push_back("cli" + std::to_string(i));
        }
        add_dumbbell(cfg, 1'000'000, servers, clients, true);
        for (int i = 0; i < 4; ++i) {
            cfg.sources.push_back(video_source("video" + std::to_string(i), servers[i],
                                               clients[i], start, stop, 2500));
        }
        // Steady competing data load; keeps the shared FIFO saturated while
        // the classful disciplines isolate the video queue.
        cfg.sources.push_back(data_source("data0", "srv0", "cli0", start, stop, 600'000,
                                          1500, 100000.0, 1.0));
        cfg.scheduler.weights = {1.0, 5.0, 1.0};
        cfg.scheduler.quanta_bytes = {500.0, 9000.0, 500.0};
        cfg.scheduler.pwfq_weights = {5.0, 1.0};
        cfg.scheduler.pwfq_priorities = {{1.0, 1.0}, {1.0}};
        cfg.scheduler.pwfq_classes = {
            {"voice", {0, 0}}, {"video", {0, 1}}, {"data", {1, 0}}};
        break;
    }
    default:
        throw std::invalid_argument("unknown scenario id " + std::to_string(scenario));
    }

    if (overrides.rsvp_enabled.has_value()) {
        cfg.rsvp.enabled = *overrides.rsvp_enabled;
    }
    if (overrides.scheduler.has_value()) {
        const auto choices = scenario_scheduler_choices(scenario);
        bool ok = false;
        for (const auto& c : choices) {
            ok = ok || c == *overrides.scheduler;
        }
        if (!ok) {
            throw std::invalid_argument("scheduler " + *overrides.scheduler +
                                        " not available in scenario " +
                                        std::to_string(scenario));
        }
        cfg.scheduler.kind = *overrides.scheduler;
    }
    cfg.validate();
    return cfg;
}

// ------------------------------------------------------------ JSON I/O

namespace {

json source_to_json(const SourceSpec& s) {
    json j;
    j["name"] = s.name;
    j["kind"] = source_kind_name(s.kind);
    j["class"] = traffic_class_name(s.cls);
    j["from"] = s.from;
    j["to"] = s.to;
    j["start_s"] = s.start_s;
    j["stop_s"] = s.stop_s;
    j["rate_bps"] = s.rate_bps;
    j["packet_bytes"] = s.packet_bytes;
    j["fps"] = s.fps;
    j["frame_bytes"] = s.frame_bytes;
    j["mtu_bytes"] = s.mtu_bytes;
    j["lognormal_frames"] = s.lognormal_frames;
    j["frame_sigma"] = s.frame_sigma;
    j["on_mean_s"] = s.on_mean_s;
    j["off_mean_s"] = s.off_mean_s;
    j["fragment_spacing_s"] = s.fragment_spacing_s;
    return j;
}

SourceSpec source_from_json(const json& j) {
    SourceSpec s;
    s.name = j.at("name").get<std::string>();
    auto kind = source_kind_from_name(j.at("kind").get<std::string>());
    if (!kind) {
        throw std::invalid_argument("config: unknown source kind");
    }
    s.kind = *kind;
    auto cls = traffic_class_from_name(j.at("class").get<std::string>());
    if (!cls) {
        throw std::invalid_argument("config: unknown traffic class");
    }
    s.cls = *cls;
    s.from = j.at("from").get<std::string>();
    s.to = j.at("to").get<std::string>();
    s.start_s = j.at("start_s").get<double>();
    s.stop_s = j.at("stop_s").get<double>();
    s.rate_bps = j.value("rate_bps", s.rate_bps);
    s.packet_bytes = j.value("packet_bytes", s.packet_bytes);
    s.fps = j.value("fps", s.fps);
    s.frame_bytes = j.value("frame_bytes", s.frame_bytes);
    s.mtu_bytes = j.value("mtu_bytes", s.mtu_bytes);
    s.lognormal_frames = j.value("lognormal_frames", s.lognormal_frames);
    s.frame_sigma = j.value("frame_sigma", s.frame_sigma);
    s.on_mean_s = j.value("on_mean_s", s.on_mean_s);
    s.off_mean_s = j.value("off_mean_s", s.off_mean_s);
    s.fragment_spacing_s = j.value("fragment_spacing_s", s.fragment_spacing_s);
    return s;
}

json scheduler_to_json(const SchedulerConfig& s) {
    json j;
    j["kind"] = s.kind;
    j["capacity_pkts"] = s.capacity_pkts;
    j["queues"] = s.queues;
    j["weights"] = s.weights;
    j["quanta_bytes"] = s.quanta_bytes;
    j["base_quantum_bytes"] = s.base_quantum_bytes;
    j["llq_classes"] = s.llq_classes;
    json pwfq;
    pwfq["weights"] = s.pwfq_weights;
    pwfq["priorities"] = s.pwfq_priorities;
    pwfq["base_slice_s"] = s.pwfq_base_slice_s;
    json classes;
    for (const auto& [cls, ij] : s.pwfq_classes) {
        classes[cls] = {ij.first, ij.second};
    }
    pwfq["classes"] = classes;
    j["pwfq"] = pwfq;
    return j;
}

SchedulerConfig scheduler_from_json(const json& j) {
    SchedulerConfig s;
    s.kind = j.value("kind", s.kind);
    s.capacity_pkts = j.value("capacity_pkts", s.capacity_pkts);
    if (j.contains("queues")) {
        s.queues = j.at("queues").get<std::vector<std::vector<std::string>>>();
    }
    if (j.contains("weights")) {
        s.weights = j.at("weights").get<std::vector<double>>();
    }
    if (j.contains("quanta_bytes")) {
        s.quanta_bytes = j.at("quanta_bytes").get<std::vector<double>>();
    }
    s.base_quantum_bytes = j.value("base_quantum_bytes", s.base_quantum_bytes);
    if (j.contains("llq_classes")) {
        s.llq_classes = j.at("llq_classes").get<std::vector<std::string>>();
    }
    if (j.contains("pwfq")) {
        const json& p = j.at("pwfq");
        if (p.contains("weights")) {
            s.pwfq_weights = p.at("weights").get<std::vector<double>>();
        }
        if (p.contains("priorities")) {
            s.pwfq_priorities = p.at("priorities").get<std::vector<std::vector<double>>>();
        }
        s.pwfq_base_slice_s = p.value("base_slice_s", s.pwfq_base_slice_s);
        if (p.contains("classes")) {
            s.pwfq_classes.clear();
            for (const auto& [cls, ij] : p.at("classes").items()) {
                s.pwfq_classes[cls] = {ij.at(0).get<std::size_t>(),
                                       ij.at(1).get<std::size_t>()};
            }
        }
    }
    return s;
}

} // namespace

std::string scenario_to_json(const ScenarioConfig& cfg, int indent) {
    json j;
    j["name"] = cfg.name;
    json topo;
    topo["nodes"] = json::array();
    for (const auto& n : cfg.nodes) {
        topo["nodes"].push_back({{"id", n.id}, {"kind", node_kind_name(n.kind)}});
    }
    topo["links"] = json::array();
    for (const auto& l : cfg.links) {
        topo["links"].push_back({{"a", l.a},
                                 {"b", l.b},
                                 {"rate_bps", l.rate_bps},
                                 {"propagation_delay_s", l.propagation_delay_s}});
    }
    j["topology"] = topo;
    j["sources"] = json::array();
    for (const auto& s : cfg.sources) {
        j["sources"].push_back(source_to_json(s));
    }
    j["scheduler"] = scheduler_to_json(cfg.scheduler);
    json rsvp;
    rsvp["enabled"] = cfg.rsvp.enabled;
    rsvp["reservable_fraction"] = cfg.rsvp.reservable_fraction;
    rsvp["refresh_period_s"] = cfg.rsvp.refresh_period_s;
    rsvp["timeout_periods"] = cfg.rsvp.timeout_periods;
    rsvp["bucket_depth_pkts"] = cfg.rsvp.bucket_depth_pkts;
    rsvp["reservations"] = json::array();
    for (const auto& r : cfg.rsvp.reservations) {
        rsvp["reservations"].push_back({{"source", r.source_name},
                                        {"rate_bps", r.rate_bps},
                                        {"burst_bytes", r.burst_bytes}});
    }
    j["rsvp"] = rsvp;
    json run;
    run["duration_s"] = cfg.run.duration_s;
    run["seed"] = cfg.run.seed;
    run["bucket_s"] = cfg.run.bucket_s;
    run["phase_jitter_s"] = cfg.run.phase_jitter_s;
    j["run"] = run;
    return j.dump(indent);
}

ScenarioConfig scenario_from_json(const std::string& text) {
    json j = json::parse(text);
    ScenarioConfig cfg;
    cfg.name = j.value("name", cfg.name);
    if (j.contains("topology")) {
        const json& topo = j.at("topology");
        for (const auto& n : topo.value("nodes", json::array())) {
            auto kind = node_kind_from_name(n.at("kind").get<std::string>());
            if (!kind) {
                throw std::invalid_argument("config: unknown node kind");
            }
            cfg.nodes.push_back({n.at("id").get<std::string>(), *kind});
        }
        for (const auto& l : topo.value("links", json::array())) {
            cfg.links.push_back({l.at("a").get<std::string>(), l.at("b").get<std::string>(),
                                 l.at("rate_bps").get<std::uint64_t>(),
                                 l.value("propagation_delay_s", 0.001)});
        }
    }
    for (const auto& s : j.value("sources", json::array())) {
        cfg.sources.push_back(source_from_json(s));
    }
    if (j.contains("scheduler")) {
        cfg.scheduler = scheduler_from_json(j.at("scheduler"));
    }
    if (j.contains("rsvp")) {
        const json& r = j.at("rsvp");
        cfg.rsvp.enabled = r.value("enabled", false);
        cfg.rsvp.reservable_fraction = r.value("reservable_fraction", 0.75);
        cfg.rsvp.refresh_period_s = r.value("refresh_period_s", 30.0);
        cfg.rsvp.timeout_periods = r.value("timeout_periods", 3);
        cfg.rsvp.bucket_depth_pkts = r.value("bucket_depth_pkts", 4u);
        for (const auto& res : r.value("reservations", json::array())) {
            cfg.rsvp.reservations.push_back(
                {res.at("source").get<std::string>(), res.at("rate_bps").get<double>(),
                 res.value("burst_bytes", std::uint64_t{0})});
        }
    }
    if (j.contains("run")) {
        const json& r = j.at("run");
        cfg.run.duration_s = r.value("duration_s", 120.0);
        cfg.run.seed = r.value("seed", std::uint64_t{1});
        cfg.run.bucket_s = r.value("bucket_s", 1.0);
        cfg.run.phase_jitter_s = r.value("phase_jitter_s", 0.02);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

} // namespace qsim
