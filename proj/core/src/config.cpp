#include "detsgrad/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "detsgrad/analysis.hpp"
#include "detsgrad/errors.hpp"

namespace detsgrad {

using nlohmann::json;

namespace {

// Schema-checked field access: every getter records the key as consumed, and
// reject_unknown() fails on leftovers so typos surface with their path.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError("expected an object", path_);
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    template <typename T>
    T get(const std::string& key, const T& fallback) {
        consumed_.push_back(key);
        if (!j_.contains(key)) return fallback;
        return value<T>(key);
    }

    template <typename T>
    T require(const std::string& key) {
        consumed_.push_back(key);
        if (!j_.contains(key)) throw ConfigError("missing required field", path_ + "/" + key);
        return value<T>(key);
    }

    Node child(const std::string& key) {
        consumed_.push_back(key);
        if (!j_.contains(key)) throw ConfigError("missing required object", path_ + "/" + key);
        return Node(j_.at(key), path_ + "/" + key);
    }

    bool has_child(const std::string& key) const { return j_.contains(key) && j_.at(key).is_object(); }

    void reject_unknown() const {
        for (const auto& [key, value] : j_.items()) {
            bool known = false;
            for (const auto& c : consumed_)
                if (c == key) {
                    known = true;
                    break;
                }
            if (!known) throw ConfigError("unknown field \"" + key + "\"", path_ + "/" + key);
        }
    }

    const json& raw() const { return j_; }
    const std::string& path() const { return path_; }

private:
    template <typename T>
    T value(const std::string& key) {
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("wrong type: ") + e.what(), path_ + "/" + key);
        }
    }

    const json& j_;
    std::string path_;
    std::vector<std::string> consumed_;
};

TopologySpec parse_topology(Node node) {
    TopologySpec spec;
    const auto kind = node.require<std::string>("kind");
    if (kind == "ring")
        spec.kind = TopologySpec::Kind::ring;
    else if (kind == "complete")
        spec.kind = TopologySpec::Kind::complete;
    else if (kind == "path")
        spec.kind = TopologySpec::Kind::path;
    else if (kind == "custom")
        spec.kind = TopologySpec::Kind::custom;
    else
        throw ConfigError("unknown topology kind \"" + kind + "\"", node.path() + "/kind");

    spec.n = node.get<int>("n", spec.kind == TopologySpec::Kind::custom ? -1 : 10);
    if (spec.kind == TopologySpec::Kind::custom) {
        spec.edge_file = node.get<std::string>("file", "");
        const auto edges = node.get<std::vector<std::vector<int>>>("edges", {});
        for (const auto& e : edges) {
            if (e.size() != 2) throw ConfigError("edge entries must be [i, j] pairs", node.path() + "/edges");
            spec.edges.emplace_back(e[0], e[1]);
        }
        if (spec.edge_file.empty() && spec.edges.empty())
            throw ConfigError("custom topology needs \"edges\" or \"file\"", node.path());
    }
    node.reject_unknown();
    return spec;
}

void parse_schedule(Node node, SimConfig& sim) {
    auto& s = sim.schedule;
    s.a = node.get<double>("a", s.a);
    if (node.has("b")) {
        s.b = node.require<double>("b");
        sim.b_from_topology = false;
    } else {
        node.get<double>("b", 0.0);  // mark consumed
        sim.b_from_topology = true;
    }
    s.delta1 = node.get<double>("delta1", s.delta1);
    s.delta2 = node.get<double>("delta2", s.delta2);
    s.epsilon_scale = node.get<double>("epsilon_scale", s.epsilon_scale);
    s.warmup = node.get<long>("warmup", 0);
    sim.warmup_epochs = node.get<long>("warmup_epochs", 0);
    node.reject_unknown();
}

ProblemSpec parse_problem(Node node) {
    ProblemSpec spec;
    const auto kind = node.require<std::string>("kind");
    if (kind == "synthetic") {
        spec.kind = ProblemSpec::Kind::synthetic;
        spec.synthetic.name = node.get<std::string>("name", spec.synthetic.name);
        spec.synthetic.dim = node.get<int>("dim", spec.synthetic.dim);
        spec.synthetic.samples_per_agent = node.get<long>("samples_per_agent", spec.synthetic.samples_per_agent);
        spec.synthetic.noise_scale = node.get<double>("noise_scale", spec.synthetic.noise_scale);
        node.reject_unknown();
        return spec;
    }
    if (kind != "mlp") throw ConfigError("unknown problem kind \"" + kind + "\"", node.path() + "/kind");

    spec.kind = ProblemSpec::Kind::mlp;
    spec.layers = node.get<std::vector<int>>("layers", spec.layers);
    spec.activation = activation_from_string(node.get<std::string>("activation", "relu"));

    auto data = node.child("data");
    const auto source = data.require<std::string>("source");
    if (source == "generated") {
        spec.data.source = DataSpec::Source::generated;
        spec.data.train_per_class = data.get<long>("train_per_class", spec.data.train_per_class);
        spec.data.test_per_class = data.get<long>("test_per_class", spec.data.test_per_class);
    } else if (source == "idx") {
        spec.data.source = DataSpec::Source::idx;
        spec.data.train_images = data.require<std::string>("train_images");
        spec.data.train_labels = data.require<std::string>("train_labels");
        spec.data.test_images = data.require<std::string>("test_images");
        spec.data.test_labels = data.require<std::string>("test_labels");
        spec.data.subset = data.get<long>("subset", 0);
    } else {
        throw ConfigError("unknown data source \"" + source + "\"", data.path() + "/source");
    }
    data.reject_unknown();

    auto part = node.child("partition");
    const auto scheme = part.require<std::string>("scheme");
    if (scheme == "single_class") {
        spec.partition = PartitionSpec::single_class();
    } else if (scheme == "random_iid") {
        spec.partition = PartitionSpec::random_iid(part.require<long>("per_agent"));
    } else {
        throw ConfigError("unknown partition scheme \"" + scheme + "\"", part.path() + "/scheme");
    }
    part.reject_unknown();
    node.reject_unknown();
    return spec;
}

GradientDirection parse_direction(Node node) {
    const auto mode = node.require<std::string>("mode");
    GradientDirection dir;
    if (mode == "single") {
        node.get<int>("batch", 1);  // tolerated so overrides can switch modes
        dir = GradientDirection::single();
    } else if (mode == "minibatch") {
        dir = GradientDirection::minibatch(node.require<int>("batch"));
    } else {
        // Scaled directions need a matrix; configs express only the identity
        // scaling, which equals minibatch.
        throw ConfigError("unknown direction mode \"" + mode + "\"", node.path() + "/mode");
    }
    node.reject_unknown();
    return dir;
}

Upsilon0Spec parse_upsilon0(Node node) {
    const auto mode = node.require<std::string>("mode");
    Upsilon0Spec spec;
    if (mode == "absolute")
        spec = Upsilon0Spec::absolute(node.require<double>("value"));
    else if (mode == "per_parameter")
        spec = Upsilon0Spec::per_parameter(node.require<double>("value"));
    else
        throw ConfigError("unknown upsilon0 mode \"" + mode + "\"", node.path() + "/mode");
    node.reject_unknown();
    return spec;
}

}  // namespace

ExperimentConfig parse_experiment_json(const std::string& text, const std::string& source) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }

    Node node(root, source);
    ExperimentConfig config;
    config.name = node.get<std::string>("name", config.name);
    config.seeds = node.get<std::vector<std::uint64_t>>("seeds", config.seeds);
    if (config.seeds.empty()) throw ConfigError("seeds list must not be empty", source + "/seeds");
    config.output_dir = node.get<std::string>("output_dir", config.output_dir);

    auto& sim = config.sim;
    sim.algorithm = algorithm_from_string(node.get<std::string>("algorithm", "detsgrad"));
    sim.topology = parse_topology(node.child("topology"));
    if (node.has_child("schedule")) parse_schedule(node.child("schedule"), sim);
    if (node.has_child("problem")) sim.problem = parse_problem(node.child("problem"));
    if (node.has_child("direction")) sim.direction = parse_direction(node.child("direction"));
    if (node.has_child("upsilon0")) sim.upsilon0 = parse_upsilon0(node.child("upsilon0"));
    sim.max_iterations = node.get<long>("max_iterations", sim.max_iterations);
    sim.max_epochs = node.get<long>("max_epochs", 0);
    sim.metric_cadence = node.get<long>("metric_cadence", sim.metric_cadence);
    sim.allow_invalid_schedule = node.get<bool>("allow_invalid_schedule", false);
    sim.master_seed = config.seeds.front();
    node.reject_unknown();

    if (sim.metric_cadence < 1) throw ConfigError("metric_cadence must be >= 1", source + "/metric_cadence");
    if (sim.max_iterations < 1 && sim.max_epochs < 1)
        throw ConfigError("need max_iterations >= 1 or max_epochs >= 1", source);
    return config;
}

ExperimentConfig load_experiment_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment_json(buf.str(), file.string());
}

namespace {

json topology_to_json(const TopologySpec& t) {
    json j;
    switch (t.kind) {
        case TopologySpec::Kind::ring: j["kind"] = "ring"; break;
        case TopologySpec::Kind::complete: j["kind"] = "complete"; break;
        case TopologySpec::Kind::path: j["kind"] = "path"; break;
        case TopologySpec::Kind::custom: j["kind"] = "custom"; break;
    }
    if (t.kind != TopologySpec::Kind::custom) {
        j["n"] = t.n;
    } else {
        if (!t.edge_file.empty()) j["file"] = t.edge_file;
        if (!t.edges.empty()) {
            json edges = json::array();
            for (const auto& [a, b] : t.edges) edges.push_back({a, b});
            j["edges"] = edges;
        }
        if (t.n > 0) j["n"] = t.n;
    }
    return j;
}

json problem_to_json(const ProblemSpec& p) {
    json j;
    if (p.kind == ProblemSpec::Kind::synthetic) {
        j["kind"] = "synthetic";
        j["name"] = p.synthetic.name;
        j["dim"] = p.synthetic.dim;
        j["samples_per_agent"] = p.synthetic.samples_per_agent;
        j["noise_scale"] = p.synthetic.noise_scale;
        return j;
    }
    j["kind"] = "mlp";
    j["layers"] = p.layers;
    j["activation"] = to_string(p.activation);
    json data;
    if (p.data.source == DataSpec::Source::generated) {
        data["source"] = "generated";
        data["train_per_class"] = p.data.train_per_class;
        data["test_per_class"] = p.data.test_per_class;
    } else {
        data["source"] = "idx";
        data["train_images"] = p.data.train_images;
        data["train_labels"] = p.data.train_labels;
        data["test_images"] = p.data.test_images;
        data["test_labels"] = p.data.test_labels;
        if (p.data.subset > 0) data["subset"] = p.data.subset;
    }
    j["data"] = data;
    json part;
    part["scheme"] = to_string(p.partition.scheme);
    if (p.partition.scheme == PartitionSpec::Scheme::random_iid)
        part["per_agent"] = p.partition.per_agent_count;
    j["partition"] = part;
    return j;
}

json experiment_to_json_object(const ExperimentConfig& c) {
    const auto& sim = c.sim;
    json j;
    j["name"] = c.name;
    j["algorithm"] = to_string(sim.algorithm);
    j["topology"] = topology_to_json(sim.topology);
    json sched;
    sched["a"] = sim.schedule.a;
    if (!sim.b_from_topology) sched["b"] = sim.schedule.b;
    sched["delta1"] = sim.schedule.delta1;
    sched["delta2"] = sim.schedule.delta2;
    sched["epsilon_scale"] = sim.schedule.epsilon_scale;
    if (sim.warmup_epochs > 0)
        sched["warmup_epochs"] = sim.warmup_epochs;
    else if (sim.schedule.warmup > 0)
        sched["warmup"] = sim.schedule.warmup;
    j["schedule"] = sched;
    j["problem"] = problem_to_json(sim.problem);
    json dir;
    dir["mode"] = sim.direction.mode == GradientDirection::Mode::single ? "single" : "minibatch";
    if (sim.direction.mode != GradientDirection::Mode::single) dir["batch"] = sim.direction.batch_size;
    j["direction"] = dir;
    json ups;
    ups["mode"] = sim.upsilon0.mode == Upsilon0Spec::Mode::absolute ? "absolute" : "per_parameter";
    ups["value"] = sim.upsilon0.value;
    j["upsilon0"] = ups;
    if (sim.max_epochs > 0)
        j["max_epochs"] = sim.max_epochs;
    else
        j["max_iterations"] = sim.max_iterations;
    j["metric_cadence"] = sim.metric_cadence;
    if (sim.allow_invalid_schedule) j["allow_invalid_schedule"] = true;
    j["seeds"] = c.seeds;
    j["output_dir"] = c.output_dir;
    return j;
}

}  // namespace

std::string experiment_to_json(const ExperimentConfig& config, int indent) {
    return experiment_to_json_object(config).dump(indent);
}

std::string apply_overrides(const std::string& json_text, std::span<const std::string> overrides) {
    json root = json::parse(json_text);
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override \"" + ov + "\" is not KEY=VALUE");
        const std::string key = ov.substr(0, eq);
        const std::string value = ov.substr(eq + 1);

        // dotted path -> JSON pointer
        std::string pointer = "/";
        for (const char ch : key) pointer += ch == '.' ? '/' : ch;

        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::parse_error&) {
            parsed = value;  // plain string
        }
        try {
            root[json::json_pointer(pointer)] = parsed;
        } catch (const json::exception& e) {
            throw ConfigError(std::string("cannot apply override: ") + e.what(), pointer);
        }
    }
    return root.dump(2);
}

namespace {

json desk_mlp_base(const std::string& name, const std::string& algorithm, bool single_class) {
    json j;
    j["name"] = name;
    j["algorithm"] = algorithm;
    j["topology"] = {{"kind", "ring"}, {"n", 10}};
    j["schedule"] = {{"a", 0.1}, {"b", 0.2525}, {"delta1", 0.1}, {"delta2", 1.0},
                     {"epsilon_scale", 1e-5}};
    if (single_class) j["schedule"]["warmup_epochs"] = 4;
    j["problem"] = {{"kind", "mlp"},
                    {"layers", {784, 64, 32, 10}},
                    {"activation", "relu"},
                    {"data", {{"source", "generated"}, {"train_per_class", 500}, {"test_per_class", 100}}},
                    {"partition", single_class
                                      ? json{{"scheme", "single_class"}}
                                      : json{{"scheme", "random_iid"}, {"per_agent", 450}}}};
    j["direction"] = {{"mode", "minibatch"}, {"batch", 8}};
    j["upsilon0"] = {{"mode", "per_parameter"}, {"value", 0.2}};
    j["max_iterations"] = 20000;
    j["metric_cadence"] = 1000;
    j["seeds"] = {1};
    j["output_dir"] = "runs/" + name;
    return j;
}

json paper_mlp_base(const std::string& name, const std::string& algorithm, bool single_class) {
    json j;
    j["name"] = name;
    j["algorithm"] = algorithm;
    j["topology"] = {{"kind", "ring"}, {"n", 10}};
    j["schedule"] = {{"a", algorithm == "centralized_sgd" ? 0.001 : 0.1},
                     {"b", 0.2525}, {"delta1", 0.1}, {"delta2", 1.0}, {"epsilon_scale", 1e-5}};
    if (single_class) j["schedule"]["warmup_epochs"] = 4;
    j["problem"] = {{"kind", "mlp"},
                    {"layers", {784, 64, 32, 10}},
                    {"activation", "relu"},
                    {"data", {{"source", "idx"},
                              {"train_images", "data/train-images-idx3-ubyte"},
                              {"train_labels", "data/train-labels-idx1-ubyte"},
                              {"test_images", "data/t10k-images-idx3-ubyte"},
                              {"test_labels", "data/t10k-labels-idx1-ubyte"}}},
                    {"partition", single_class
                                      ? json{{"scheme", "single_class"}}
                                      : json{{"scheme", "random_iid"}, {"per_agent", 6000}}}};
    j["direction"] = {{"mode", "single"}};
    j["upsilon0"] = {{"mode", "per_parameter"}, {"value", 0.2}};
    j["max_epochs"] = algorithm == "centralized_sgd" ? 10 : 40;
    j["metric_cadence"] = 1000;
    j["seeds"] = {1};
    j["output_dir"] = "runs/" + name;
    return j;
}

json quartic_preset(const std::string& name, const std::string& algorithm, double upsilon_c) {
    json j;
    j["name"] = name;
    j["algorithm"] = algorithm;
    j["topology"] = {{"kind", "ring"}, {"n", 10}};
    j["schedule"] = {{"a", 0.1}, {"b", 0.2525}, {"delta1", 0.1}, {"delta2", 1.0}, {"epsilon_scale", 1.0}};
    j["problem"] = {{"kind", "synthetic"}, {"name", "quartic-saddle"}, {"dim", 16},
                    {"samples_per_agent", 64}, {"noise_scale", 0.5}};
    j["direction"] = {{"mode", "single"}};
    j["upsilon0"] = {{"mode", "per_parameter"}, {"value", upsilon_c}};
    j["max_iterations"] = 50000;
    j["metric_cadence"] = 100;
    j["seeds"] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    j["output_dir"] = "runs/" + name;
    return j;
}

const std::vector<std::pair<std::string, json>>& preset_table() {
    static const std::vector<std::pair<std::string, json>> table = [] {
        std::vector<std::pair<std::string, json>> t;
        t.emplace_back("desk-quartic-detsgrad", quartic_preset("desk-quartic-detsgrad", "detsgrad", 0.2));
        t.emplace_back("desk-quartic-dist-sgd",
                       quartic_preset("desk-quartic-dist-sgd", "dist_sgd_continuous", 0.0));
        t.emplace_back("desk-ring10-detsgrad-r", desk_mlp_base("desk-ring10-detsgrad-r", "detsgrad", false));
        t.emplace_back("desk-ring10-detsgrad-s", desk_mlp_base("desk-ring10-detsgrad-s", "detsgrad", true));
        t.emplace_back("desk-ring10-dist-sgd-r",
                       desk_mlp_base("desk-ring10-dist-sgd-r", "dist_sgd_continuous", false));
        t.emplace_back("desk-ring10-dist-sgd-s",
                       desk_mlp_base("desk-ring10-dist-sgd-s", "dist_sgd_continuous", true));
        t.emplace_back("desk-centralized", desk_mlp_base("desk-centralized", "centralized_sgd", false));
        t.emplace_back("paper-ring10-centralized",
                       paper_mlp_base("paper-ring10-centralized", "centralized_sgd", false));
        t.emplace_back("paper-ring10-dist-sgd-r",
                       paper_mlp_base("paper-ring10-dist-sgd-r", "dist_sgd_continuous", false));
        t.emplace_back("paper-ring10-dist-sgd-s",
                       paper_mlp_base("paper-ring10-dist-sgd-s", "dist_sgd_continuous", true));
        t.emplace_back("paper-ring10-detsgrad-r",
                       paper_mlp_base("paper-ring10-detsgrad-r", "detsgrad", false));
        t.emplace_back("paper-ring10-detsgrad-s",
                       paper_mlp_base("paper-ring10-detsgrad-s", "detsgrad", true));
        return t;
    }();
    return table;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, j] : preset_table()) names.push_back(name);
    return names;
}

std::string preset_json(const std::string& name) {
    for (const auto& [n, j] : preset_table())
        if (n == name) return j.dump(2);
    throw ConfigError("unknown preset \"" + name + "\" (see `presets` for the list)");
}

std::string run_summary_json(const ExperimentConfig& config, std::uint64_t seed,
                             const SimResult& result) {
    json j;
    j["experiment"] = config.name;
    j["algorithm"] = to_string(config.sim.algorithm);
    j["seed"] = seed;
    j["n_agents"] = result.metrics.n_agents;
    j["param_count"] = result.param_count;
    j["iterations"] = result.iterations;
    j["upsilon0"] = result.upsilon0_resolved;
    j["schedule"] = {{"a", result.schedule_used.a},
                     {"b", result.schedule_used.b},
                     {"delta1", result.schedule_used.delta1},
                     {"delta2", result.schedule_used.delta2},
                     {"epsilon_scale", result.schedule_used.epsilon_scale},
                     {"warmup", result.schedule_used.warmup}};
    if (result.topology) {
        j["topology"] = result.topology->describe();
        j["lambda2"] = result.topology->lambda2();
        j["sigma_max"] = result.topology->sigma_max();
    }
    j["shard_sizes"] = result.shard_sizes;

    const auto acc = broadcast_accounting(result.metrics);
    j["broadcast_totals"] = acc.totals;
    j["reduction_pct"] = acc.reduction_pct;
    j["trigger_violations"] = result.metrics.trigger_violations;
    j["max_trigger_ratio"] = result.metrics.max_trigger_ratio;

    if (!result.metrics.rows.empty()) {
        const auto& last = result.metrics.rows.back();
        j["final"] = {{"k", last.k},
                      {"consensus_error", last.consensus_error},
                      {"empirical_risk", last.empirical_risk},
                      {"avg_grad_norm", last.avg_grad_norm},
                      {"lyapunov", last.lyapunov},
                      {"increment_sq", last.increment_sq}};
    }

    if (result.model && result.test_data) {
        const auto eval = analysis::evaluate_classifier(*result.model, result.final_params,
                                                        *result.test_data);
        j["accuracy"] = eval.accuracy;
        j["accuracy_spread"] = eval.max_spread;
    }

    j["wall_seconds"] = result.metrics.total_wall_seconds;

    ExperimentConfig echo = config;
    echo.sim.master_seed = seed;
    j["config"] = json::parse(experiment_to_json(echo));
    return j.dump(2);
}

std::string aggregate_summary_json(const std::vector<std::string>& summary_jsons) {
    json agg;
    std::vector<json> summaries;
    for (const auto& s : summary_jsons) summaries.push_back(json::parse(s));
    agg["seed_count"] = summaries.size();
    if (summaries.empty()) return agg.dump(2);

    agg["experiment"] = summaries.front().value("experiment", "");
    agg["algorithm"] = summaries.front().value("algorithm", "");

    auto stats = [&](const std::string& outer, const std::string& inner) -> json {
        std::vector<double> vals;
        for (const auto& s : summaries) {
            const json* node = &s;
            if (!outer.empty()) {
                if (!s.contains(outer)) return nullptr;
                node = &s.at(outer);
            }
            if (!node->contains(inner)) return nullptr;
            vals.push_back(node->at(inner).get<double>());
        }
        double mean = 0.0;
        for (const double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (const double v : vals) var += (v - mean) * (v - mean);
        var /= static_cast<double>(vals.size());
        return {{"mean", mean}, {"stddev", std::sqrt(var)}};
    };

    for (const auto& field : {"consensus_error", "empirical_risk", "avg_grad_norm", "lyapunov"}) {
        const json s = stats("final", field);
        if (!s.is_null()) agg["final_" + std::string(field)] = s;
    }
    const json red = stats("", "reduction_pct");
    if (!red.is_null()) agg["reduction_pct"] = red;
    const json spread = stats("", "accuracy_spread");
    if (!spread.is_null()) agg["accuracy_spread"] = spread;

    // Per-agent accuracy means when present in every summary.
    bool all_acc = true;
    for (const auto& s : summaries) all_acc = all_acc && s.contains("accuracy");
    if (all_acc) {
        const std::size_t n = summaries.front().at("accuracy").size();
        std::vector<double> mean_acc(n, 0.0);
        for (const auto& s : summaries)
            for (std::size_t i = 0; i < n; ++i) mean_acc[i] += s.at("accuracy").at(i).get<double>();
        for (auto& v : mean_acc) v /= static_cast<double>(summaries.size());
        agg["accuracy_mean"] = mean_acc;
    }
    return agg.dump(2);
}

}  // namespace detsgrad
