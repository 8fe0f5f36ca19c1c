#include "msrpa/scenario_io.hpp"

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace msrpa {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

/// Object view that records which keys were read so leftovers can be
/// rejected.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema_error(path_, "expected an object");
  }

  std::string path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* optional(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& required(const std::string& key) {
    const json* v = optional(key);
    if (!v) schema_error(path(key), "missing required key");
    return *v;
  }

  double real(const std::string& key) { return as_real(required(key), path(key)); }

  double real_or(const std::string& key, double fallback) {
    const json* v = optional(key);
    return v ? as_real(*v, path(key)) : fallback;
  }

  std::int64_t integer(const std::string& key) {
    return as_integer(required(key), path(key));
  }

  std::string string(const std::string& key) {
    const json& v = required(key);
    if (!v.is_string()) schema_error(path(key), "expected a string");
    return v.get<std::string>();
  }

  bool boolean_or(const std::string& key, bool fallback) {
    const json* v = optional(key);
    if (!v) return fallback;
    if (!v->is_boolean()) schema_error(path(key), "expected true or false");
    return v->get<bool>();
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) schema_error(path(item.key()), "unknown key");
    }
  }

  static double as_real(const json& v, const std::string& where) {
    if (!v.is_number()) schema_error(where, "expected a number");
    return v.get<double>();
  }

  static std::int64_t as_integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) schema_error(where, "expected an integer");
    return v.get<std::int64_t>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::vector<double> real_array(const json& v, const std::string& where) {
  if (!v.is_array()) schema_error(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(Fields::as_real(v[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

class Labels {
 public:
  Labels(std::size_t base, std::size_t n) : base_(base), n_(n) {}

  AgentId agent(const json& v, const std::string& where) const {
    const std::int64_t label = Fields::as_integer(v, where);
    if (label < static_cast<std::int64_t>(base_) ||
        label >= static_cast<std::int64_t>(n_ + base_)) {
      schema_error(where, "agent label " + std::to_string(label) + " outside [" +
                              std::to_string(base_) + ", " +
                              std::to_string(n_ + base_) + ")");
    }
    return static_cast<AgentId>(label) - base_;
  }

  AgentSet set(const json& v, const std::string& where) const {
    if (!v.is_array()) schema_error(where, "expected an array of agent labels");
    std::vector<AgentId> ids;
    for (std::size_t k = 0; k < v.size(); ++k) {
      ids.push_back(agent(v[k], where + "[" + std::to_string(k) + "]"));
    }
    auto out = make_agent_set(ids);
    if (out.size() != ids.size()) schema_error(where, "duplicate agent label");
    return out;
  }

 private:
  std::size_t base_;
  std::size_t n_;
};

std::size_t positive_size(Fields& f, const std::string& key) {
  const auto v = f.integer(key);
  if (v < 1) schema_error(f.path(key), "must be positive");
  return static_cast<std::size_t>(v);
}

Digraph parse_graph(const json& j, std::size_t index_base,
                    const std::filesystem::path& base_dir) {
  Fields f(j, "graph");
  try {
    if (const json* gen = f.optional("generator")) {
      if (!gen->is_string()) schema_error("graph.generator", "expected a string");
      const auto kind = gen->get<std::string>();
      if (kind == "k_circulant") {
        const auto n = positive_size(f, "n");
        const auto k = positive_size(f, "k");
        const bool undirected = f.boolean_or("undirected", true);
        f.finish();
        return k_circulant(n, k, undirected);
      }
      if (kind == "complete") {
        const auto n = positive_size(f, "n");
        f.finish();
        return complete_digraph(n);
      }
      schema_error("graph.generator", "unknown generator '" + kind + "'");
    }
    if (const json* path = f.optional("edge_list")) {
      if (!path->is_string()) schema_error("graph.edge_list", "expected a path");
      std::optional<std::size_t> n;
      if (f.optional("n")) n = positive_size(f, "n");
      f.finish();
      std::filesystem::path file = path->get<std::string>();
      if (file.is_relative()) file = base_dir / file;
      std::ifstream in(file);
      if (!in) schema_error("graph.edge_list", "cannot open '" + file.string() + "'");
      return read_edge_list(in, n);
    }
    if (const json* edges = f.optional("edges")) {
      const auto n = positive_size(f, "n");
      f.finish();
      if (!edges->is_array()) schema_error("graph.edges", "expected an array of pairs");
      const Labels labels(index_base, n);
      std::vector<Digraph::Edge> list;
      for (std::size_t k = 0; k < edges->size(); ++k) {
        const auto where = "graph.edges[" + std::to_string(k) + "]";
        const json& e = (*edges)[k];
        if (!e.is_array() || e.size() != 2) schema_error(where, "expected [head, tail]");
        list.emplace_back(labels.agent(e[0], where), labels.agent(e[1], where));
      }
      return Digraph(n, list);
    }
  } catch (const std::invalid_argument& e) {
    schema_error("graph", e.what());
  }
  schema_error("graph", "needs one of 'generator', 'edge_list' or 'edges'");
}

ValueSource parse_source(const json* j, const std::string& where) {
  if (!j) return UniformSource{};
  Fields f(*j, where);
  const auto kind = f.string("kind");
  if (kind == "uniform") {
    UniformSource s{f.real_or("lo", -50.0), f.real_or("hi", 50.0)};
    f.finish();
    if (!(s.lo <= s.hi)) schema_error(where, "uniform bounds need lo <= hi");
    return s;
  }
  if (kind == "table") {
    TableSource s{real_array(f.required("values"), f.path("values"))};
    f.finish();
    if (s.values.empty()) schema_error(f.path("values"), "table must not be empty");
    return s;
  }
  schema_error(f.path("kind"), "unknown value source '" + kind + "'");
}

std::map<AgentId, Behavior> parse_adversaries(const json& j, const Labels& labels) {
  if (!j.is_array()) schema_error("adversaries", "expected an array");
  std::map<AgentId, Behavior> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto where = "adversaries[" + std::to_string(k) + "]";
    Fields f(j[k], where);
    const AgentId id = labels.agent(f.required("agent"), f.path("agent"));
    const auto kind = f.string("behavior");
    Behavior b;
    if (kind == "malicious") {
      b = Malicious{parse_source(f.optional("source"), f.path("source"))};
    } else if (kind == "byzantine") {
      b = Byzantine{parse_source(f.optional("source"), f.path("source"))};
    } else if (kind == "state_hijack") {
      b = StateHijack{parse_source(f.optional("source"), f.path("source"))};
    } else if (kind == "faulty_fixed") {
      b = FaultyFixed{f.real("value")};
    } else {
      schema_error(f.path("behavior"), "unknown behavior '" + kind + "'");
    }
    f.finish();
    if (!out.emplace(id, std::move(b)).second) {
      schema_error(f.path("agent"), "agent declared as adversary twice");
    }
  }
  return out;
}

ReferenceSignal parse_signal(const json& j) {
  Fields f(j, "signal");
  const auto kind = f.string("kind");
  ReferenceSignal sig;
  if (kind == "sinusoid") {
    const double amplitude = f.real("amplitude");
    const json* over_pi = f.optional("rate_over_pi");
    const json* rate = f.optional("rate");
    if ((over_pi != nullptr) == (rate != nullptr)) {
      schema_error("signal", "sinusoid needs exactly one of 'rate' or 'rate_over_pi'");
    }
    const double w = rate ? Fields::as_real(*rate, "signal.rate")
                          : Fields::as_real(*over_pi, "signal.rate_over_pi") /
                                std::numbers::pi;
    sig = ReferenceSignal::sinusoid(amplitude, w);
  } else if (kind == "constant") {
    sig = ReferenceSignal::constant(f.real("value"));
  } else if (kind == "ramp") {
    sig = ReferenceSignal::ramp(f.real("slope"), f.real_or("intercept", 0.0));
  } else if (kind == "table") {
    sig = ReferenceSignal::table(real_array(f.required("values"), "signal.values"));
  } else {
    schema_error("signal.kind", "unknown signal kind '" + kind + "'");
  }
  f.finish();
  return sig;
}

InitialFollowers parse_initial(const json& j) {
  Fields f(j, "initial_followers");
  const auto kind = f.string("kind");
  InitialFollowers init;
  if (kind == "uniform") {
    UniformInit u{f.real("lo"), f.real("hi"), std::nullopt};
    if (const json* seed = f.optional("seed")) {
      if (!seed->is_number_unsigned()) {
        schema_error("initial_followers.seed", "expected a nonnegative integer");
      }
      u.seed = seed->get<std::uint64_t>();
    }
    init = u;
  } else if (kind == "explicit") {
    init = ExplicitInit{real_array(f.required("values"), "initial_followers.values")};
  } else {
    schema_error("initial_followers.kind", "unknown kind '" + kind + "'");
  }
  f.finish();
  return init;
}

}  // namespace

ScenarioFile parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  Fields top(doc, "");
  ScenarioFile file;
  Scenario& sc = file.scenario;

  if (const json* name = top.optional("name")) {
    if (!name->is_string()) schema_error("name", "expected a string");
    sc.name = name->get<std::string>();
  }
  if (const json* base = top.optional("index_base")) {
    const auto b = Fields::as_integer(*base, "index_base");
    if (b != 0 && b != 1) schema_error("index_base", "must be 0 or 1");
    file.index_base = static_cast<std::size_t>(b);
  }

  sc.graph = parse_graph(top.required("graph"), file.index_base, base_dir);
  const Labels labels(file.index_base, sc.graph.size());

  {
    Fields roles(top.required("roles"), "roles");
    sc.leaders = labels.set(roles.required("leaders"), "roles.leaders");
    sc.followers = labels.set(roles.required("followers"), "roles.followers");
    roles.finish();
    std::vector<AgentId> overlap;
    std::set_intersection(sc.leaders.begin(), sc.leaders.end(), sc.followers.begin(),
                          sc.followers.end(), std::back_inserter(overlap));
    if (!overlap.empty()) {
      schema_error("roles", "leaders and followers overlap at agent label " +
                                std::to_string(overlap.front() + file.index_base) +
                                "; the two roles must partition the agents");
    }
    if (sc.leaders.size() + sc.followers.size() != sc.graph.size()) {
      schema_error("roles", "leaders and followers must cover all " +
                                std::to_string(sc.graph.size()) + " agents");
    }
  }

  if (const json* adv = top.optional("adversaries")) {
    sc.adversaries = parse_adversaries(*adv, labels);
  }

  {
    Fields params(top.required("params"), "params");
    const auto f = params.integer("f");
    if (f < 0) schema_error("params.f", "must be nonnegative");
    sc.params.f = static_cast<std::size_t>(f);
    sc.params.eta = params.integer("eta");
    if (sc.params.eta < 1) schema_error("params.eta", "must be at least 1");
    if (params.optional("t0")) sc.params.t0 = params.integer("t0");
    if (const json* u = params.optional("u_max")) {
      sc.params.u_max = Fields::as_real(*u, "params.u_max");
      if (!(*sc.params.u_max > 0.0)) schema_error("params.u_max", "must be positive");
    }
    params.finish();
  }

  sc.signal = parse_signal(top.required("signal"));
  sc.initial_followers = parse_initial(top.required("initial_followers"));

  sc.horizon = 40 * sc.params.eta;
  if (top.optional("horizon")) sc.horizon = top.integer("horizon");
  if (const json* seed = top.optional("seed")) {
    if (!seed->is_number_unsigned()) schema_error("seed", "expected a nonnegative integer");
    sc.seed = seed->get<std::uint64_t>();
  }

  const std::string stem = sc.name.empty() ? "run" : sc.name;
  file.outputs = {stem + "_trace.csv", stem + "_messages.csv", stem + "_metrics.csv"};
  if (const json* out = top.optional("output")) {
    Fields o(*out, "output");
    if (o.optional("trace")) file.outputs.trace = o.string("trace");
    if (o.optional("messages")) file.outputs.messages = o.string("messages");
    if (o.optional("metrics")) file.outputs.metrics = o.string("metrics");
    o.finish();
  }
  top.finish();

  sc.check();
  return file;
}

ScenarioFile load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ScenarioError(path.string() + ": parse error: " + e.what());
  }
  try {
    return parse_scenario(doc, path.parent_path());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  return load_scenario_file(path).scenario;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json source_json(const ValueSource& s) {
  return std::visit(
      overloaded{
          [](const UniformSource& u) {
            return json{{"kind", "uniform"}, {"lo", u.lo}, {"hi", u.hi}};
          },
          [](const TableSource& t) { return json{{"kind", "table"}, {"values", t.values}}; },
      },
      s);
}

}  // namespace

json to_json(const ScenarioFile& file) {
  const Scenario& sc = file.scenario;
  json doc;
  doc["name"] = sc.name;
  doc["index_base"] = 0;

  json edges = json::array();
  for (const auto& [head, tail] : sc.graph.edges()) edges.push_back({head, tail});
  doc["graph"] = {{"n", sc.graph.size()}, {"edges", edges}};
  doc["roles"] = {{"leaders", sc.leaders}, {"followers", sc.followers}};

  json adversaries = json::array();
  for (const auto& [id, behavior] : sc.adversaries) {
    json a{{"agent", id}, {"behavior", std::string(behavior_tag(behavior))}};
    std::visit(overloaded{
                   [&](const Malicious& m) { a["source"] = source_json(m.source); },
                   [&](const Byzantine& b) { a["source"] = source_json(b.source); },
                   [&](const StateHijack& h) { a["source"] = source_json(h.source); },
                   [&](const FaultyFixed& f) { a["value"] = f.value; },
                   [](const auto&) {},
               },
               behavior);
    adversaries.push_back(std::move(a));
  }
  doc["adversaries"] = adversaries;

  json params{{"f", sc.params.f}, {"eta", sc.params.eta}, {"t0", sc.params.t0}};
  if (sc.params.u_max) params["u_max"] = *sc.params.u_max;
  doc["params"] = params;

  doc["signal"] = std::visit(
      overloaded{
          [](const Sinusoid& s) {
            return json{{"kind", "sinusoid"}, {"amplitude", s.amplitude}, {"rate", s.angular_rate}};
          },
          [](const ConstantSignal& c) { return json{{"kind", "constant"}, {"value", c.value}}; },
          [](const Ramp& r) {
            return json{{"kind", "ramp"}, {"slope", r.slope}, {"intercept", r.intercept}};
          },
          [](const TableSignal& t) { return json{{"kind", "table"}, {"values", t.values}}; },
      },
      sc.signal.kind());

  doc["initial_followers"] = std::visit(
      overloaded{
          [](const UniformInit& u) {
            json j{{"kind", "uniform"}, {"lo", u.lo}, {"hi", u.hi}};
            if (u.seed) j["seed"] = *u.seed;
            return j;
          },
          [](const ExplicitInit& e) { return json{{"kind", "explicit"}, {"values", e.values}}; },
      },
      sc.initial_followers);

  doc["horizon"] = sc.horizon;
  doc["seed"] = sc.seed;
  doc["output"] = {{"trace", file.outputs.trace},
                   {"messages", file.outputs.messages},
                   {"metrics", file.outputs.metrics}};
  return doc;
}

}  // namespace msrpa
