#include "msrpa/graph.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace msrpa {

AgentSet make_agent_set(std::vector<AgentId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

Digraph::Digraph(std::size_t n, std::span<const Edge> edges)
    : n_(n), edges_(edges.begin(), edges.end()), in_(n), out_(n) {
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [head, tail] = edges_[e];
    if (head >= n_ || tail >= n_) {
      throw std::invalid_argument("edge (" + std::to_string(head) + ", " +
                                  std::to_string(tail) +
                                  ") has an endpoint outside [0, " +
                                  std::to_string(n_) + ")");
    }
    if (head == tail) {
      throw std::invalid_argument("self-loop at agent " + std::to_string(head));
    }
    if (e > 0 && edges_[e - 1] == edges_[e]) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(head) +
                                  ", " + std::to_string(tail) + ")");
    }
    out_[head].push_back(tail);
    in_[tail].push_back(head);
  }
  // out_ is filled in sorted order already; in_ needs sorting.
  for (auto& list : in_) std::sort(list.begin(), list.end());
}

void Digraph::check_agent(AgentId i) const {
  if (i >= n_) {
    throw std::invalid_argument("agent " + std::to_string(i) +
                                " is not in a graph of size " +
                                std::to_string(n_));
  }
}

std::span<const AgentId> Digraph::in_neighbors(AgentId i) const {
  check_agent(i);
  return in_[i];
}

std::span<const AgentId> Digraph::out_neighbors(AgentId i) const {
  check_agent(i);
  return out_[i];
}

AgentSet Digraph::inclusive_neighbors(AgentId i) const {
  check_agent(i);
  std::vector<AgentId> ids(in_[i].begin(), in_[i].end());
  ids.push_back(i);
  return make_agent_set(std::move(ids));
}

bool Digraph::has_edge(AgentId head, AgentId tail) const {
  check_agent(head);
  check_agent(tail);
  return std::binary_search(out_[head].begin(), out_[head].end(), tail);
}

Digraph k_circulant(std::size_t n, std::size_t k, bool undirected) {
  if (n < 2) throw std::invalid_argument("k_circulant: n must be at least 2");
  if (k < 1 || k >= n) {
    throw std::invalid_argument("k_circulant: k must satisfy 1 <= k <= n - 1");
  }
  std::vector<Digraph::Edge> edges;
  edges.reserve(undirected ? 2 * n * k : n * k);
  for (AgentId i = 0; i < n; ++i) {
    for (std::size_t m = 1; m <= k; ++m) {
      const AgentId j = (i + m) % n;
      edges.emplace_back(i, j);
      if (undirected) edges.emplace_back(j, i);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Digraph(n, edges);
}

Digraph complete_digraph(std::size_t n) {
  std::vector<Digraph::Edge> edges;
  for (AgentId i = 0; i < n; ++i) {
    for (AgentId j = 0; j < n; ++j) {
      if (i != j) edges.emplace_back(i, j);
    }
  }
  return Digraph(n, edges);
}

bool is_f_total(std::span<const AgentId> suspects, std::size_t f) {
  return make_agent_set({suspects.begin(), suspects.end()}).size() <= f;
}

namespace {

std::vector<char> membership(const Digraph& g, std::span<const AgentId> ids,
                             const char* what) {
  std::vector<char> in(g.size(), 0);
  for (AgentId id : ids) {
    if (id >= g.size()) {
      throw std::invalid_argument(std::string(what) + ": agent " +
                                  std::to_string(id) + " out of range");
    }
    in[id] = 1;
  }
  return in;
}

}  // namespace

bool is_f_local(const Digraph& g, std::span<const AgentId> suspects,
                std::size_t f) {
  const auto suspect = membership(g, suspects, "is_f_local");
  for (AgentId i = 0; i < g.size(); ++i) {
    if (suspect[i]) continue;
    std::size_t count = 0;
    for (AgentId j : g.in_neighbors(i)) count += suspect[j] ? 1 : 0;
    if (count > f) return false;
  }
  return true;
}

RobustnessCertificate strongly_robust_wrt(const Digraph& g,
                                          std::span<const AgentId> s,
                                          std::size_t r) {
  if (s.empty()) {
    throw std::invalid_argument("strong robustness needs a nonempty source set");
  }
  if (r == 0) throw std::invalid_argument("strong robustness needs r >= 1");
  auto reached = membership(g, s, "strongly_robust_wrt");

  RobustnessCertificate cert;
  cert.r = r;
  for (std::size_t round = 1;; ++round) {
    AgentSet absorbed;
    for (AgentId i = 0; i < g.size(); ++i) {
      if (reached[i]) continue;
      std::size_t count = 0;
      for (AgentId j : g.in_neighbors(i)) count += reached[j] ? 1 : 0;
      if (count >= r) absorbed.push_back(i);
    }
    if (absorbed.empty()) break;
    for (AgentId i : absorbed) reached[i] = 1;
    cert.peel_order.push_back({round, std::move(absorbed)});
  }

  for (AgentId i = 0; i < g.size(); ++i) {
    if (!reached[i]) cert.witness.push_back(i);
  }
  cert.holds = cert.witness.empty();
  return cert;
}

bool strongly_robust_bruteforce(const Digraph& g, std::span<const AgentId> s,
                                std::size_t r, std::size_t max_free) {
  const auto source = membership(g, s, "strongly_robust_bruteforce");
  std::vector<AgentId> free_agents;
  for (AgentId i = 0; i < g.size(); ++i) {
    if (!source[i]) free_agents.push_back(i);
  }
  max_free = std::min<std::size_t>(max_free, 20);
  if (free_agents.size() > max_free) {
    throw CapacityError("brute-force robustness check limited to " +
                        std::to_string(max_free) + " non-source agents, got " +
                        std::to_string(free_agents.size()));
  }

  // Compressed index of each free agent, used to express in-neighbor sets
  // as bitmasks over V\S.
  std::vector<std::size_t> slot(g.size(), 0);
  for (std::size_t k = 0; k < free_agents.size(); ++k) slot[free_agents[k]] = k;

  std::vector<std::uint32_t> free_in_mask(free_agents.size(), 0);
  std::vector<std::size_t> in_degree(free_agents.size(), 0);
  for (std::size_t k = 0; k < free_agents.size(); ++k) {
    for (AgentId j : g.in_neighbors(free_agents[k])) {
      if (!source[j]) free_in_mask[k] |= std::uint32_t{1} << slot[j];
    }
    in_degree[k] = g.in_neighbors(free_agents[k]).size();
  }

  const std::uint32_t subsets = std::uint32_t{1} << free_agents.size();
  for (std::uint32_t c = 1; c < subsets; ++c) {
    bool reachable = false;
    for (std::uint32_t rest = c; rest != 0 && !reachable; rest &= rest - 1) {
      const auto k = static_cast<std::size_t>(std::countr_zero(rest));
      const auto inside =
          static_cast<std::size_t>(std::popcount(free_in_mask[k] & c));
      reachable = in_degree[k] - inside >= r;
    }
    if (!reachable) return false;
  }
  return true;
}

void write_edge_list(std::ostream& out, const Digraph& g) {
  out << "# n " << g.size() << '\n';
  for (const auto& [head, tail] : g.edges()) out << head << ' ' << tail << '\n';
}

Digraph read_edge_list(std::istream& in, std::optional<std::size_t> n) {
  std::vector<Digraph::Edge> edges;
  std::optional<std::size_t> header_n;
  std::size_t max_id = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream header(line.substr(first + 1));
      std::string key;
      std::size_t value = 0;
      if (header >> key >> value && key == "n") header_n = value;
      continue;
    }
    std::istringstream fields(line);
    long long head = -1;
    long long tail = -1;
    std::string extra;
    if (!(fields >> head >> tail) || (fields >> extra) || head < 0 ||
        tail < 0) {
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": expected two nonnegative integers");
    }
    edges.emplace_back(static_cast<AgentId>(head), static_cast<AgentId>(tail));
    max_id = std::max({max_id, edges.back().first, edges.back().second});
  }
  std::size_t count = edges.empty() ? 0 : max_id + 1;
  if (header_n) count = *header_n;
  if (n) count = *n;
  return Digraph(count, edges);
}

}  // namespace msrpa
