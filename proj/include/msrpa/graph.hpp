#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace msrpa {

/// Dense 0-based agent index in [0, n).
using AgentId = std::size_t;

/// Sorted, duplicate-free list of agents.
using AgentSet = std::vector<AgentId>;

/// Raised when an exhaustive check would enumerate too many subsets.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Sorts and deduplicates `ids` into an AgentSet.
AgentSet make_agent_set(std::vector<AgentId> ids);

/// Immutable simple directed graph. An edge (head, tail) means `head` can
/// send to `tail`, so `head` is an in-neighbor of `tail`.
class Digraph {
 public:
  using Edge = std::pair<AgentId, AgentId>;

  Digraph() = default;

  /// Throws std::invalid_argument on self-loops, duplicates or endpoints
  /// outside [0, n).
  Digraph(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Edges sorted lexicographically by (head, tail).
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// {j : (j, i) in E}, ascending. Throws std::invalid_argument for bad `i`.
  std::span<const AgentId> in_neighbors(AgentId i) const;
  /// {k : (i, k) in E}, ascending.
  std::span<const AgentId> out_neighbors(AgentId i) const;
  /// in_neighbors(i) together with i itself.
  AgentSet inclusive_neighbors(AgentId i) const;

  bool has_edge(AgentId head, AgentId tail) const;

  bool operator==(const Digraph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  void check_agent(AgentId i) const;

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<AgentId>> in_;
  std::vector<std::vector<AgentId>> out_;
};

/// Directed k-circulant: edges (i, (i + m) mod n) for m = 1..k. The
/// undirected variant is the symmetric closure.
Digraph k_circulant(std::size_t n, std::size_t k, bool undirected);

/// Complete digraph on n agents.
Digraph complete_digraph(std::size_t n);

/// |suspects| <= f.
bool is_f_total(std::span<const AgentId> suspects, std::size_t f);

/// Every agent outside `suspects` has at most f suspects among its
/// in-neighbors.
bool is_f_local(const Digraph& g, std::span<const AgentId> suspects,
                std::size_t f);

struct PeelRound {
  std::size_t round = 0;
  AgentSet agents;

  bool operator==(const PeelRound&) const = default;
};

struct RobustnessCertificate {
  bool holds = false;
  std::size_t r = 0;
  /// Agents absorbed in each peeling round, starting at round 1.
  std::vector<PeelRound> peel_order;
  /// On failure: the stalled set, none of whose members has r in-neighbors
  /// outside it.
  AgentSet witness;
};

/// Decides strong r-robustness of `g` with respect to `s` by peeling:
/// starting from `s`, repeatedly absorb every agent with at least r
/// in-neighbors already reached. Holds iff every agent is eventually
/// reached. Throws std::invalid_argument if `s` is empty, r == 0, or an id
/// is out of range.
RobustnessCertificate strongly_robust_wrt(const Digraph& g,
                                          std::span<const AgentId> s,
                                          std::size_t r);

/// Definitional check: every nonempty C subset of V\S contains an agent with
/// at least r in-neighbors outside C. Exponential; throws CapacityError when
/// |V\S| exceeds `max_free` (at most 20).
bool strongly_robust_bruteforce(const Digraph& g, std::span<const AgentId> s,
                                std::size_t r, std::size_t max_free = 20);

/// Writes `# n <n>` followed by one "head tail" line per edge (0-based).
void write_edge_list(std::ostream& out, const Digraph& g);

/// Reads "head tail" pairs, skipping blank lines and '#' comments. The
/// agent count comes from `n` if given, else from a `# n <n>` header, else
/// from the largest id + 1.
Digraph read_edge_list(std::istream& in, std::optional<std::size_t> n = {});

}  // namespace msrpa
