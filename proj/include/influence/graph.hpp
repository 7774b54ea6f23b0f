#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "influence/error.hpp"

namespace influence {

/// Opaque account identifier: a nonempty token without whitespace.
/// Equality is byte equality and ordering is lexicographic by bytes.
class AccountId {
public:
    AccountId() = default;
    explicit AccountId(std::string value);

    /// True when `token` would be accepted by the constructor.
    static bool is_valid(std::string_view token) noexcept;

    const std::string& str() const noexcept { return value_; }

    friend bool operator==(const AccountId&, const AccountId&) = default;
    friend std::strong_ordering operator<=>(const AccountId& a, const AccountId& b) noexcept {
        return a.value_.compare(b.value_) <=> 0;
    }

private:
    std::string value_;
};

using Edge = std::pair<AccountId, AccountId>;

/// Immutable undirected simple graph. Nodes are kept in ascending id order
/// and addressed internally by their position in that order; every
/// adjacency list is sorted ascending, which fixes the summation order of
/// the rank computation.
class SocialGraph {
public:
    SocialGraph() = default;

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    bool empty() const noexcept { return nodes_.empty(); }

    const std::vector<AccountId>& nodes() const noexcept { return nodes_; }
    std::optional<std::size_t> index_of(const AccountId& id) const;
    bool contains(const AccountId& id) const { return index_of(id).has_value(); }

    const std::vector<std::size_t>& neighbor_indices(std::size_t index) const { return adjacency_.at(index); }
    std::vector<AccountId> neighbors(const AccountId& id) const;
    std::size_t degree(const AccountId& id) const;
    std::size_t degree_at(std::size_t index) const { return adjacency_.at(index).size(); }

    /// Canonical edge list: each pair is (min, max) and the list is sorted.
    std::vector<Edge> edges() const;

    friend bool operator==(const SocialGraph&, const SocialGraph&) = default;

private:
    friend SocialGraph build_graph(const std::vector<AccountId>&, const std::vector<Edge>&);

    std::vector<AccountId> nodes_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::size_t edge_count_ = 0;
};

/// Builds the simple undirected graph. Duplicate and reversed edges collapse
/// to one; isolated accounts stay in the graph.
/// Throws InfluenceError with DuplicateAccountId, UnknownEndpoint or SelfLoop.
SocialGraph build_graph(const std::vector<AccountId>& accounts, const std::vector<Edge>& edges);

struct RankConfig {
    static constexpr double kDefaultDamping = 0.85;
    static constexpr double kDefaultTolerance = 1e-9;
    static constexpr std::size_t kDefaultMaxIterations = 1000;

    double damping = kDefaultDamping;
    double tolerance = kDefaultTolerance;
    std::size_t max_iterations = kDefaultMaxIterations;
};

/// Influence Rank scores, one per graph node, aligned with
/// `SocialGraph::nodes()` (ascending id).
struct RankVector {
    std::vector<AccountId> ids;
    std::vector<double> scores;
    std::size_t iterations = 0;
    bool converged = false;
    double residual = 0.0;

    std::optional<double> score(const AccountId& id) const;
    std::size_t size() const noexcept { return ids.size(); }

    friend bool operator==(const RankVector&, const RankVector&) = default;
};

/// PageRank by power iteration from the uniform vector:
///
///   PR'(u) = (1 - d) / N + d * (sum_{v ~ u} PR(v) / deg(v) + D / N)
///
/// where D is the rank held by isolated nodes. Iteration stops once the L1
/// change falls below the tolerance or the iteration cap is hit.
///
/// With d = 1 this is the plain undamped recurrence, which oscillates with
/// period two on bipartite components. In that case the mean of the last two
/// iterates is tracked instead and returned once its own L1 change falls
/// below the tolerance; the limit is deg(u) / 2|E| on connected graphs.
///
/// Throws InfluenceError(EmptyGraph) on a graph without nodes and
/// InfluenceError(InvalidArgument) on out-of-range parameters.
RankVector influence_rank(const SocialGraph& graph, const RankConfig& config = {});

/// Highest-scored entries, descending by score with ascending-id tie-break.
/// Returns min(k, N) entries; k must be at least 1.
std::vector<std::pair<AccountId, double>> top_k_by_rank(const RankVector& ranks, std::size_t k);

} // namespace influence
