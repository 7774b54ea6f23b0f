#include "influence/graph.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace influence {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateAccountId: return "DuplicateAccountId";
    case ErrorCode::InvalidAccountId: return "InvalidAccountId";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroFollowers: return "ZeroFollowers";
    case ErrorCode::NoPosts: return "NoPosts";
    case ErrorCode::AuthorMismatch: return "AuthorMismatch";
    }
    return "Unknown";
}

namespace {

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

} // namespace

AccountId::AccountId(std::string value) : value_(std::move(value)) {
    if (!is_valid(value_)) {
        throw InfluenceError(ErrorCode::InvalidAccountId, value_,
                             "account id must be a nonempty token without whitespace: '" + value_ + "'");
    }
}

bool AccountId::is_valid(std::string_view token) noexcept {
    return !token.empty() && std::none_of(token.begin(), token.end(),
                                          [](char c) { return is_space(static_cast<unsigned char>(c)); });
}

std::optional<std::size_t> SocialGraph::index_of(const AccountId& id) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<AccountId> SocialGraph::neighbors(const AccountId& id) const {
    const auto index = index_of(id);
    if (!index) {
        throw InfluenceError(ErrorCode::UnknownEndpoint, id.str(), "unknown account '" + id.str() + "'");
    }
    std::vector<AccountId> out;
    out.reserve(adjacency_[*index].size());
    for (const auto v : adjacency_[*index]) {
        out.push_back(nodes_[v]);
    }
    return out;
}

std::size_t SocialGraph::degree(const AccountId& id) const {
    const auto index = index_of(id);
    if (!index) {
        throw InfluenceError(ErrorCode::UnknownEndpoint, id.str(), "unknown account '" + id.str() + "'");
    }
    return adjacency_[*index].size();
}

std::vector<Edge> SocialGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t u = 0; u < nodes_.size(); ++u) {
        for (const auto v : adjacency_[u]) {
            if (u < v) {
                out.emplace_back(nodes_[u], nodes_[v]);
            }
        }
    }
    return out;
}

SocialGraph build_graph(const std::vector<AccountId>& accounts, const std::vector<Edge>& edges) {
    SocialGraph graph;
    graph.nodes_ = accounts;
    std::sort(graph.nodes_.begin(), graph.nodes_.end());
    const auto dup = std::adjacent_find(graph.nodes_.begin(), graph.nodes_.end());
    if (dup != graph.nodes_.end()) {
        throw InfluenceError(ErrorCode::DuplicateAccountId, dup->str(),
                             "duplicate account id '" + dup->str() + "'");
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        const auto ia = graph.index_of(a);
        const auto ib = graph.index_of(b);
        const std::string subject = a.str() + "," + b.str();
        if (!ia || !ib) {
            const auto& missing = ia ? b : a;
            throw InfluenceError(ErrorCode::UnknownEndpoint, subject,
                                 "edge (" + subject + ") references unknown account '" + missing.str() + "'");
        }
        if (*ia == *ib) {
            throw InfluenceError(ErrorCode::SelfLoop, subject, "edge (" + subject + ") is a self-loop");
        }
        pairs.emplace_back(std::min(*ia, *ib), std::max(*ia, *ib));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    graph.adjacency_.assign(graph.nodes_.size(), {});
    for (const auto& [u, v] : pairs) {
        graph.adjacency_[u].push_back(v);
        graph.adjacency_[v].push_back(u);
    }
    for (auto& list : graph.adjacency_) {
        std::sort(list.begin(), list.end());
    }
    graph.edge_count_ = pairs.size();
    return graph;
}

std::optional<double> RankVector::score(const AccountId& id) const {
    const auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) {
        return std::nullopt;
    }
    return scores[static_cast<std::size_t>(it - ids.begin())];
}

namespace {

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(a[i] - b[i]);
    }
    return sum;
}

// One application of the damped update; writes into `next`.
void step(const SocialGraph& graph, double damping, const std::vector<double>& rank, std::vector<double>& next) {
    const std::size_t n = rank.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        if (graph.degree_at(v) == 0) {
            dangling += rank[v];
        }
    }
    const double base = (1.0 - damping) * inv_n + damping * dangling * inv_n;

    for (std::size_t u = 0; u < n; ++u) {
        double incoming = 0.0;
        for (const auto v : graph.neighbor_indices(u)) {
            incoming += rank[v] / static_cast<double>(graph.degree_at(v));
        }
        next[u] = base + damping * incoming;
    }
}

} // namespace

RankVector influence_rank(const SocialGraph& graph, const RankConfig& config) {
    if (graph.empty()) {
        throw InfluenceError(ErrorCode::EmptyGraph, "", "influence rank requires a nonempty graph");
    }
    if (!(config.damping >= 0.0 && config.damping <= 1.0)) {
        throw InfluenceError(ErrorCode::InvalidArgument, "damping", "damping must lie in [0, 1]");
    }
    if (!(config.tolerance > 0.0)) {
        throw InfluenceError(ErrorCode::InvalidArgument, "tolerance", "tolerance must be positive");
    }
    if (config.max_iterations == 0) {
        throw InfluenceError(ErrorCode::InvalidArgument, "max_iterations", "max_iterations must be positive");
    }

    const std::size_t n = graph.node_count();
    const bool averaged = config.damping == 1.0;

    std::vector<double> rank(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    // Only used in averaged mode: mean of the previous two iterates.
    std::vector<double> mean = rank;
    std::vector<double> next_mean(n);

    RankVector result;
    result.ids = graph.nodes();
    result.residual = 0.0;

    while (result.iterations < config.max_iterations) {
        step(graph, config.damping, rank, next);
        ++result.iterations;

        if (averaged) {
            for (std::size_t i = 0; i < n; ++i) {
                next_mean[i] = 0.5 * (rank[i] + next[i]);
            }
            result.residual = result.iterations == 1 ? l1_distance(next, rank) : l1_distance(next_mean, mean);
            std::swap(mean, next_mean);
        } else {
            result.residual = l1_distance(next, rank);
        }
        std::swap(rank, next);

        // The first averaged residual compares against the start vector, not a
        // mean, so it cannot certify convergence.
        if (result.residual < config.tolerance && !(averaged && result.iterations == 1)) {
            result.converged = true;
            break;
        }
    }

    std::vector<double>& out = averaged ? mean : rank;
    double total = 0.0;
    for (const double s : out) {
        total += s;
    }
    for (double& s : out) {
        s /= total;
    }
    result.scores = std::move(out);
    return result;
}

std::vector<std::pair<AccountId, double>> top_k_by_rank(const RankVector& ranks, std::size_t k) {
    if (k == 0) {
        throw InfluenceError(ErrorCode::InvalidArgument, "k", "k must be at least 1");
    }
    std::vector<std::pair<AccountId, double>> entries;
    entries.reserve(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        entries.emplace_back(ranks.ids[i], ranks.scores[i]);
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    entries.resize(std::min(k, entries.size()));
    return entries;
}

} // namespace influence
