#pragma once

// Test-only oracles and generators. Nothing here calls into the code paths
// it is used to check: the PageRank oracle works on a dense matrix, the MOI
// oracle evaluates the indicator per (user, post) pair by linear scan.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "influence/engagement.hpp"
#include "influence/graph.hpp"
#include "influence/ingest.hpp"

namespace influence::testing {

/// Graph given by node count and index pairs; node i is named id_for(i).
struct SmallGraph {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

inline std::string id_for(std::size_t i) {
    // Zero-padded so lexicographic order equals index order.
    std::string s = std::to_string(i);
    return "n" + std::string(4 - std::min<std::size_t>(4, s.size()), '0') + s;
}

inline SocialGraph to_social_graph(const SmallGraph& g) {
    std::vector<AccountId> ids;
    for (std::size_t i = 0; i < g.n; ++i) {
        ids.emplace_back(id_for(i));
    }
    std::vector<Edge> edges;
    for (const auto& [a, b] : g.edges) {
        edges.emplace_back(ids[a], ids[b]);
    }
    return build_graph(ids, edges);
}

/// Erdos-Renyi style graph without self-loops; duplicates impossible.
inline SmallGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
    SmallGraph g{n, {}};
    std::bernoulli_distribution coin(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (coin(rng)) {
                g.edges.emplace_back(i, j);
            }
        }
    }
    return g;
}

/// Random spanning tree plus extra edges with probability p.
inline SmallGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, double p) {
    SmallGraph g{n, {}};
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> parent(0, i - 1);
        const auto j = parent(rng);
        seen.emplace(j, i);
    }
    std::bernoulli_distribution coin(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (coin(rng)) {
                seen.emplace(i, j);
            }
        }
    }
    g.edges.assign(seen.begin(), seen.end());
    return g;
}

inline bool is_bipartite(const SmallGraph& g) {
    std::vector<std::vector<std::size_t>> adj(g.n);
    for (const auto& [a, b] : g.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> color(g.n, -1);
    for (std::size_t s = 0; s < g.n; ++s) {
        if (color[s] != -1) continue;
        color[s] = 0;
        std::vector<std::size_t> stack{s};
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (const auto v : adj[u]) {
                if (color[v] == -1) {
                    color[v] = 1 - color[u];
                    stack.push_back(v);
                } else if (color[v] == color[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

/// Dense Google-matrix power iteration. Column v of the transition matrix
/// spreads 1/deg(v) to each neighbor, or 1/n to every node when v is
/// isolated; the teleport term adds (1-d)/n everywhere.
inline std::vector<double> dense_pagerank(const SmallGraph& g, double d, std::size_t iterations = 20000) {
    const std::size_t n = g.n;
    std::vector<std::vector<double>> adj(n, std::vector<double>(n, 0.0));
    std::vector<double> deg(n, 0.0);
    for (const auto& [a, b] : g.edges) {
        adj[a][b] = 1.0;
        adj[b][a] = 1.0;
    }
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t u = 0; u < n; ++u) {
            deg[v] += adj[u][v];
        }
    }
    std::vector<std::vector<double>> google(n, std::vector<double>(n, 0.0));
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            const double walk = deg[v] == 0.0 ? 1.0 / static_cast<double>(n) : adj[u][v] / deg[v];
            google[u][v] = d * walk + (1.0 - d) / static_cast<double>(n);
        }
    }
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    std::vector<double> y(n);
    for (std::size_t it = 0; it < iterations; ++it) {
        double change = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            double s = 0.0;
            for (std::size_t v = 0; v < n; ++v) {
                s += google[u][v] * x[v];
            }
            y[u] = s;
            change += std::abs(y[u] - x[u]);
        }
        x.swap(y);
        if (change < 1e-15) {
            break;
        }
    }
    return x;
}

/// deg(u) / 2|E|, the stationary distribution of the random walk on a
/// connected graph.
inline std::vector<double> degree_proportional(const SmallGraph& g) {
    std::vector<double> deg(g.n, 0.0);
    for (const auto& [a, b] : g.edges) {
        deg[a] += 1.0;
        deg[b] += 1.0;
    }
    for (auto& x : deg) {
        x /= 2.0 * static_cast<double>(g.edges.size());
    }
    return deg;
}

/// Brute-force MOI: for every post, scan the whole user universe and add the
/// indicator of membership in any engagement set, divide by followers,
/// square, average, take the root.
inline double brute_force_moi(const std::vector<Post>& posts, const std::vector<AccountId>& universe,
                              std::uint64_t followers) {
    auto member = [](const std::set<AccountId>& set, const AccountId& user) {
        for (const auto& x : set) {
            if (x.str() == user.str()) return true;
        }
        return false;
    };
    double sum = 0.0;
    for (const auto& p : posts) {
        double engaged = 0.0;
        for (const auto& user : universe) {
            if (member(p.likers, user) || member(p.mentioners, user) || member(p.retweeters, user)) {
                engaged += 1.0;
            }
        }
        const double ratio = engaged / static_cast<double>(followers);
        sum += ratio * ratio;
    }
    return std::sqrt(sum / static_cast<double>(posts.size()));
}

struct DatasetOptions {
    bool awkward_text = true;   // commas, quotes, newlines and non-ASCII in text fields
    std::size_t max_accounts = 12;
};

/// Random, already-normalized Dataset (as if freshly loaded).
inline Dataset random_dataset(std::mt19937_64& rng, const DatasetOptions& options = {}) {
    const std::vector<std::string> plain_pieces = {"tsel", "halo", "jabar", "id", "x", "promo", "b2"};
    const std::vector<std::string> awkward_pieces = {"a,b", "q\"uote", "caf\xC3\xA9", "line\nbreak", " sp ",
                                                     "crlf\r\nx", "#hash"};
    auto pick = [&](const std::vector<std::string>& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    auto text = [&](bool allow_empty) {
        std::string s;
        const auto parts = std::uniform_int_distribution<int>(allow_empty ? 0 : 1, 3)(rng);
        for (int i = 0; i < parts; ++i) {
            s += options.awkward_text && std::bernoulli_distribution(0.4)(rng) ? pick(awkward_pieces)
                                                                               : pick(plain_pieces);
        }
        return s;
    };

    Dataset ds;
    const auto n_categories = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    while (ds.taxonomy.size() < n_categories) {
        std::string label = "cat" + std::to_string(ds.taxonomy.size());
        if (options.awkward_text && std::bernoulli_distribution(0.3)(rng)) {
            label += ",\"x\" \xC3\xA9";
        }
        ds.taxonomy.push_back(label);
    }

    const auto n = std::uniform_int_distribution<std::size_t>(1, options.max_accounts)(rng);
    std::vector<AccountId> ids;
    for (std::size_t i = 0; i < n; ++i) {
        std::string id = "acc" + std::to_string(i);
        if (options.awkward_text && std::bernoulli_distribution(0.3)(rng)) {
            id += pick({"\"q", ",c", "\xC3\xA9", "#"});
        }
        ids.emplace_back(id);
    }
    for (const auto& id : ids) {
        AccountProfile p{id, text(true), pick(ds.taxonomy),
                         std::uniform_int_distribution<std::uint64_t>(0, 1'000'000)(rng)};
        ds.profiles.emplace(id, p);
        ds.posts[id];
    }

    std::vector<Edge> edges;
    std::bernoulli_distribution coin(0.35);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (coin(rng)) {
                edges.emplace_back(ids[i], ids[j]);
            }
        }
    }
    ds.graph = build_graph(ids, edges);

    std::size_t post_no = 0;
    for (const auto& id : ids) {
        const auto count = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int k = 0; k < count; ++k) {
            Post p;
            p.post_id = "p" + std::to_string(post_no++);
            if (options.awkward_text && std::bernoulli_distribution(0.2)(rng)) {
                p.post_id += " \"quoted\" \xC3\xA9";
            }
            p.author = id;
            for (auto* set : {&p.likers, &p.mentioners, &p.retweeters}) {
                const auto m = std::uniform_int_distribution<int>(0, 4)(rng);
                for (int e = 0; e < m; ++e) {
                    AccountId user = std::bernoulli_distribution(0.5)(rng)
                                         ? ids[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]
                                         : AccountId("ext" + std::to_string(std::uniform_int_distribution<int>(0, 30)(rng)));
                    if (user != id) {
                        set->insert(user);
                    }
                }
            }
            ds.posts[id].push_back(p);
        }
    }
    return ds;
}

struct SerializedDataset {
    std::string accounts;
    std::string edges;
    std::string posts;
};

inline SerializedDataset serialize(const Dataset& ds) {
    std::ostringstream a, e, p;
    write_accounts(ds, a);
    write_edges(ds, e);
    write_posts(ds, p);
    return {a.str(), e.str(), p.str()};
}

inline LoadResult load(const SerializedDataset& s) {
    std::istringstream a(s.accounts), e(s.edges), p(s.posts);
    return load_dataset(a, e, p);
}

/// Minimal checker for the undirected DOT subset the exporter emits:
///   graph ID? { (node_stmt | edge_stmt) ;? ... }
/// Returns false on any syntax error; counts node and edge statements.
class DotChecker {
public:
    explicit DotChecker(std::string text) : s_(std::move(text)) {}

    bool parse() {
        if (!keyword("graph")) return false;
        if (peek() != '{') {
            std::string ignored;
            if (!id(ignored)) return false;
        }
        if (!punct('{')) return false;
        while (true) {
            skip_ws();
            if (peek() == '}') {
                ++pos_;
                break;
            }
            std::string first;
            if (!id(first)) return false;
            skip_ws();
            if (s_.compare(pos_, 2, "--") == 0) {
                while (s_.compare(pos_, 2, "--") == 0) {
                    pos_ += 2;
                    std::string next;
                    if (!id(next)) return false;
                    skip_ws();
                }
                ++edges;
            } else {
                ++nodes;
            }
            if (peek() == '[' && !attr_list()) return false;
            skip_ws();
            if (peek() == ';') ++pos_;
        }
        skip_ws();
        return pos_ == s_.size();
    }

    std::size_t nodes = 0;
    std::size_t edges = 0;

private:
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool punct(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    bool keyword(const char* kw) {
        skip_ws();
        const std::string k(kw);
        if (s_.compare(pos_, k.size(), k) != 0) return false;
        pos_ += k.size();
        return true;
    }
    bool id(std::string& out) {
        skip_ws();
        if (pos_ >= s_.size()) return false;
        if (s_[pos_] == '"') {
            ++pos_;
            while (pos_ < s_.size() && s_[pos_] != '"') {
                if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
                out.push_back(s_[pos_++]);
            }
            if (pos_ >= s_.size()) return false;
            ++pos_;
            return true;
        }
        const auto start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (pos_ == start || std::isdigit(static_cast<unsigned char>(s_[start]))) return false;
        out = s_.substr(start, pos_ - start);
        return true;
    }
    bool attr_list() {
        if (!punct('[')) return false;
        while (peek() != ']') {
            std::string key, value;
            if (!id(key) || !punct('=') || !id(value)) return false;
            if (peek() == ';' || peek() == ',') ++pos_;
        }
        ++pos_;
        return true;
    }

    std::string s_;
    std::size_t pos_ = 0;
};

} // namespace influence::testing
