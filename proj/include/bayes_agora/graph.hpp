#pragma once

#include "error.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace agora {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Directed simple graph; an edge (u, w) means u observes w. Undirected
/// graphs are stored closed under edge reversal.
class SocialGraph {
public:
    SocialGraph() = default;

    /// Validates simplicity (no loops, no duplicate edges, endpoints in range).
    /// Strong connectivity is checked separately by require_strongly_connected().
    static SocialGraph from_edges(int n, std::vector<Edge> edges)
    {
        if (n < 1)
            throw Error(ErrorCode::NTooSmall, "graph needs at least one vertex");
        SocialGraph g;
        g.out_.assign(static_cast<std::size_t>(n), {});
        for (auto [u, w] : edges) {
            if (u < 0 || u >= n || w < 0 || w >= n)
                throw Error(ErrorCode::UnknownVertex,
                            "edge (" + std::to_string(u) + "," + std::to_string(w) + ") outside 0.." +
                                std::to_string(n - 1));
            if (u == w)
                throw Error(ErrorCode::NotSimple, "loop at vertex " + std::to_string(u));
            g.out_[u].push_back(w);
        }
        for (auto& nbrs : g.out_) {
            std::sort(nbrs.begin(), nbrs.end());
            if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
                throw Error(ErrorCode::NotSimple, "duplicate edge");
            g.edge_count_ += nbrs.size();
        }
        return g;
    }

    int size() const noexcept { return static_cast<int>(out_.size()); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    const std::vector<Vertex>& neighbors(Vertex u) const { return out_.at(static_cast<std::size_t>(u)); }
    int out_degree(Vertex u) const { return static_cast<int>(neighbors(u).size()); }

    int max_out_degree() const noexcept
    {
        std::size_t d = 0;
        for (const auto& nbrs : out_)
            d = std::max(d, nbrs.size());
        return static_cast<int>(d);
    }

    bool has_edge(Vertex u, Vertex w) const
    {
        const auto& nbrs = neighbors(u);
        return std::binary_search(nbrs.begin(), nbrs.end(), w);
    }

    std::vector<Edge> edges() const
    {
        std::vector<Edge> result;
        result.reserve(edge_count_);
        for (Vertex u = 0; u < size(); ++u)
            for (Vertex w : out_[u])
                result.emplace_back(u, w);
        return result;
    }

    bool is_undirected() const
    {
        for (Vertex u = 0; u < size(); ++u)
            for (Vertex w : out_[u])
                if (!has_edge(w, u))
                    return false;
        return true;
    }

    void check_vertex(Vertex u) const
    {
        if (u < 0 || u >= size())
            throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(u) + " not in graph of size " +
                                                      std::to_string(size()));
    }

    /// Directed BFS distances d(u, .) along observation edges; -1 if unreachable.
    std::vector<int> distances_from(Vertex u) const
    {
        check_vertex(u);
        std::vector<int> dist(out_.size(), -1);
        std::queue<Vertex> frontier;
        dist[u] = 0;
        frontier.push(u);
        while (!frontier.empty()) {
            Vertex v = frontier.front();
            frontier.pop();
            for (Vertex w : out_[v])
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    frontier.push(w);
                }
        }
        return dist;
    }

    bool is_strongly_connected() const
    {
        if (out_.empty())
            return false;
        return all_reachable(*this) && all_reachable(reversed());
    }

    void require_strongly_connected() const
    {
        if (!is_strongly_connected())
            throw Error(ErrorCode::NotStronglyConnected, "graph is not strongly connected");
    }

    SocialGraph reversed() const
    {
        std::vector<Edge> rev;
        rev.reserve(edge_count_);
        for (auto [u, w] : edges())
            rev.emplace_back(w, u);
        return from_edges(size(), std::move(rev));
    }

    /// Induced subgraph on `vertices`; vertex i of the result is vertices[i].
    SocialGraph induced(const std::vector<Vertex>& vertices) const
    {
        std::vector<int> local(out_.size(), -1);
        for (std::size_t i = 0; i < vertices.size(); ++i)
            local[static_cast<std::size_t>(vertices[i])] = static_cast<int>(i);
        std::vector<Edge> sub;
        for (std::size_t i = 0; i < vertices.size(); ++i)
            for (Vertex w : out_[vertices[i]])
                if (local[w] >= 0)
                    sub.emplace_back(static_cast<int>(i), local[w]);
        return from_edges(static_cast<int>(vertices.size()), std::move(sub));
    }

    friend bool operator==(const SocialGraph& a, const SocialGraph& b) { return a.out_ == b.out_; }

private:
    static bool all_reachable(const SocialGraph& g)
    {
        auto d = g.distances_from(0);
        return std::find(d.begin(), d.end(), -1) == d.end();
    }

    std::vector<std::vector<Vertex>> out_;
    std::size_t edge_count_ = 0;
};

/// True iff every edge (u, w) has a directed return path from w to u of length <= L.
inline bool is_L_locally_strongly_connected(const SocialGraph& g, int L)
{
    if (L < 1)
        throw Error(ErrorCode::InvalidArgument, "L must be at least 1");
    for (Vertex w = 0; w < g.size(); ++w) {
        auto dist = g.distances_from(w);
        for (Vertex u = 0; u < g.size(); ++u)
            if (g.has_edge(u, w) && (dist[u] < 0 || dist[u] > L))
                return false;
    }
    return true;
}

namespace graphs {

namespace detail {
inline void add_undirected(std::vector<Edge>& edges, Vertex a, Vertex b)
{
    edges.emplace_back(a, b);
    edges.emplace_back(b, a);
}

inline void require_size(int n, int minimum, const char* family)
{
    if (n < minimum)
        throw Error(ErrorCode::NTooSmall, std::string(family) + " needs n >= " + std::to_string(minimum) +
                                              ", got " + std::to_string(n));
}
} // namespace detail

/// Undirected path 0 - 1 - ... - (n-1).
inline SocialGraph chain(int n)
{
    detail::require_size(n, 1, "chain");
    std::vector<Edge> e;
    for (Vertex v = 0; v + 1 < n; ++v)
        detail::add_undirected(e, v, v + 1);
    return SocialGraph::from_edges(n, std::move(e));
}

inline SocialGraph cycle(int n)
{
    detail::require_size(n, 3, "cycle");
    std::vector<Edge> e;
    for (Vertex v = 0; v < n; ++v)
        detail::add_undirected(e, v, (v + 1) % n);
    return SocialGraph::from_edges(n, std::move(e));
}

inline SocialGraph complete(int n)
{
    detail::require_size(n, 1, "complete");
    std::vector<Edge> e;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex w = 0; w < n; ++w)
            if (u != w)
                e.emplace_back(u, w);
    return SocialGraph::from_edges(n, std::move(e));
}

/// Center 0 joined in both directions to leaves 1..n-1.
inline SocialGraph star(int n)
{
    detail::require_size(n, 2, "star");
    std::vector<Edge> e;
    for (Vertex v = 1; v < n; ++v)
        detail::add_undirected(e, 0, v);
    return SocialGraph::from_edges(n, std::move(e));
}

inline constexpr int royal_count = 5;

/// Royals 0..4 form a mutually observing clique; commoners 5..n-1 form an
/// undirected chain and each observes every royal; royal 0 observes commoner 5.
inline SocialGraph royal_family(int n)
{
    detail::require_size(n, royal_count + 2, "royal_family");
    std::vector<Edge> e;
    for (Vertex a = 0; a < royal_count; ++a)
        for (Vertex b = 0; b < royal_count; ++b)
            if (a != b)
                e.emplace_back(a, b);
    for (Vertex c = royal_count; c + 1 < n; ++c)
        detail::add_undirected(e, c, c + 1);
    for (Vertex c = royal_count; c < n; ++c)
        for (Vertex r = 0; r < royal_count; ++r)
            e.emplace_back(c, r);
    e.emplace_back(0, royal_count);
    return SocialGraph::from_edges(n, std::move(e));
}

/// Undirected Erdos-Renyi graph, resampled from the seeded stream until connected.
inline SocialGraph gnp_connected(int n, double p, std::uint64_t seed, int max_retries = 1000)
{
    detail::require_size(n, 1, "gnp");
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "edge probability must lie in [0,1]");
    SplitMix64 rng(seed);
    // 53-bit uniform in [0,1); p == 1 always accepts.
    auto accept = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; };
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::vector<Edge> e;
        for (Vertex u = 0; u < n; ++u)
            for (Vertex w = u + 1; w < n; ++w)
                if (accept())
                    detail::add_undirected(e, u, w);
        auto g = SocialGraph::from_edges(n, std::move(e));
        if (g.is_strongly_connected())
            return g;
    }
    throw Error(ErrorCode::DisconnectedAfterRetries,
                "no connected G(" + std::to_string(n) + ", p) sample in " + std::to_string(max_retries) + " tries");
}

} // namespace graphs

/// Text format: first line "n <count> directed", then one "u w" pair per line
/// (0-based). Blank lines and lines starting with '#' are ignored.
inline SocialGraph parse_graph(std::istream& in, const std::string& source = "<stream>")
{
    std::string line;
    int n = -1;
    std::vector<Edge> edges;
    int line_no = 0;
    auto fail = [&](const std::string& what) -> SocialGraph {
        throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream fields(line);
        if (n < 0) {
            std::string tag, kind;
            if (!(fields >> tag >> n >> kind) || tag != "n" || kind != "directed" || n < 1)
                return fail("expected header 'n <count> directed'");
            continue;
        }
        Vertex u, w;
        std::string extra;
        if (!(fields >> u >> w) || (fields >> extra))
            return fail("expected 'u w'");
        edges.emplace_back(u, w);
    }
    if (n < 0)
        return fail("missing header");
    return SocialGraph::from_edges(n, std::move(edges));
}

inline SocialGraph read_graph_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open graph file '" + path + "'");
    return parse_graph(in, path);
}

inline void write_graph(std::ostream& out, const SocialGraph& g)
{
    out << "n " << g.size() << " directed\n";
    for (auto [u, w] : g.edges())
        out << u << ' ' << w << '\n';
}

} // namespace agora
