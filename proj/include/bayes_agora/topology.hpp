#pragma once

// Rooted balls, rooted isomorphism and the local-limit metric
// D((G,u),(G',u')) = 2^-R, R = sup { r : B_r(G,u) ~ B_r(G',u') }.

#include "graph.hpp"
#include "rational.hpp"

#include <functional>
#include <optional>
#include <unordered_map>

namespace agora {

/// Induced subgraph on the vertices within directed distance `radius` of `root`.
/// vertices() is ordered by (distance, id), so vertices().front() is the root.
class RootedBall {
public:
    Vertex root() const noexcept { return vertices_.front(); }
    int radius() const noexcept { return radius_; }
    std::size_t size() const noexcept { return vertices_.size(); }
    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    /// Distance from the root, aligned with vertices().
    const std::vector<int>& depths() const noexcept { return depths_; }
    /// Induced edges in original vertex ids.
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    /// The induced graph with vertex i standing for vertices()[i]; the root is vertex 0.
    const SocialGraph& graph() const noexcept { return local_; }

    bool contains(Vertex v) const { return local_index(v).has_value(); }

    std::optional<int> local_index(Vertex v) const
    {
        auto it = index_.find(v);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

private:
    friend RootedBall ball(const SocialGraph& g, Vertex u, int r);

    std::vector<Vertex> vertices_;
    std::vector<int> depths_;
    std::vector<Edge> edges_;
    SocialGraph local_;
    std::unordered_map<Vertex, int> index_;
    int radius_ = 0;
};

inline RootedBall ball(const SocialGraph& g, Vertex u, int r)
{
    g.check_vertex(u);
    if (r < 0)
        throw Error(ErrorCode::InvalidArgument, "ball radius must be non-negative");
    auto dist = g.distances_from(u);
    std::vector<std::pair<int, Vertex>> order;
    for (Vertex v = 0; v < g.size(); ++v)
        if (dist[v] >= 0 && dist[v] <= r)
            order.emplace_back(dist[v], v);
    std::sort(order.begin(), order.end());

    RootedBall b;
    b.radius_ = r;
    for (auto [d, v] : order) {
        b.index_.emplace(v, static_cast<int>(b.vertices_.size()));
        b.vertices_.push_back(v);
        b.depths_.push_back(d);
    }
    b.local_ = g.induced(b.vertices_);
    for (auto [a, c] : b.local_.edges())
        b.edges_.emplace_back(b.vertices_[a], b.vertices_[c]);
    return b;
}

/// Vertex correspondence (vertex of first ball, vertex of second ball), root first.
using IsoWitness = std::vector<std::pair<Vertex, Vertex>>;

namespace detail {

class RootedIsoSearch {
public:
    RootedIsoSearch(const RootedBall& a, const RootedBall& b) : a_(a), b_(b), ga_(a.graph()), gb_(b.graph())
    {
        in_a_ = in_degrees(ga_);
        in_b_ = in_degrees(gb_);
    }

    std::optional<IsoWitness> run()
    {
        const std::size_t n = a_.size();
        if (n != b_.size() || ga_.edge_count() != gb_.edge_count())
            return std::nullopt;
        if (signature(a_, ga_, in_a_) != signature(b_, gb_, in_b_))
            return std::nullopt;
        map_.assign(n, -1);
        used_.assign(n, false);
        if (!compatible(0, 0))
            return std::nullopt;
        map_[0] = 0;
        used_[0] = true;
        if (!extend(1))
            return std::nullopt;
        IsoWitness w;
        for (std::size_t i = 0; i < n; ++i)
            w.emplace_back(a_.vertices()[i], b_.vertices()[static_cast<std::size_t>(map_[i])]);
        return w;
    }

private:
    static std::vector<int> in_degrees(const SocialGraph& g)
    {
        std::vector<int> in(static_cast<std::size_t>(g.size()), 0);
        for (auto [u, w] : g.edges())
            ++in[w];
        return in;
    }

    static std::vector<std::tuple<int, int, int>> signature(const RootedBall& ball, const SocialGraph& g,
                                                            const std::vector<int>& in)
    {
        std::vector<std::tuple<int, int, int>> s;
        for (int i = 0; i < g.size(); ++i)
            s.emplace_back(ball.depths()[i], g.out_degree(i), in[i]);
        std::sort(s.begin(), s.end());
        return s;
    }

    bool compatible(int i, int j) const
    {
        return a_.depths()[i] == b_.depths()[j] && ga_.out_degree(i) == gb_.out_degree(j) && in_a_[i] == in_b_[j];
    }

    bool extend(std::size_t next)
    {
        if (next == map_.size())
            return true;
        const int i = static_cast<int>(next);
        for (int j = 0; j < gb_.size(); ++j) {
            if (used_[j] || !compatible(i, j))
                continue;
            bool ok = true;
            for (int k = 0; k < i && ok; ++k) {
                const int mk = map_[k];
                ok = ga_.has_edge(i, k) == gb_.has_edge(j, mk) && ga_.has_edge(k, i) == gb_.has_edge(mk, j);
            }
            if (!ok)
                continue;
            map_[i] = j;
            used_[j] = true;
            if (extend(next + 1))
                return true;
            used_[j] = false;
            map_[i] = -1;
        }
        return false;
    }

    const RootedBall& a_;
    const RootedBall& b_;
    const SocialGraph& ga_;
    const SocialGraph& gb_;
    std::vector<int> in_a_, in_b_;
    std::vector<int> map_;
    std::vector<bool> used_;
};

} // namespace detail

/// Root-preserving edge-preserving bijection between two balls, if any.
/// Backtracking over vertices in BFS order, pruned by depth and in/out degree.
inline std::optional<IsoWitness> rooted_isomorphism(const RootedBall& a, const RootedBall& b)
{
    return detail::RootedIsoSearch(a, b).run();
}

inline bool rooted_isomorphic(const RootedBall& a, const RootedBall& b) { return rooted_isomorphism(a, b).has_value(); }

struct LocalDistance {
    int radius = 0;      ///< largest r <= r_max with isomorphic balls
    bool capped = false; ///< true when the search stopped at r_max rather than at a mismatch
    Rational value;      ///< 2^-radius
};

inline LocalDistance local_distance(const SocialGraph& g, Vertex u, const SocialGraph& h, Vertex v, int r_max)
{
    if (r_max < 0)
        throw Error(ErrorCode::InvalidArgument, "r_max must be non-negative");
    LocalDistance d;
    d.capped = true;
    for (int r = 1; r <= r_max; ++r) {
        if (!rooted_isomorphic(ball(g, u, r), ball(h, v, r))) {
            d.capped = false;
            break;
        }
        d.radius = r;
    }
    d.value = Rational(BigInt(1), BigInt(1) << d.radius);
    return d;
}

/// A predicate on rooted graphs that is decided by the radius-`radius` ball.
struct LocalProperty {
    int radius = 0;
    std::function<bool(const RootedBall&)> predicate;

    bool holds(const SocialGraph& g, Vertex u) const { return predicate(ball(g, u, radius)); }
};

} // namespace agora
