#pragma once

/**
 * @file topo.hpp
 * @brief Connected components of a sampled point set via the eps-neighborhood
 * graph (edge iff Euclidean distance <= eps) and union-find.
 *
 * The count approximates the number of components of the underlying set
 * when grid spacing << eps << the gap between components. eps_sweep makes
 * that choice visible: the longest run of equal counts is the suggestion.
 */

#include "sweep.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace pvvi {

class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t a)
    {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    /// The smaller root wins, so each root is the smallest index of its set.
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (b < a)
            std::swap(a, b);
        parent_[b] = a;
    }

  private:
    std::vector<std::size_t> parent_;
};

struct ComponentReport {
    double eps = 0.0;
    std::size_t count = 0;
    /// Component id per point; ids are ordered by each component's smallest point index.
    std::vector<std::size_t> labels;
    std::vector<std::size_t> sizes;
    std::vector<std::vector<double>> bbox_lo, bbox_hi;
    /// Component comes within eps of the clipping box; the true component may be unbounded.
    std::vector<bool> possibly_unbounded;
};

inline ComponentReport count_components(std::span<const std::vector<double>> points, double eps,
                                        double box = 0.0)
{
    if (!(eps > 0))
        throw std::invalid_argument("count_components: eps must be positive");
    ComponentReport rep;
    rep.eps = eps;
    const std::size_t N = points.size();
    if (N == 0)
        return rep;

    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return points[a][0] < points[b][0]; });
    UnionFind uf(N);
    const double eps2 = eps * eps;
    for (std::size_t a = 0; a < N; ++a) {
        const auto& pa = points[order[a]];
        for (std::size_t b = a + 1; b < N; ++b) {
            const auto& pb = points[order[b]];
            if (pb[0] - pa[0] > eps)
                break;
            double d2 = 0.0;
            for (std::size_t k = 0; k < pa.size(); ++k)
                d2 += (pa[k] - pb[k]) * (pa[k] - pb[k]);
            if (d2 <= eps2)
                uf.unite(order[a], order[b]);
        }
    }

    std::vector<std::size_t> root_label(N, N);
    rep.labels.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t r = uf.find(i);
        if (root_label[r] == N) {
            root_label[r] = rep.count++;
            rep.sizes.push_back(0);
            rep.bbox_lo.push_back(points[i]);
            rep.bbox_hi.push_back(points[i]);
            rep.possibly_unbounded.push_back(false);
        }
        const std::size_t c = root_label[r];
        rep.labels[i] = c;
        ++rep.sizes[c];
        for (std::size_t k = 0; k < points[i].size(); ++k) {
            rep.bbox_lo[c][k] = std::min(rep.bbox_lo[c][k], points[i][k]);
            rep.bbox_hi[c][k] = std::max(rep.bbox_hi[c][k], points[i][k]);
            if (box > 0 && std::abs(points[i][k]) >= box - eps)
                rep.possibly_unbounded[c] = true;
        }
    }
    return rep;
}

inline ComponentReport count_components(const SolutionCloud& cloud, double eps)
{
    return count_components(cloud.points, eps, cloud.box);
}

struct EpsSweep {
    std::vector<std::pair<double, std::size_t>> counts;
    /// Longest run of equal counts (first one on ties).
    double plateau_lo = 0.0, plateau_hi = 0.0;
    std::size_t suggested = 0;
};

inline EpsSweep eps_sweep(std::span<const std::vector<double>> points, std::span<const double> eps_list)
{
    if (!std::is_sorted(eps_list.begin(), eps_list.end()))
        throw std::invalid_argument("eps_sweep: eps list must be ascending");
    EpsSweep out;
    for (double e : eps_list)
        out.counts.emplace_back(e, count_components(points, e).count);
    std::size_t best_start = 0, best_len = 0;
    for (std::size_t i = 0; i < out.counts.size();) {
        std::size_t j = i;
        while (j < out.counts.size() && out.counts[j].second == out.counts[i].second)
            ++j;
        if (j - i > best_len) {
            best_len = j - i;
            best_start = i;
        }
        i = j;
    }
    if (best_len > 0) {
        out.plateau_lo = out.counts[best_start].first;
        out.plateau_hi = out.counts[best_start + best_len - 1].first;
        out.suggested = out.counts[best_start].second;
    }
    return out;
}

inline nlohmann::json to_json(const ComponentReport& r, const EpsSweep* sweep = nullptr)
{
    nlohmann::json j;
    j["eps"] = r.eps;
    j["count"] = r.count;
    j["sizes"] = r.sizes;
    j["possibly_unbounded"] = r.possibly_unbounded;
    if (sweep) {
        j["plateau"] = {sweep->plateau_lo, sweep->plateau_hi};
        j["suggested_count"] = sweep->suggested;
        auto arr = nlohmann::json::array();
        for (const auto& [e, c] : sweep->counts)
            arr.push_back({{"eps", e}, {"count", c}});
        j["sweep"] = arr;
    } else {
        j["plateau"] = {r.eps, r.eps};
    }
    return j;
}

} // namespace pvvi
