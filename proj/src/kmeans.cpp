#include "dpr/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dpr/errors.hpp"
#include "dpr/kernels.hpp"
#include "dpr/rng.hpp"

namespace dpr {

namespace detail {

namespace {

constexpr int kMaxLloydIterations = 100;

int nearest_centroid(const std::vector<double>& point,
                     const std::vector<std::vector<double>>& centroids) {
    int best = 0;
    double best_dist = kernels::squared_distance(
        point.data(), centroids[0].data(), point.size());
    for (int c = 1; c < static_cast<int>(centroids.size()); ++c) {
        const double d = kernels::squared_distance(
            point.data(), centroids[c].data(), point.size());
        if (d < best_dist) {
            best_dist = d;
            best = c;
        }
    }
    return best;
}

std::vector<std::vector<double>> plus_plus_init(
    const std::vector<std::vector<double>>& points, int k, SplitMix64& rng) {
    const std::size_t dim = points[0].size();
    std::vector<std::vector<double>> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    centroids.push_back(points[rng.next_below(points.size())]);

    std::vector<double> dist(points.size());
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = kernels::squared_distance(
                points[i].data(), centroids[0].data(), dim);
            for (std::size_t c = 1; c < centroids.size(); ++c) {
                best = std::min(best,
                                kernels::squared_distance(
                                    points[i].data(), centroids[c].data(), dim));
            }
            dist[i] = best;
            total += best;
        }
        std::size_t chosen = 0;
        if (total > 0.0) {
            const double threshold = rng.next_double() * total;
            double cum = 0.0;
            chosen = points.size() - 1;
            for (std::size_t i = 0; i < points.size(); ++i) {
                cum += dist[i];
                if (cum > threshold && dist[i] > 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = rng.next_below(points.size());
        }
        centroids.push_back(points[chosen]);
    }
    return centroids;
}

}  // namespace

ClusterAssignment kmeans_single(const std::vector<std::vector<double>>& points,
                                int k, std::uint64_t seed,
                                std::vector<double>* inertia_trace) {
    const std::size_t dim = points[0].size();
    SplitMix64 rng(seed);
    std::vector<std::vector<double>> centroids = plus_plus_init(points, k, rng);
    std::vector<int> assignment(points.size(), -1);

    for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
        std::vector<int> next(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            next[i] = nearest_centroid(points[i], centroids);
        }

        // Empty-cluster repair: reseed on the farthest point whose cluster
        // can spare it.
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (int a : next) ++counts[static_cast<std::size_t>(a)];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            double worst = -1.0;
            std::size_t pick = points.size();
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (counts[static_cast<std::size_t>(next[i])] < 2) continue;
                const double d = kernels::squared_distance(
                    points[i].data(),
                    centroids[static_cast<std::size_t>(next[i])].data(), dim);
                if (d > worst) {
                    worst = d;
                    pick = i;
                }
            }
            if (pick == points.size()) continue;
            --counts[static_cast<std::size_t>(next[pick])];
            next[pick] = c;
            ++counts[static_cast<std::size_t>(c)];
            centroids[static_cast<std::size_t>(c)] = points[pick];
        }

        if (inertia_trace) {
            double sse = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                sse += kernels::squared_distance(
                    points[i].data(),
                    centroids[static_cast<std::size_t>(next[i])].data(), dim);
            }
            inertia_trace->push_back(sse);
        }

        const bool converged = next == assignment;
        assignment = std::move(next);
        if (converged) break;

        // Centroid update: mean of members, accumulated in input order.
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] == 0) continue;
            std::vector<double> sum(dim, 0.0);
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (assignment[i] == c) {
                    kernels::add_into(sum.data(), points[i].data(), dim);
                }
            }
            kernels::scale(sum.data(), dim,
                           1.0 / counts[static_cast<std::size_t>(c)]);
            centroids[static_cast<std::size_t>(c)] = std::move(sum);
        }
    }

    ClusterAssignment result;
    result.n_eff = k;
    result.assignment = assignment;
    result.centroids.reserve(centroids.size());
    for (auto& c : centroids) {
        result.centroids.push_back(EmbeddingVector{std::move(c)});
    }
    result.inertia = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        result.inertia += kernels::squared_distance(
            points[i].data(),
            result.centroids[static_cast<std::size_t>(assignment[i])]
                .values.data(),
            dim);
    }
    return result;
}

}  // namespace detail

ClusterAssignment kmeans(const std::vector<EmbeddingVector>& vectors, int n,
                         std::uint64_t seed, int restarts) {
    if (vectors.empty()) {
        throw DegenerateInput("kmeans: no vectors");
    }
    if (n < 1 || restarts < 1) {
        throw DegenerateInput("kmeans: n and restarts must be positive");
    }
    const std::size_t dim = vectors[0].values.size();
    for (const EmbeddingVector& v : vectors) {
        if (v.values.size() != dim) {
            throw DimensionMismatch("kmeans: vectors of differing dimension");
        }
        for (double x : v.values) {
            if (!std::isfinite(x)) {
                throw DegenerateInput("kmeans: non-finite vector entry");
            }
        }
    }

    // Normalize; all-zero vectors cannot be scaled to the unit sphere and
    // are routed to the overflow cluster.
    std::vector<std::vector<double>> points;
    std::vector<std::size_t> point_of;   // index into `vectors` per point
    std::vector<std::size_t> overflow;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const double norm2 = kernels::sum_squares(vectors[i].values.data(), dim);
        if (norm2 == 0.0) {
            overflow.push_back(i);
            continue;
        }
        std::vector<double> p = vectors[i].values;
        kernels::scale(p.data(), dim, 1.0 / std::sqrt(norm2));
        points.push_back(std::move(p));
        point_of.push_back(i);
    }

    ClusterAssignment best;
    best.assignment.assign(vectors.size(), 0);
    if (!points.empty()) {
        const std::set<std::vector<double>> distinct(points.begin(),
                                                     points.end());
        const int n_eff =
            std::min<int>(n, static_cast<int>(distinct.size()));

        bool have_best = false;
        ClusterAssignment best_run;
        for (int r = 0; r < restarts; ++r) {
            ClusterAssignment run = detail::kmeans_single(
                points, n_eff, derive_seed(seed, static_cast<std::uint64_t>(r)),
                nullptr);
            if (!have_best || run.inertia < best_run.inertia) {
                best_run = std::move(run);
                have_best = true;
            }
        }
        best.n_eff = n_eff;
        best.inertia = best_run.inertia;
        best.centroids = std::move(best_run.centroids);
        for (std::size_t p = 0; p < point_of.size(); ++p) {
            best.assignment[point_of[p]] = best_run.assignment[p];
        }
    } else {
        best.n_eff = 0;
        best.inertia = 0.0;
    }

    if (!overflow.empty()) {
        best.has_overflow = true;
        best.centroids.push_back(
            EmbeddingVector{std::vector<double>(dim, 0.0)});
        for (std::size_t i : overflow) {
            best.assignment[i] = best.n_eff;
        }
    }
    return best;
}

}  // namespace dpr
