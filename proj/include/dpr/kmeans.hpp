#pragma once

#include <cstdint>
#include <vector>

#include "dpr/providers.hpp"

namespace dpr {

struct ClusterAssignment {
    // Per input vector, the cluster it landed in. Indices run over
    // [0, n_eff); all-zero inputs, which cannot be direction-normalized,
    // go to a dedicated overflow cluster appended after the real ones.
    std::vector<int> assignment;
    std::vector<EmbeddingVector> centroids;
    double inertia = 0.0;
    int n_eff = 0;
    bool has_overflow = false;
};

// Lloyd k-means over L2-normalized vectors with k-means++ initialization.
// n_eff = min(n, number of distinct normalized vectors). Each restart runs
// to an assignment fixpoint (at most 100 iterations), repairing empty
// clusters by reseeding them to the farthest point; the best restart by
// inertia wins. Fully deterministic in (vectors, n, seed, restarts) and
// identical across platforms.
ClusterAssignment kmeans(const std::vector<EmbeddingVector>& vectors, int n,
                         std::uint64_t seed, int restarts);

namespace detail {

// Single restart over pre-normalized distinct-capable points; exposed so
// tests can watch the inertia trace (recorded after every assignment
// phase, which is non-increasing across a run).
ClusterAssignment kmeans_single(const std::vector<std::vector<double>>& points,
                                int k, std::uint64_t seed,
                                std::vector<double>* inertia_trace);

}  // namespace detail

}  // namespace dpr
