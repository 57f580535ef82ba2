#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "kdss/geometry.hpp"

namespace kdss {

/// One query hit: (point index, squared Euclidean distance). Results are
/// ordered ascending by distance; equal distances break toward the smaller
/// point index.
using Neighbor = std::pair<PointIndex, double>;

/// Static spatial index over 3D positions supporting exact k-nearest-
/// neighbor queries.
///
/// Construction splits on the widest-spread axis at the median. The tree
/// references the caller's position array, which must outlive it; an
/// optional subset restricts the indexed points. Deletions are not
/// supported — remove points by rebuilding over the remaining subset.
///
/// A built tree is immutable and safe for concurrent queries.
class KdTree {
public:
    static constexpr std::size_t kDefaultLeafSize = 32;

    explicit KdTree(std::span<const Vec3> positions,
                    std::size_t leaf_size = kDefaultLeafSize);
    KdTree(std::span<const Vec3> positions, std::span<const PointIndex> subset,
           std::size_t leaf_size = kDefaultLeafSize);

    std::size_t size() const noexcept { return indices_.size(); }

    /// Exactly the k nearest indexed points to query. Requires
    /// 1 <= k <= size(); throws InputError("k exceeds population") beyond.
    std::vector<Neighbor> knn(const Vec3& query, std::size_t k) const;

    /// Visits every leaf's index range; each indexed point appears in
    /// exactly one leaf.
    void for_each_leaf(
        const std::function<void(std::span<const PointIndex>)>& fn) const;

    /// Prune-aware traversal for searches whose ranking metric the 3D
    /// distance only lower-bounds (e.g. full-width feature distances).
    /// Leaves are visited nearest-subtree first; visit returns the current
    /// worst acceptable squared distance, and subtrees whose splitting-
    /// plane gap strictly exceeds it are skipped.
    void visit_leaves_within(
        const Vec3& query,
        const std::function<double(std::span<const PointIndex>)>& visit) const;

private:
    struct Node {
        double split = 0.0;
        std::uint32_t a = 0;   // internal: left child; leaf: first slot
        std::uint32_t b = 0;   // internal: right child; leaf: index count
        std::int16_t axis = -1;  // -1 marks a leaf
    };

    std::uint32_t build_node(std::size_t first, std::size_t last);
    void build(std::span<const Vec3> positions, std::size_t leaf_size);

    const Vec3* points_ = nullptr;
    std::size_t leaf_size_ = kDefaultLeafSize;
    std::vector<PointIndex> indices_;
    std::vector<Node> nodes_;
    std::uint32_t root_ = 0;
};

/// Exact k-NN by linear scan with the same ordering and tie rule as
/// KdTree::knn. Reference implementation for property tests; an empty
/// subset means "all points".
std::vector<Neighbor> brute_force_knn(std::span<const Vec3> positions,
                                      std::span<const PointIndex> subset,
                                      const Vec3& query, std::size_t k);

}  // namespace kdss
