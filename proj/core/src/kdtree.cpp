#include "kdss/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

#include "kdss/error.hpp"

namespace kdss {

namespace {

// Heap entries compare lexicographically on (squared distance, index), so
// the max-heap top is always the current worst neighbor under the tie rule.
using HeapEntry = std::pair<double, PointIndex>;
using BoundedHeap =
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::less<HeapEntry>>;

void consider(BoundedHeap& heap, std::size_t k, double d2, PointIndex idx) {
    if (heap.size() < k) {
        heap.emplace(d2, idx);
    } else if (HeapEntry{d2, idx} < heap.top()) {
        heap.pop();
        heap.emplace(d2, idx);
    }
}

std::vector<Neighbor> drain(BoundedHeap& heap) {
    std::vector<Neighbor> out(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
        out[i] = {heap.top().second, heap.top().first};
        heap.pop();
    }
    return out;
}

}  // namespace

KdTree::KdTree(std::span<const Vec3> positions, std::size_t leaf_size) {
    indices_.resize(positions.size());
    std::iota(indices_.begin(), indices_.end(), PointIndex{0});
    build(positions, leaf_size);
}

KdTree::KdTree(std::span<const Vec3> positions,
               std::span<const PointIndex> subset, std::size_t leaf_size)
    : indices_(subset.begin(), subset.end()) {
    build(positions, leaf_size);
}

void KdTree::build(std::span<const Vec3> positions, std::size_t leaf_size) {
    if (indices_.empty()) throw InputError("empty index set");
    if (leaf_size == 0) throw InputError("leaf_size must be >= 1");
    for (PointIndex idx : indices_) {
        if (idx >= positions.size()) {
            throw InputError("subset index " + std::to_string(idx) +
                             " out of range");
        }
    }
    points_ = positions.data();
    leaf_size_ = leaf_size;
    nodes_.reserve(2 * (indices_.size() / leaf_size + 1));
    root_ = build_node(0, indices_.size());
}

std::uint32_t KdTree::build_node(std::size_t first, std::size_t last) {
    const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();

    const std::size_t count = last - first;
    if (count <= leaf_size_) {
        // Canonical leaf order keeps the whole structure a pure function
        // of the input.
        std::sort(indices_.begin() + first, indices_.begin() + last);
        nodes_[id].axis = -1;
        nodes_[id].a = static_cast<std::uint32_t>(first);
        nodes_[id].b = static_cast<std::uint32_t>(count);
        return id;
    }

    // Split on the widest-spread axis at the median element.
    Vec3 lo = points_[indices_[first]];
    Vec3 hi = lo;
    for (std::size_t i = first + 1; i < last; ++i) {
        const Vec3& p = points_[indices_[i]];
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    int axis = 0;
    double spread = hi.x - lo.x;
    if (hi.y - lo.y > spread) { axis = 1; spread = hi.y - lo.y; }
    if (hi.z - lo.z > spread) { axis = 2; }

    const std::size_t mid = first + count / 2;
    std::nth_element(indices_.begin() + first, indices_.begin() + mid,
                     indices_.begin() + last,
                     [this, axis](PointIndex a, PointIndex b) {
                         const double ca = points_[a][axis];
                         const double cb = points_[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });
    const double split = points_[indices_[mid]][axis];

    const std::uint32_t left = build_node(first, mid);
    const std::uint32_t right = build_node(mid, last);
    nodes_[id].axis = static_cast<std::int16_t>(axis);
    nodes_[id].split = split;
    nodes_[id].a = left;
    nodes_[id].b = right;
    return id;
}

std::vector<Neighbor> KdTree::knn(const Vec3& query, std::size_t k) const {
    if (k == 0) throw InputError("k must be >= 1");
    if (k > indices_.size()) throw InputError("k exceeds population");

    BoundedHeap heap;
    // Iterative traversal, near child first; a branch is skipped only when
    // its splitting-plane gap strictly exceeds the current worst distance
    // (equal distances may still win on the index tie rule).
    struct Frame {
        std::uint32_t node;
        double gap2;  // lower bound on distances inside this subtree
    };
    std::vector<Frame> stack;
    stack.push_back({root_, 0.0});
    while (!stack.empty()) {
        const Frame frame = stack.back();
        stack.pop_back();
        if (heap.size() == k && frame.gap2 > heap.top().first) continue;

        std::uint32_t node_id = frame.node;
        for (;;) {
            const Node& node = nodes_[node_id];
            if (node.axis < 0) {
                for (std::uint32_t i = 0; i < node.b; ++i) {
                    const PointIndex idx = indices_[node.a + i];
                    consider(heap, k, squared_distance(points_[idx], query), idx);
                }
                break;
            }
            const double delta = query[node.axis] - node.split;
            const double gap2 = delta * delta;
            const std::uint32_t near = delta <= 0.0 ? node.a : node.b;
            const std::uint32_t far = delta <= 0.0 ? node.b : node.a;
            if (heap.size() < k || gap2 <= heap.top().first) {
                stack.push_back({far, gap2});
            }
            node_id = near;
        }
    }
    return drain(heap);
}

void KdTree::for_each_leaf(
    const std::function<void(std::span<const PointIndex>)>& fn) const {
    for (const Node& node : nodes_) {
        if (node.axis < 0) {
            fn(std::span<const PointIndex>(indices_.data() + node.a, node.b));
        }
    }
}

void KdTree::visit_leaves_within(
    const Vec3& query,
    const std::function<double(std::span<const PointIndex>)>& visit) const {
    struct Frame {
        std::uint32_t node;
        double gap2;
    };
    std::vector<Frame> stack;
    stack.push_back({root_, 0.0});
    double bound = std::numeric_limits<double>::infinity();
    while (!stack.empty()) {
        const Frame frame = stack.back();
        stack.pop_back();
        if (frame.gap2 > bound) continue;

        std::uint32_t node_id = frame.node;
        for (;;) {
            const Node& node = nodes_[node_id];
            if (node.axis < 0) {
                bound = visit(
                    std::span<const PointIndex>(indices_.data() + node.a, node.b));
                break;
            }
            const double delta = query[node.axis] - node.split;
            const double gap2 = delta * delta;
            const std::uint32_t near = delta <= 0.0 ? node.a : node.b;
            const std::uint32_t far = delta <= 0.0 ? node.b : node.a;
            if (gap2 <= bound) stack.push_back({far, gap2});
            node_id = near;
        }
    }
}

std::vector<Neighbor> brute_force_knn(std::span<const Vec3> positions,
                                      std::span<const PointIndex> subset,
                                      const Vec3& query, std::size_t k) {
    std::vector<PointIndex> all;
    if (subset.empty()) {
        all.resize(positions.size());
        std::iota(all.begin(), all.end(), PointIndex{0});
        subset = all;
    }
    if (subset.empty()) throw InputError("empty index set");
    if (k == 0) throw InputError("k must be >= 1");
    if (k > subset.size()) throw InputError("k exceeds population");

    std::vector<HeapEntry> entries;
    entries.reserve(subset.size());
    for (PointIndex idx : subset) {
        if (idx >= positions.size()) {
            throw InputError("subset index " + std::to_string(idx) +
                             " out of range");
        }
        entries.emplace_back(squared_distance(positions[idx], query), idx);
    }
    std::sort(entries.begin(), entries.end());
    std::vector<Neighbor> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = {entries[i].second, entries[i].first};
    return out;
}

}  // namespace kdss
